#pragma once

#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include "granmorph/contour.hpp"
#include "granmorph/geometry.hpp"

namespace granmorph {

// Constrained Delaunay tessellation of blob interiors. Edge k of a triangle
// joins v[k] and v[(k+1)%3]; neighbor[k] is the triangle index across that
// edge or -1 on the boundary. Triangles are CCW (positive area) in the image
// frame.
struct TriMesh {
    struct Tri {
        std::array<int, 3> v{};
        std::array<bool, 3> constrained{};
        std::array<int, 3> neighbor{-1, -1, -1};
        int blob = 0;
    };

    std::vector<Vec2> vertices;
    std::vector<Tri> tris;
    int blob_count = 0;

    Vec2 vertex(int i) const { return vertices[std::size_t(i)]; }
    double tri_area(int t) const {
        const Tri& tr = tris[std::size_t(t)];
        return triangle_area(vertex(tr.v[0]), vertex(tr.v[1]), vertex(tr.v[2]));
    }
    Vec2 tri_centroid(int t) const {
        const Tri& tr = tris[std::size_t(t)];
        return triangle_centroid(vertex(tr.v[0]), vertex(tr.v[1]), vertex(tr.v[2]));
    }
    // Count of internal (non-constrained, two-sided) edges of a triangle.
    int internal_edge_count(int t) const;
};

// Triangulates each blob (outer contour plus its holes) independently with no
// Steiner points; contour segments become constrained edges and every
// non-constrained interior edge is locally Delaunay. Cocircular ties resolve
// to the diagonal containing the lowest vertex index. Throws
// std::runtime_error with a diagnostic on invalid input (non-simple or
// overlapping contours).
TriMesh constrained_delaunay(const ContourSet& cs);

// Verification oracle: (triangle, edge) pairs of non-constrained interior
// edges that fail the in-circle test. Empty on any valid output of
// constrained_delaunay.
std::vector<std::pair<int, int>> check_locally_delaunay(const TriMesh& mesh);

// Text format: `v x y` lines, then `t i j k c1 c2 c3 blob` lines.
void write_mesh(const TriMesh& mesh, std::ostream& out);
TriMesh read_mesh(std::istream& in);

// Recomputes neighbor links from shared vertex pairs.
void rebuild_adjacency(TriMesh& mesh);

}  // namespace granmorph
