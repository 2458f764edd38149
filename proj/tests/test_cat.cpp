#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "doctest.h"
#include "granmorph/cat.hpp"
#include "granmorph/tessellate.hpp"
#include "helpers.hpp"

using namespace granmorph;
using namespace testutil;

namespace {

TriMesh strip_mesh() {
    BinaryImage m = make_binary(10, 1, 1);
    return constrained_delaunay(extract_contours(m, 0.25));
}

BinaryImage ngon_mask(int sides, double radius, double phase = 0.1) {
    // Pixel-center rasterization of a regular polygon.
    const int size = int(2 * radius) + 6;
    const double c = size / 2.0;
    std::vector<Vec2> poly;
    for (int i = 0; i < sides; ++i) {
        const double a = 2 * 3.14159265358979323846 * i / sides + phase;
        poly.push_back({c + radius * std::cos(a), c + radius * std::sin(a)});
    }
    BinaryImage m = make_binary(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x)
            if (point_strictly_inside(poly, {x + 0.5, y + 0.5})) m.set(x, y, 1);
    return m;
}

struct SkeletonGraph {
    int nodes = 0, edges = 0, components = 0;
};

SkeletonGraph blob_graph(const CatSkeleton& skel, int blob) {
    std::map<int, int> parent;
    for (int i = 0; i < int(skel.nodes.size()); ++i)
        if (skel.nodes[i].blob == blob) parent[i] = i;
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    SkeletonGraph g;
    g.nodes = int(parent.size());
    for (const auto& s : skel.segments) {
        if (skel.nodes[s.a].blob != blob) continue;
        ++g.edges;
        parent[find(s.a)] = find(s.b);
    }
    for (const auto& [v, p] : parent)
        if (find(v) == v) ++g.components;
    return g;
}

}  // namespace

TEST_CASE("strip decomposes into a single free chain of two terminations") {
    const TriMesh m = strip_mesh();
    REQUIRE(m.tris.size() == 2);
    const auto cls = classify_triangles(m);
    CHECK(cls[0] == TriClass::termination);
    CHECK(cls[1] == TriClass::termination);
    const auto complexes = chain_decompose(m, cls);
    REQUIRE(complexes.size() == 1);
    CHECK(complexes[0].kind == ChainComplex::Kind::free_chain);
    CHECK(complexes[0].triangles.size() == 2);

    const CatSkeleton skel = build_skeleton(m, cls);
    CHECK(skel.nodes.size() == 3);  // shared chord midpoint + two apexes
    CHECK(skel.segments.size() == 2);
    // Chord width equals the diagonal of the dilated rectangle.
    double w = 0;
    for (const auto& n : skel.nodes) w = std::max(w, n.width);
    CHECK(w == doctest::Approx(std::hypot(10.5, 1.5)).epsilon(1e-12));
}

TEST_CASE("classes count internal edges") {
    // A triangulated disc has junctions; verify the class/edge correspondence.
    const TriMesh m = constrained_delaunay(extract_contours(ngon_mask(12, 9), 0.25));
    const auto cls = classify_triangles(m);
    for (int t = 0; t < int(m.tris.size()); ++t) {
        const int d = m.internal_edge_count(t);
        CHECK(int(cls[t]) == d);
    }
}

TEST_CASE("leaf formula and skeleton topology on a random corpus") {
    std::mt19937 rng(31);
    int checked_blobs = 0;
    for (int trial = 0; trial < 30; ++trial) {
        const int w = 3 + int(rng() % 12), h = 3 + int(rng() % 12);
        const ContourSet cs = extract_contours(random_mask(w, h, 0.5, rng), 0.25);
        if (cs.contours.empty()) continue;
        const TriMesh m = constrained_delaunay(cs);
        const auto cls = classify_triangles(m);
        const CatSkeleton skel = build_skeleton(m, cls);

        std::vector<int> tris(m.blob_count, 0), junc(m.blob_count, 0),
            term(m.blob_count, 0), holes(m.blob_count, 0);
        for (int t = 0; t < int(m.tris.size()); ++t) {
            const int b = m.tris[t].blob;
            ++tris[b];
            if (cls[t] == TriClass::junction) ++junc[b];
            if (cls[t] == TriClass::termination) ++term[b];
        }
        {
            int b = -1;
            for (const Contour& c : cs.contours)
                c.kind == Contour::Kind::outer ? ++b : ++holes[b];
        }
        for (int b = 0; b < m.blob_count; ++b) {
            if (tris[b] >= 2 && holes[b] == 0) {
                CHECK(term[b] == junc[b] + 2);
                ++checked_blobs;
            }
            const SkeletonGraph g = blob_graph(skel, b);
            CHECK(g.components == 1);
            // Cycle rank of the skeleton equals the hole count.
            CHECK(g.edges - g.nodes + g.components == holes[b]);
        }
        // Every node lies inside or on its blob polygon.
        {
            std::vector<const Contour*> outer_of_blob;
            for (const Contour& c : cs.contours)
                if (c.kind == Contour::Kind::outer) outer_of_blob.push_back(&c);
            for (const auto& n : skel.nodes)
                CHECK(point_inside_or_on(outer_of_blob[std::size_t(n.blob)]->points,
                                         n.p));
        }
    }
    CHECK(checked_blobs > 20);
}

TEST_CASE("annulus yields a closed torso and a skeleton cycle") {
    const ContourSet cs = extract_contours(
        mask_from(4, 4, {1, 1, 1, 1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 1, 1, 1}), 0.25);
    REQUIRE(cs.contours.size() == 2);
    const TriMesh m = constrained_delaunay(cs);
    const auto cls = classify_triangles(m);
    const auto complexes = chain_decompose(m, cls);
    bool has_junction = false;
    for (auto c : cls) has_junction |= c == TriClass::junction;
    if (!has_junction) {
        REQUIRE(complexes.size() == 1);
        CHECK(complexes[0].kind == ChainComplex::Kind::torso);
        CHECK(complexes[0].end_a == -1);
    }
    const CatSkeleton skel = build_skeleton(m, cls);
    const SkeletonGraph g = blob_graph(skel, 0);
    CHECK(g.components == 1);
    CHECK(g.edges - g.nodes + g.components == 1);
}

TEST_CASE("pruning at tau 0 is the identity") {
    const TriMesh m = constrained_delaunay(extract_contours(ngon_mask(12, 9), 0.25));
    const CatSkeleton skel = build_skeleton(m, classify_triangles(m));
    const CatSkeleton pruned = prune_skeleton(m, skel, 0.0);
    std::stringstream a, b;
    write_skeleton(skel, a);
    write_skeleton(pruned, b);
    CHECK(a.str() == b.str());
}

TEST_CASE("pruning spares native free chains") {
    const TriMesh m = strip_mesh();
    const CatSkeleton skel = build_skeleton(m, classify_triangles(m));
    const CatSkeleton pruned = prune_skeleton(m, skel, 1.0);
    std::stringstream a, b;
    write_skeleton(skel, a);
    write_skeleton(pruned, b);
    CHECK(a.str() == b.str());
    CHECK(pruned.collapsed[0] == 0);
}

TEST_CASE("compact polygon prunes to a single interior node at tau 1") {
    const ContourSet cs = extract_contours(ngon_mask(12, 9), 0.25);
    const TriMesh m = constrained_delaunay(cs);
    const CatSkeleton skel = build_skeleton(m, classify_triangles(m));
    const CatSkeleton pruned = prune_skeleton(m, skel, 1.0);
    int nodes = 0;
    for (const auto& n : pruned.nodes)
        if (n.blob == 0) ++nodes;
    CHECK(nodes == 1);
    CHECK(pruned.segments.empty());
    CHECK(point_strictly_inside(cs.contours[0].points, pruned.nodes[0].p));
}

TEST_CASE("pruned skeleton length is monotone in tau") {
    std::mt19937 rng(97);
    for (int trial = 0; trial < 10; ++trial) {
        const int w = 6 + int(rng() % 10), h = 6 + int(rng() % 10);
        const ContourSet cs = extract_contours(random_mask(w, h, 0.55, rng), 0.25);
        if (cs.contours.empty()) continue;
        const TriMesh m = constrained_delaunay(cs);
        const CatSkeleton skel = build_skeleton(m, classify_triangles(m));
        double prev = std::numeric_limits<double>::infinity();
        for (double tau : {0.0, 0.5, 1.0, 1.5, 2.0, 3.0}) {
            const CatSkeleton p = prune_skeleton(m, skel, tau);
            double len = 0;
            for (int b = 0; b < p.blob_count; ++b) len += p.total_length(b);
            CHECK(len <= prev + 1e-9);
            prev = len;
        }
    }
}
