#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "granmorph/geometry.hpp"
#include "granmorph/tessellate.hpp"

namespace granmorph {

// Triangle taxonomy by internal (non-constrained, two-sided) edge count:
// 3 = junction, 2 = sleeve, 1 = termination, 0 = isolated.
enum class TriClass : std::uint8_t { isolated, termination, sleeve, junction };

std::vector<TriClass> classify_triangles(const TriMesh& mesh);

// Chain complex of pairwise adjacent triangles. Junction triangles belong to
// no complex; they are recorded as end markers only. A limb runs from a
// junction to a termination (the termination is part of the complex), a
// torso connects two junctions (sleeves only), and a free chain is bounded
// by terminations at both ends (a blob without junctions). A junction-free
// annular blob yields a closed torso with no end markers.
struct ChainComplex {
    enum class Kind { limb, torso, free_chain };

    Kind kind = Kind::free_chain;
    std::vector<int> triangles;  // ordered along the chain
    int end_a = -1;              // bounding junction/termination; -1 for cycles
    int end_b = -1;
    int blob = 0;
};

std::vector<ChainComplex> chain_decompose(const TriMesh& mesh,
                                          const std::vector<TriClass>& classes);

// Chordal axis skeleton: chord midpoints, junction centroids and termination
// apexes joined per the triangle classes. Node width is the generating chord
// length (0 at termination apexes, mean of incident chords at junction
// centroids, equivalent diameter for isolated triangles).
struct CatSkeleton {
    struct Node {
        Vec2 p;
        double width = 0;
        int blob = 0;
    };
    struct Segment {
        int a = 0;
        int b = 0;
        int complex_id = -1;
    };

    std::vector<Node> nodes;
    std::vector<Segment> segments;
    std::vector<ChainComplex> complexes;
    std::vector<int> complex_parent;       // hierarchy; -1 at blob roots
    std::vector<std::uint8_t> collapsed;   // per blob: degenerated to one node
    int blob_count = 0;

    double total_length(int blob) const;
    // Mean chord width along the skeleton, weighted by segment length.
    double mean_width(int blob) const;
};

CatSkeleton build_skeleton(const TriMesh& mesh, const std::vector<TriClass>& classes);

// Removes limbs whose skeleton length falls below tau times the width of
// their junction chord, cascading leaves-first: junctions that lose incident
// complexes reclassify and the chains re-merge, so a compact blob can erode
// to a single node. Free chains of blobs that never had a junction are
// exempt; a residual junction-free chain left over by pruning collapses to a
// single node when its own length/width ratio falls below tau.
CatSkeleton prune_skeleton(const TriMesh& mesh, const CatSkeleton& skel, double tau);

// Text export: `n x y w` node lines then `s a b complex` segment lines.
void write_skeleton(const CatSkeleton& skel, std::ostream& out);

// Internal building block shared with morphology: triangles currently kept.
CatSkeleton build_skeleton_masked(const TriMesh& mesh,
                                  const std::vector<std::uint8_t>& active);

}  // namespace granmorph
