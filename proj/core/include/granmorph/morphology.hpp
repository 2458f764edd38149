#pragma once

#include <cstdint>
#include <vector>

#include "granmorph/cat.hpp"
#include "granmorph/contour.hpp"
#include "granmorph/raster.hpp"
#include "granmorph/segmentation.hpp"
#include "granmorph/tessellate.hpp"

namespace granmorph {

// Mesh with a mean grey level attached to every triangle.
struct GreyMesh {
    TriMesh mesh;
    std::vector<double> grey;  // per triangle, in [0, 255]
};

// Grey-level fluctuation measure along a chain complex: full range of the
// triangle greys, or the largest step between consecutive triangles.
enum class FluctuationMode { range, max_step };

struct SeparationConfig {
    double threshold = 30.0;  // grey levels; cut when fluctuation >= threshold
    int max_passes = 8;
    FluctuationMode mode = FluctuationMode::range;
};

enum class ParticleClass : std::uint8_t { grain, binder };

struct ParticleStats {
    int id = 0;
    ParticleClass cls = ParticleClass::grain;
    double area = 0;         // px^2
    double length = 0;       // px, along the pruned skeleton
    double width = 0;        // px, mean local chord width
    Vec2 centroid{};         // px
    double orientation = 0;  // degrees in [0, 180)
    int holes = 0;
};

struct SceneStats {
    int grain_count = 0;
    int binder_count = 0;
    double area_fraction = 0;          // grain area / image area
    double bin_width = 1.0;            // equivalent-diameter bin size, px
    std::vector<std::uint64_t> bins;   // diameter histogram, bin i = [i*w, (i+1)*w)
};

// Mean grey level of the pixels whose centers fall in each triangle; boundary
// ties go to the lower triangle id, and triangles covering no pixel center
// take the grey of the pixel containing their centroid.
GreyMesh triangle_mean_grey(const TriMesh& mesh, const GreyImage& img);

// Fluctuation over the complex's triangles including its bounding junctions.
double torso_fluctuation(const ChainComplex& complex, const GreyMesh& gm,
                         FluctuationMode mode = FluctuationMode::range);

// One separation pass: cut every torso / free chain whose fluctuation meets
// the threshold along its chord of maximal adjacent grey difference, and
// retrace the refined contours. Returns the number of cuts made.
int cut_blobs(const GreyMesh& gm, const CatSkeleton& skel,
              const SeparationConfig& cfg, ContourSet& cs);

// Iterates cut_blobs / retessellation to a fixpoint. Throws
// std::runtime_error if cuts are still pending after cfg.max_passes.
ContourSet separate_grains(const ContourSet& cs, const GreyImage& img,
                           const SeparationConfig& cfg);

// Grain iff the blob's area-weighted mean grey falls outside the binder band.
std::vector<ParticleClass> classify_particles(const GreyMesh& gm,
                                              SpectralBand binder_band = {});

// Drops hole contours of grain-class blobs; binder blobs keep theirs.
ContourSet remove_holes(const ContourSet& cs,
                        const std::vector<ParticleClass>& classes);

// Per-blob metrics from the tessellation and the pruned skeleton. Blobs whose
// skeleton is a single node measure length as the longest boundary chord
// through that node and width as the area-equivalent 4A/(pi*length).
std::vector<ParticleStats> particle_statistics(
    const TriMesh& mesh, const CatSkeleton& pruned, const ContourSet& cs,
    const std::vector<ParticleClass>& classes, int workers = 1);

SceneStats scene_statistics(const std::vector<ParticleStats>& particles,
                            int image_width, int image_height,
                            double bin_width = 1.0);

}  // namespace granmorph
