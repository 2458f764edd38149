#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "granmorph/cat.hpp"
#include "granmorph/contour.hpp"
#include "granmorph/morphology.hpp"
#include "granmorph/raster.hpp"
#include "granmorph/segmentation.hpp"
#include "granmorph/tessellate.hpp"

namespace granmorph {

enum class Layer {
    image,
    mask,
    contours,
    mesh,
    grey_triangles,
    skeleton_unpruned,
    skeleton_pruned,
};

const char* layer_name(Layer l);
Layer layer_from_name(const std::string& name);  // throws std::invalid_argument

struct RenderSpec {
    std::vector<Layer> layers;            // drawn in order; must be non-empty
    double stroke_width = 0.15;           // px, image frame
    double scale = 4.0;                   // output pixels per image pixel
    std::map<Layer, std::string> palette; // overrides the built-in colors
};

// Artifacts available for rendering; null members simply skip their layers.
struct RenderScene {
    const GreyImage* image = nullptr;
    const BinaryImage* mask = nullptr;
    const ContourSet* contours = nullptr;
    const TriMesh* mesh = nullptr;
    const GreyMesh* grey_mesh = nullptr;
    const CatSkeleton* skeleton_unpruned = nullptr;
    const CatSkeleton* skeleton_pruned = nullptr;
    int width = 0;   // image frame extents
    int height = 0;
};

// Layered SVG 1.1 document, one <g> per requested layer, 3-decimal
// coordinates, no timestamps. Throws std::invalid_argument on empty layers.
void render_svg(const RenderScene& scene, const RenderSpec& spec,
                std::ostream& out);

// CSV rows `id,class,area,length,width,cx,cy,orientation,holes` in particle
// id order, 6 significant digits.
void write_stats_csv(const std::vector<ParticleStats>& particles,
                     std::ostream& out);

// JSON scene summary with the particle table; numbers keep full precision so
// the document parses back to the same values.
void write_scene_json(const SceneStats& scene,
                      const std::vector<ParticleStats>& particles,
                      std::ostream& out);

}  // namespace granmorph
