#include <sstream>

#include "doctest.h"
#include "granmorph/config.hpp"
#include "granmorph/report.hpp"
#include "granmorph/tessellate.hpp"
#include "helpers.hpp"
#include "json.hpp"

using namespace granmorph;

namespace {

RenderScene unit_square_scene(const ContourSet& cs) {
    RenderScene scene;
    scene.contours = &cs;
    scene.width = 4;
    scene.height = 4;
    return scene;
}

}  // namespace

TEST_CASE("svg contour layer renders one closed path per contour") {
    ContourSet cs;
    cs.width = cs.height = 4;
    cs.contours.push_back(
        {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, Contour::Kind::outer, -1});
    RenderSpec spec;
    spec.layers = {Layer::contours};
    std::stringstream out;
    render_svg(unit_square_scene(cs), spec, out);
    const std::string svg = out.str();
    CHECK(svg.find("<g id=\"contours\">") != std::string::npos);
    CHECK(svg.find("M 0.000 0.000 L 1.000 0.000 L 1.000 1.000 L 0.000 1.000 Z") !=
          std::string::npos);
    CHECK(svg.find("timestamp") == std::string::npos);
}

TEST_CASE("svg grey-triangle layer fills with the triangle grey") {
    ContourSet cs;
    cs.width = cs.height = 4;
    cs.contours.push_back(
        {{{0, 0}, {2, 0}, {2, 2}, {0, 2}}, Contour::Kind::outer, -1});
    GreyMesh gm;
    gm.mesh = constrained_delaunay(cs);
    REQUIRE(gm.mesh.tris.size() == 2);
    gm.grey = {100, 200};
    RenderSpec spec;
    spec.layers = {Layer::grey_triangles};
    RenderScene scene;
    scene.grey_mesh = &gm;
    scene.width = scene.height = 4;
    std::stringstream out;
    render_svg(scene, spec, out);
    CHECK(out.str().find("rgb(100,100,100)") != std::string::npos);
    CHECK(out.str().find("rgb(200,200,200)") != std::string::npos);
}

TEST_CASE("svg output is byte identical across runs and layer independent") {
    ContourSet cs;
    cs.width = cs.height = 4;
    cs.contours.push_back(
        {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, Contour::Kind::outer, -1});
    RenderSpec spec;
    spec.layers = {Layer::contours};
    std::stringstream a, b;
    render_svg(unit_square_scene(cs), spec, a);
    render_svg(unit_square_scene(cs), spec, b);
    CHECK(a.str() == b.str());

    RenderSpec empty;
    std::stringstream out;
    CHECK_THROWS_AS(render_svg(unit_square_scene(cs), empty, out),
                    std::invalid_argument);
}

TEST_CASE("stats csv schema") {
    std::stringstream empty;
    write_stats_csv({}, empty);
    CHECK(empty.str() == "id,class,area,length,width,cx,cy,orientation,holes\n");

    ParticleStats p;
    p.id = 0;
    p.cls = ParticleClass::grain;
    p.area = 6.75;
    p.length = 4.5;
    p.width = 1.5;
    p.centroid = {2.0, 0.5};
    p.orientation = 0;
    p.holes = 0;
    std::stringstream one;
    write_stats_csv({p}, one);
    CHECK(one.str() ==
          "id,class,area,length,width,cx,cy,orientation,holes\n"
          "0,grain,6.75,4.5,1.5,2,0.5,0,0\n");
}

TEST_CASE("scene json round trips") {
    SceneStats s;
    s.grain_count = 2;
    s.binder_count = 1;
    s.area_fraction = 0.53125;
    s.bins = {0, 0, 1, 1};
    ParticleStats p;
    p.id = 0;
    p.area = 12.25;
    p.length = 3.14159265358979;
    std::stringstream out;
    write_scene_json(s, {p}, out);
    const auto j = nlohmann::json::parse(out.str());
    CHECK(j["grain_count"] == 2);
    CHECK(j["binder_count"] == 1);
    CHECK(j["area_fraction"].get<double>() == 0.53125);
    CHECK(j["histogram"]["bins"][2] == 1);
    CHECK(j["particles"][0]["area"].get<double>() == 12.25);
    CHECK(j["particles"][0]["length"].get<double>() == p.length);
}

TEST_CASE("config parsing, overrides, and validation") {
    std::stringstream in(
        "# comment\n"
        "segmentation = pcnn\n"
        "smoothing = on\n"
        "dilation = 0.25   # trailing comment\n"
        "separation.threshold = 40\n"
        "render.layers = contours, mesh\n"
        "\n");
    PipelineConfig cfg;
    apply_config(cfg, parse_config(in));
    CHECK(cfg.segmentation == Segmenter::pcnn);
    CHECK(cfg.smoothing);
    CHECK(cfg.separation.threshold == 40);
    REQUIRE(cfg.render.layers.size() == 2);
    CHECK(cfg.render.layers[0] == Layer::contours);
    CHECK(cfg.render.layers[1] == Layer::mesh);

    CHECK_THROWS_AS(apply_config_key(cfg, "no.such.key", "1"),
                    std::invalid_argument);
    CHECK_THROWS_AS(apply_config_key(cfg, "dilation", "fast"),
                    std::invalid_argument);

    cfg.dilation = 0.6;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg.dilation = 0.25;
    cfg.workers = 0;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
}

TEST_CASE("presets span the 2x2 segmentation design") {
    CHECK(preset_config("original-spectral").segmentation == Segmenter::spectral);
    CHECK_FALSE(preset_config("original-spectral").smoothing);
    CHECK(preset_config("original-pcnn").segmentation == Segmenter::pcnn);
    CHECK(preset_config("smoothed-spectral").smoothing);
    CHECK(preset_config("smoothed-pcnn").segmentation == Segmenter::pcnn);
    CHECK(preset_config("smoothed-pcnn").smoothing);
    CHECK_THROWS_AS((void)preset_config("bogus"), std::invalid_argument);
    // Shipped preset files parse to the same settings.
    for (const std::string& name : preset_names()) {
        const PipelineConfig cfg =
            load_config(std::string(GRANMORPH_SOURCE_DIR) + "/presets/" + name +
                        ".cfg");
        const PipelineConfig builtin = preset_config(name);
        CHECK(cfg.segmentation == builtin.segmentation);
        CHECK(cfg.smoothing == builtin.smoothing);
        validate_config(cfg);
    }
}
