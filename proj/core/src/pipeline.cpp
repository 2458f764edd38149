#include "granmorph/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "granmorph/cat.hpp"
#include "granmorph/contour.hpp"
#include "granmorph/morphology.hpp"
#include "granmorph/raster.hpp"
#include "granmorph/report.hpp"

namespace granmorph {

namespace {

const std::pair<Stage, const char*> kStageNames[] = {
    {Stage::smooth, "smooth"},     {Stage::segment, "segment"},
    {Stage::contours, "contours"}, {Stage::mesh, "mesh"},
    {Stage::skeleton, "skeleton"}, {Stage::separate, "separate"},
    {Stage::stats, "stats"},       {Stage::render, "render"},
};

template <typename Fn>
auto at_stage(Stage s, Fn&& fn) {
    try {
        return fn();
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("stage ") + stage_name(s) + ": " +
                                 e.what());
    }
}

template <typename Writer>
void write_artifact(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    writer(out);
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

const char* stage_name(Stage s) {
    for (const auto& [stage, name] : kStageNames)
        if (stage == s) return name;
    throw std::invalid_argument("stage_name: unknown stage");
}

Stage stage_from_name(const std::string& name) {
    for (const auto& [stage, n] : kStageNames)
        if (name == n) return stage;
    throw std::invalid_argument("unknown stage: " + name);
}

void run_pipeline(const PipelineConfig& cfg, Stage upto) {
    validate_config(cfg);
    const std::filesystem::path out(cfg.out);
    std::filesystem::create_directories(out);

    GreyImage img = at_stage(Stage::smooth, [&] {
        if (cfg.input.empty()) throw std::runtime_error("no input configured");
        GreyImage loaded = load_greyscale(cfg.input);
        if (!cfg.smoothing) return loaded;
        PcnnParams p = cfg.pcnn;
        p.mode = PcnnParams::Mode::smooth;
        GreyImage smoothed = pcnn_smooth(loaded, p);
        save_pgm(smoothed, (out / "smoothed.pgm").string());
        return smoothed;
    });
    write_artifact(out / "grey-histogram.csv", [&](std::ostream& o) {
        write_histogram_csv(grey_histogram(img), o);
    });
    if (upto == Stage::smooth) return;

    const BinaryImage mask = at_stage(Stage::segment, [&] {
        BinaryImage m = cfg.segmentation == Segmenter::spectral
                            ? spectral_segment(img, cfg.band)
                            : pcnn_segment(img, cfg.pcnn, cfg.band);
        save_mask_pgm(m, (out / "mask.pgm").string());
        return m;
    });
    if (upto == Stage::segment) return;

    const ContourSet cs = at_stage(Stage::contours, [&] {
        ContourSet c = extract_contours(mask, cfg.dilation);
        write_artifact(out / "contours.txt",
                       [&](std::ostream& o) { write_contours(c, o); });
        return c;
    });
    if (upto == Stage::contours) return;

    const TriMesh mesh1 = at_stage(Stage::mesh, [&] {
        TriMesh m = constrained_delaunay(cs);
        write_artifact(out / "mesh1.txt",
                       [&](std::ostream& o) { write_mesh(m, o); });
        return m;
    });
    if (upto == Stage::mesh) return;

    at_stage(Stage::skeleton, [&] {
        const CatSkeleton skel = build_skeleton(mesh1, classify_triangles(mesh1));
        write_artifact(out / "skeleton1.txt",
                       [&](std::ostream& o) { write_skeleton(skel, o); });
    });
    if (upto == Stage::skeleton) return;

    // Separation, classification, and hole removal produce the final contours.
    const ContourSet cs_final = at_stage(Stage::separate, [&] {
        ContourSet separated = separate_grains(cs, img, cfg.separation);
        write_artifact(out / "contours-separated.txt",
                       [&](std::ostream& o) { write_contours(separated, o); });
        const TriMesh mesh2 = constrained_delaunay(separated);
        write_artifact(out / "mesh2.txt",
                       [&](std::ostream& o) { write_mesh(mesh2, o); });
        const CatSkeleton skel2 = build_skeleton(mesh2, classify_triangles(mesh2));
        write_artifact(out / "skeleton2.txt",
                       [&](std::ostream& o) { write_skeleton(skel2, o); });
        const GreyMesh gm2 = triangle_mean_grey(mesh2, img);
        ContourSet final_cs = remove_holes(separated, classify_particles(gm2, cfg.band));
        write_artifact(out / "contours-final.txt",
                       [&](std::ostream& o) { write_contours(final_cs, o); });
        return final_cs;
    });
    if (upto == Stage::separate) return;

    TriMesh mesh3;
    GreyMesh gm3;
    CatSkeleton skel3, pruned;
    std::vector<ParticleStats> particles;
    at_stage(Stage::stats, [&] {
        mesh3 = constrained_delaunay(cs_final);
        write_artifact(out / "mesh3.txt",
                       [&](std::ostream& o) { write_mesh(mesh3, o); });
        gm3 = triangle_mean_grey(mesh3, img);
        skel3 = build_skeleton(mesh3, classify_triangles(mesh3));
        write_artifact(out / "skeleton3.txt",
                       [&](std::ostream& o) { write_skeleton(skel3, o); });
        pruned = prune_skeleton(mesh3, skel3, cfg.prune_tau);
        write_artifact(out / "skeleton3-pruned.txt",
                       [&](std::ostream& o) { write_skeleton(pruned, o); });
        particles = particle_statistics(mesh3, pruned, cs_final,
                                        classify_particles(gm3, cfg.band),
                                        cfg.workers);
        const SceneStats scene = scene_statistics(
            particles, img.width(), img.height(), cfg.histogram_bin_width);
        write_artifact(out / "stats.csv",
                       [&](std::ostream& o) { write_stats_csv(particles, o); });
        write_artifact(out / "scene.json", [&](std::ostream& o) {
            write_scene_json(scene, particles, o);
        });
    });
    if (upto == Stage::stats) return;

    at_stage(Stage::render, [&] {
        RenderSpec spec = cfg.render;
        if (spec.layers.empty())
            spec.layers = {Layer::grey_triangles, Layer::contours,
                           Layer::skeleton_pruned};
        RenderScene scene;
        scene.image = &img;
        scene.mask = &mask;
        scene.contours = &cs_final;
        scene.mesh = &mesh3;
        scene.grey_mesh = &gm3;
        scene.skeleton_unpruned = &skel3;
        scene.skeleton_pruned = &pruned;
        scene.width = img.width();
        scene.height = img.height();
        write_artifact(out / "overlay.svg",
                       [&](std::ostream& o) { render_svg(scene, spec, o); });
    });
}

}  // namespace granmorph
