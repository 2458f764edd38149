// Command-line front end: runs the full analysis pipeline or single stages,
// driven by a flat key=value config file, a named preset, and --set overrides.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "granmorph/cat.hpp"
#include "granmorph/contour.hpp"
#include "granmorph/pipeline.hpp"
#include "granmorph/raster.hpp"
#include "granmorph/segmentation.hpp"
#include "granmorph/tessellate.hpp"

namespace {

using namespace granmorph;

struct Cli {
    std::string input;
    std::string config_path;
    std::string preset;
    std::string out;
    std::string stage;
    std::vector<std::string> overrides;
};

PipelineConfig build_config(const Cli& cli) {
    PipelineConfig cfg;
    if (!cli.preset.empty()) cfg = preset_config(cli.preset);
    if (!cli.config_path.empty()) {
        std::ifstream in(cli.config_path);
        if (!in) throw std::runtime_error("cannot open config: " + cli.config_path);
        apply_config(cfg, parse_config(in));
    }
    for (const std::string& kv : cli.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("--set expects key=value, got: " + kv);
        apply_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!cli.input.empty()) cfg.input = cli.input;
    if (!cli.out.empty()) cfg.out = cli.out;
    return cfg;
}

void add_common(CLI::App* cmd, Cli& cli, bool with_stage = false) {
    cmd->add_option("input", cli.input, "input file");
    cmd->add_option("--config", cli.config_path, "key=value config file");
    cmd->add_option("--preset", cli.preset,
                    "original-spectral | original-pcnn | smoothed-spectral | "
                    "smoothed-pcnn");
    cmd->add_option("--out", cli.out, "output directory");
    cmd->add_option("--set", cli.overrides, "override a config key (key=value)");
    if (with_stage)
        cmd->add_option("--stage", cli.stage,
                        "stop after this stage: smooth, segment, contours, "
                        "mesh, skeleton, separate, stats, render");
}

std::ofstream open_out(const PipelineConfig& cfg, const std::string& name) {
    std::filesystem::create_directories(cfg.out);
    const auto path = std::filesystem::path(cfg.out) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return in;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Granular micrograph morphology: segmentation, dilated contours, "
        "constrained Delaunay tessellation, chordal-axis skeletons, grain "
        "separation, and particle statistics.\n\nStatistics exports: "
        "stats.csv (id,class,area,length,width,cx,cy,orientation,holes) and "
        "scene.json (grain_count, binder_count, area_fraction, equivalent-"
        "diameter histogram, particle table)."};
    app.require_subcommand(1);
    Cli cli;

    auto* run = app.add_subcommand("run", "full pipeline");
    add_common(run, cli, true);
    auto* smooth = app.add_subcommand("smooth", "pulse-coupled smoothing only");
    add_common(smooth, cli);
    auto* segment = app.add_subcommand("segment", "segmentation only");
    add_common(segment, cli);
    auto* contours =
        app.add_subcommand("contours", "dilated contours of a mask image");
    add_common(contours, cli);
    auto* mesh = app.add_subcommand("mesh", "tessellate a contours.txt file");
    add_common(mesh, cli);
    auto* skeleton =
        app.add_subcommand("skeleton", "chordal-axis skeleton of a mesh.txt file");
    add_common(skeleton, cli);
    auto* separate =
        app.add_subcommand("separate", "pipeline through grain separation");
    add_common(separate, cli);
    auto* stats = app.add_subcommand("stats", "pipeline through statistics");
    add_common(stats, cli);
    auto* render = app.add_subcommand("render", "pipeline plus SVG overlay");
    add_common(render, cli);

    CLI11_PARSE(app, argc, argv);

    try {
        const PipelineConfig cfg = build_config(cli);
        if (run->parsed()) {
            run_pipeline(cfg, cli.stage.empty() ? Stage::render
                                                : stage_from_name(cli.stage));
        } else if (smooth->parsed()) {
            PipelineConfig c = cfg;
            c.smoothing = true;
            run_pipeline(c, Stage::smooth);
        } else if (segment->parsed()) {
            run_pipeline(cfg, Stage::segment);
        } else if (contours->parsed()) {
            const BinaryImage m = mask_from_grey(load_greyscale(cfg.input));
            const ContourSet cs = extract_contours(m, cfg.dilation);
            auto out = open_out(cfg, "contours.txt");
            write_contours(cs, out);
        } else if (mesh->parsed()) {
            auto in = open_in(cfg.input);
            const TriMesh tm = constrained_delaunay(read_contours(in));
            auto out = open_out(cfg, "mesh.txt");
            write_mesh(tm, out);
        } else if (skeleton->parsed()) {
            auto in = open_in(cfg.input);
            const TriMesh tm = read_mesh(in);
            const CatSkeleton skel = build_skeleton(tm, classify_triangles(tm));
            auto out = open_out(cfg, "skeleton.txt");
            write_skeleton(skel, out);
            const CatSkeleton pruned = prune_skeleton(tm, skel, cfg.prune_tau);
            auto pout = open_out(cfg, "skeleton-pruned.txt");
            write_skeleton(pruned, pout);
        } else if (separate->parsed()) {
            run_pipeline(cfg, Stage::separate);
        } else if (stats->parsed()) {
            run_pipeline(cfg, Stage::stats);
        } else if (render->parsed()) {
            run_pipeline(cfg, Stage::render);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
