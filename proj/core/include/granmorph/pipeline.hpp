#pragma once

#include <string>

#include "granmorph/config.hpp"

namespace granmorph {

// Pipeline stages in execution order; running "up to" a stage writes only the
// artifacts that stage and its predecessors produce.
enum class Stage {
    smooth,
    segment,
    contours,
    mesh,
    skeleton,
    separate,
    stats,
    render,
};

const char* stage_name(Stage s);
Stage stage_from_name(const std::string& name);  // throws std::invalid_argument

// Runs load -> (smooth) -> segment -> contours -> CDT/CAT -> separation ->
// classification -> hole removal -> CDT/CAT -> prune -> statistics -> render,
// writing every intermediate artifact under cfg.out. Failures are rethrown as
// std::runtime_error tagged with the failing stage.
void run_pipeline(const PipelineConfig& cfg, Stage upto = Stage::render);

}  // namespace granmorph
