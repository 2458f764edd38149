#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "granmorph/morphology.hpp"
#include "granmorph/report.hpp"
#include "granmorph/segmentation.hpp"

namespace granmorph {

enum class Segmenter { spectral, pcnn };

// Full parameter set of the pipeline; every field has a working default and a
// flat `key = value` spelling (see apply_config_key).
struct PipelineConfig {
    std::string input;        // source image path
    std::string out = "out";  // artifact directory
    Segmenter segmentation = Segmenter::spectral;
    bool smoothing = false;
    SpectralBand band;        // binder grey band
    double dilation = 0.25;   // contour margin, px
    PcnnParams pcnn;
    SeparationConfig separation;
    double prune_tau = 1.0;
    double histogram_bin_width = 1.0;
    int workers = 1;
    RenderSpec render;  // empty layers -> default set at render time
};

// Flat config text: `key = value` lines, `#` comments, blank lines ignored.
std::map<std::string, std::string> parse_config(std::istream& in);

// Applies one key; throws std::invalid_argument on unknown keys or bad values.
void apply_config_key(PipelineConfig& cfg, const std::string& key,
                      const std::string& value);

void apply_config(PipelineConfig& cfg,
                  const std::map<std::string, std::string>& kv);

PipelineConfig load_config(const std::string& path);

// Built-in presets: original-spectral, original-pcnn, smoothed-spectral,
// smoothed-pcnn (also shipped as files under presets/).
PipelineConfig preset_config(const std::string& name);
std::vector<std::string> preset_names();

// Cross-field validation; throws std::invalid_argument.
void validate_config(const PipelineConfig& cfg);

}  // namespace granmorph
