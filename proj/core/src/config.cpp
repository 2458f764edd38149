#include "granmorph/config.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace granmorph {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d = 0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != v.size())
        throw std::invalid_argument("config key " + key + ": bad number '" + v + "'");
    return d;
}

int to_int(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long n = 0;
    try {
        n = std::stol(v, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != v.size())
        throw std::invalid_argument("config key " + key + ": bad integer '" + v + "'");
    return int(n);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw std::invalid_argument("config key " + key + ": bad flag '" + v + "'");
}

}  // namespace

std::map<std::string, std::string> parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return kv;
}

void apply_config_key(PipelineConfig& cfg, const std::string& key,
                      const std::string& value) {
    if (key == "input") {
        cfg.input = value;
    } else if (key == "out") {
        cfg.out = value;
    } else if (key == "segmentation") {
        if (value == "spectral") cfg.segmentation = Segmenter::spectral;
        else if (value == "pcnn") cfg.segmentation = Segmenter::pcnn;
        else throw std::invalid_argument("config key segmentation: '" + value + "'");
    } else if (key == "smoothing") {
        cfg.smoothing = to_bool(key, value);
    } else if (key == "band.low") {
        cfg.band.low = to_int(key, value);
    } else if (key == "band.high") {
        cfg.band.high = to_int(key, value);
    } else if (key == "dilation") {
        cfg.dilation = to_double(key, value);
    } else if (key == "pcnn.linking_strength") {
        cfg.pcnn.linking_strength = to_double(key, value);
    } else if (key == "pcnn.linking_radius") {
        cfg.pcnn.linking_radius = to_int(key, value);
    } else if (key == "pcnn.feed_decay") {
        cfg.pcnn.feed_decay = to_double(key, value);
    } else if (key == "pcnn.link_decay") {
        cfg.pcnn.link_decay = to_double(key, value);
    } else if (key == "pcnn.threshold_decay") {
        cfg.pcnn.threshold_decay = to_double(key, value);
    } else if (key == "pcnn.threshold_amplitude") {
        cfg.pcnn.threshold_amplitude = to_double(key, value);
    } else if (key == "pcnn.max_iterations") {
        cfg.pcnn.max_iterations = to_int(key, value);
    } else if (key == "separation.threshold") {
        cfg.separation.threshold = to_double(key, value);
    } else if (key == "separation.max_passes") {
        cfg.separation.max_passes = to_int(key, value);
    } else if (key == "separation.mode") {
        if (value == "range") cfg.separation.mode = FluctuationMode::range;
        else if (value == "max-step") cfg.separation.mode = FluctuationMode::max_step;
        else throw std::invalid_argument("config key separation.mode: '" + value + "'");
    } else if (key == "prune.tau") {
        cfg.prune_tau = to_double(key, value);
    } else if (key == "histogram.bin_width") {
        cfg.histogram_bin_width = to_double(key, value);
    } else if (key == "workers") {
        cfg.workers = to_int(key, value);
    } else if (key == "render.layers") {
        cfg.render.layers.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ','))
            cfg.render.layers.push_back(layer_from_name(trim(item)));
    } else if (key == "render.stroke_width") {
        cfg.render.stroke_width = to_double(key, value);
    } else if (key == "render.scale") {
        cfg.render.scale = to_double(key, value);
    } else {
        throw std::invalid_argument("unknown config key: " + key);
    }
}

void apply_config(PipelineConfig& cfg,
                  const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) apply_config_key(cfg, k, v);
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    PipelineConfig cfg;
    apply_config(cfg, parse_config(in));
    return cfg;
}

std::vector<std::string> preset_names() {
    return {"original-spectral", "original-pcnn", "smoothed-spectral",
            "smoothed-pcnn"};
}

PipelineConfig preset_config(const std::string& name) {
    PipelineConfig cfg;
    if (name == "original-spectral") {
        cfg.segmentation = Segmenter::spectral;
        cfg.smoothing = false;
    } else if (name == "original-pcnn") {
        cfg.segmentation = Segmenter::pcnn;
        cfg.smoothing = false;
    } else if (name == "smoothed-spectral") {
        cfg.segmentation = Segmenter::spectral;
        cfg.smoothing = true;
    } else if (name == "smoothed-pcnn") {
        cfg.segmentation = Segmenter::pcnn;
        cfg.smoothing = true;
    } else {
        throw std::invalid_argument("unknown preset: " + name);
    }
    return cfg;
}

void validate_config(const PipelineConfig& cfg) {
    if (cfg.band.low < 0 || cfg.band.high > 255 || cfg.band.low > cfg.band.high)
        throw std::invalid_argument("band must satisfy 0 <= low <= high <= 255");
    if (!(cfg.dilation > 0 && cfg.dilation < 0.5))
        throw std::invalid_argument("dilation must lie in (0, 0.5)");
    cfg.pcnn.validate();
    if (cfg.separation.threshold < 0 || cfg.separation.threshold > 255)
        throw std::invalid_argument("separation.threshold must lie in [0, 255]");
    if (cfg.separation.max_passes < 1)
        throw std::invalid_argument("separation.max_passes must be >= 1");
    if (cfg.prune_tau < 0)
        throw std::invalid_argument("prune.tau must be >= 0");
    if (cfg.histogram_bin_width <= 0)
        throw std::invalid_argument("histogram.bin_width must be > 0");
    if (cfg.workers < 1)
        throw std::invalid_argument("workers must be >= 1");
}

}  // namespace granmorph
