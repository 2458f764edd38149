#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "granmorph/raster.hpp"

namespace granmorph {

// Bi-level mask with the same dimensions as its source image; 1 = foreground
// (grain), 0 = background (binder).
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> mask;

    std::uint8_t at(int x, int y) const { return mask[std::size_t(y) * width + x]; }
    void set(int x, int y, std::uint8_t v) { mask[std::size_t(y) * width + x] = v; }
};

BinaryImage make_binary(int width, int height, std::uint8_t fill = 0);

// Foreground 255, background 0.
void write_mask_pgm(const BinaryImage& m, std::ostream& out);
void save_mask_pgm(const BinaryImage& m, const std::string& path);
BinaryImage mask_from_grey(const GreyImage& img);  // nonzero -> foreground

// Inclusive grey-level band identifying the binder phase.
struct SpectralBand {
    int low = 0;
    int high = 100;
};

// Pixels with grey in [low,high] become background (binder), the rest
// foreground (grain).
BinaryImage spectral_segment(const GreyImage& img, SpectralBand binder_band);

struct PcnnParams {
    enum class Mode { segment, smooth };

    double linking_strength = 0.2;  // beta
    int linking_radius = 1;         // Chebyshev radius of the linking field
    double feed_decay = 0.7;
    double link_decay = 0.7;
    double threshold_decay = 0.9;
    double threshold_amplitude = 20.0;
    int max_iterations = 50;
    Mode mode = Mode::segment;

    void validate() const;  // throws std::invalid_argument
};

// First-pulse epoch per pixel (row major). The iteration is the discrete
// Eckhorn form: F_t = fd*F_{t-1} + S, L_t = ld*L_{t-1} + sum of neighbor
// pulses, U = F*(1 + beta*L), a neuron pulses when U > Theta, Theta decays
// geometrically and jumps by the amplitude on a pulse. S = grey + 1 so that
// grey 0 still pulses once the threshold has decayed. Fully deterministic.
struct PcnnTrace {
    int width = 0;
    int height = 0;
    std::vector<int> first_epoch;  // per pixel; 0 = never pulsed
    bool converged = false;        // every pixel pulsed at least once
};

PcnnTrace pcnn_run(const GreyImage& img, const PcnnParams& params);

// 4-connected components of equal first-pulse epoch.
struct PulseGroups {
    std::vector<int> label;  // per pixel
    int count = 0;
};

PulseGroups pcnn_pulse_groups(const PcnnTrace& trace);

// Foreground = union of pulse groups whose mean source grey lies outside the
// binder band. Throws on non-convergence within max_iterations.
BinaryImage pcnn_segment(const GreyImage& img, const PcnnParams& params,
                         SpectralBand binder_band = {});

// Each pixel is replaced by the median grey of its pulse group restricted to
// the linking neighborhood. For smoothing, groups additionally require equal
// source grey, so constant regions are fixpoints; a pixel whose restricted
// group is just itself is an asynchronous outlier and takes the plain
// neighborhood median. Throws on non-convergence.
GreyImage pcnn_smooth(const GreyImage& img, const PcnnParams& params);

}  // namespace granmorph
