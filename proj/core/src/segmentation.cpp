#include "granmorph/segmentation.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace granmorph {

BinaryImage make_binary(int width, int height, std::uint8_t fill) {
    if (width < 1 || height < 1)
        throw std::runtime_error("BinaryImage: dimensions must be at least 1x1");
    return BinaryImage{width, height,
                       std::vector<std::uint8_t>(std::size_t(width) * height, fill)};
}

void write_mask_pgm(const BinaryImage& m, std::ostream& out) {
    GreyImage img(m.width, m.height);
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) img.set(x, y, m.at(x, y) ? 255 : 0);
    write_pgm(img, out);
}

void save_mask_pgm(const BinaryImage& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write mask: " + path);
    write_mask_pgm(m, out);
}

BinaryImage mask_from_grey(const GreyImage& img) {
    BinaryImage m = make_binary(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) m.set(x, y, img.at(x, y) ? 1 : 0);
    return m;
}

BinaryImage spectral_segment(const GreyImage& img, SpectralBand band) {
    if (band.low < 0 || band.high > 255 || band.low > band.high)
        throw std::invalid_argument("SpectralBand: need 0 <= low <= high <= 255");
    BinaryImage out = make_binary(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            int g = img.at(x, y);
            out.set(x, y, (g >= band.low && g <= band.high) ? 0 : 1);
        }
    return out;
}

void PcnnParams::validate() const {
    auto in01 = [](double v) { return v > 0.0 && v < 1.0; };
    if (!in01(feed_decay) || !in01(link_decay) || !in01(threshold_decay))
        throw std::invalid_argument("PcnnParams: decay factors must lie in (0,1)");
    if (max_iterations < 1)
        throw std::invalid_argument("PcnnParams: max_iterations must be >= 1");
    if (linking_radius < 1)
        throw std::invalid_argument("PcnnParams: linking_radius must be >= 1");
    if (linking_strength < 0)
        throw std::invalid_argument("PcnnParams: linking_strength must be >= 0");
    if (threshold_amplitude <= 0)
        throw std::invalid_argument("PcnnParams: threshold_amplitude must be > 0");
}

PcnnTrace pcnn_run(const GreyImage& img, const PcnnParams& params) {
    params.validate();
    const int w = img.width(), h = img.height();
    const std::size_t n = std::size_t(w) * h;
    const int r = params.linking_radius;

    std::vector<double> feed(n, 0.0), link(n, 0.0), theta(n, 256.0);
    std::vector<std::uint8_t> pulse(n, 0), prev_pulse(n, 0);

    PcnnTrace trace;
    trace.width = w;
    trace.height = h;
    trace.first_epoch.assign(n, 0);

    std::size_t unpulsed = n;
    for (int epoch = 1; epoch <= params.max_iterations && unpulsed > 0; ++epoch) {
        std::swap(pulse, prev_pulse);
        for (std::size_t i = 0; i < n; ++i) {
            const int x = int(i % w), y = int(i / w);
            double neigh = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= h) continue;
                for (int dx = -r; dx <= r; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= w || (dx == 0 && dy == 0)) continue;
                    neigh += prev_pulse[std::size_t(yy) * w + xx];
                }
            }
            feed[i] = params.feed_decay * feed[i] + (img.pixels()[i] + 1.0);
            link[i] = params.link_decay * link[i] + neigh;
            const double activity = feed[i] * (1.0 + params.linking_strength * link[i]);
            theta[i] *= params.threshold_decay;
            if (activity > theta[i]) {
                pulse[i] = 1;
                theta[i] += params.threshold_amplitude;
                if (trace.first_epoch[i] == 0) {
                    trace.first_epoch[i] = epoch;
                    --unpulsed;
                }
            } else {
                pulse[i] = 0;
            }
        }
    }
    trace.converged = (unpulsed == 0);
    return trace;
}

namespace {

// 4-connected components over a predicate joining equal keys.
template <typename Key>
PulseGroups label_components(int w, int h, const std::vector<Key>& key) {
    PulseGroups g;
    g.label.assign(std::size_t(w) * h, -1);
    std::vector<std::size_t> stack;
    for (std::size_t seed = 0; seed < key.size(); ++seed) {
        if (g.label[seed] >= 0) continue;
        const int id = g.count++;
        g.label[seed] = id;
        stack.push_back(seed);
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            const int x = int(i % w), y = int(i / w);
            const int nx[4] = {x - 1, x + 1, x, x};
            const int ny[4] = {y, y, y - 1, y + 1};
            for (int k = 0; k < 4; ++k) {
                if (nx[k] < 0 || nx[k] >= w || ny[k] < 0 || ny[k] >= h) continue;
                const std::size_t j = std::size_t(ny[k]) * w + nx[k];
                if (g.label[j] < 0 && key[j] == key[i]) {
                    g.label[j] = id;
                    stack.push_back(j);
                }
            }
        }
    }
    return g;
}

}  // namespace

PulseGroups pcnn_pulse_groups(const PcnnTrace& trace) {
    return label_components(trace.width, trace.height, trace.first_epoch);
}

BinaryImage pcnn_segment(const GreyImage& img, const PcnnParams& params,
                         SpectralBand binder_band) {
    PcnnParams p = params;
    p.mode = PcnnParams::Mode::segment;
    PcnnTrace trace = pcnn_run(img, p);
    if (!trace.converged)
        throw std::runtime_error("pcnn_segment: not all neurons pulsed within max_iterations");

    PulseGroups groups = pcnn_pulse_groups(trace);
    std::vector<double> sum(groups.count, 0.0);
    std::vector<std::size_t> cnt(groups.count, 0);
    for (std::size_t i = 0; i < groups.label.size(); ++i) {
        sum[groups.label[i]] += img.pixels()[i];
        ++cnt[groups.label[i]];
    }
    std::vector<std::uint8_t> fg(groups.count, 0);
    for (int gi = 0; gi < groups.count; ++gi)
        fg[gi] = (sum[gi] / double(cnt[gi]) > binder_band.high) ? 1 : 0;

    BinaryImage out = make_binary(img.width(), img.height());
    for (std::size_t i = 0; i < groups.label.size(); ++i)
        out.mask[i] = fg[groups.label[i]];
    return out;
}

GreyImage pcnn_smooth(const GreyImage& img, const PcnnParams& params) {
    PcnnParams p = params;
    p.mode = PcnnParams::Mode::smooth;
    PcnnTrace trace = pcnn_run(img, p);
    if (!trace.converged)
        throw std::runtime_error("pcnn_smooth: not all neurons pulsed within max_iterations");

    const int w = img.width(), h = img.height();
    // Smoothing groups require equal grey as well as a shared pulse epoch, so
    // constant plateaus are always fixpoints of the filter.
    std::vector<std::pair<int, std::uint8_t>> key(trace.first_epoch.size());
    for (std::size_t i = 0; i < key.size(); ++i)
        key[i] = {trace.first_epoch[i], img.pixels()[i]};
    PulseGroups groups = label_components(w, h, key);

    const int r = params.linking_radius;
    GreyImage out(w, h);
    std::vector<std::uint8_t> member, all;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = std::size_t(y) * w + x;
            member.clear();
            all.clear();
            for (int dy = -r; dy <= r; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= h) continue;
                for (int dx = -r; dx <= r; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= w) continue;
                    const std::size_t j = std::size_t(yy) * w + xx;
                    all.push_back(img.pixels()[j]);
                    if (groups.label[j] == groups.label[i])
                        member.push_back(img.pixels()[j]);
                }
            }
            // A pixel alone in its restricted group is treated as impulse
            // noise and takes the full neighborhood median instead.
            std::vector<std::uint8_t>& vals = member.size() > 1 ? member : all;
            std::nth_element(vals.begin(), vals.begin() + (vals.size() - 1) / 2, vals.end());
            out.set(x, y, vals[(vals.size() - 1) / 2]);
        }
    }
    return out;
}

}  // namespace granmorph
