#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "granmorph/contour.hpp"
#include "granmorph/raster.hpp"
#include "granmorph/segmentation.hpp"

namespace testutil {

using namespace granmorph;

inline GreyImage image_from(int width, int height,
                            const std::vector<int>& rows) {
    GreyImage img(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            img.set(x, y, std::uint8_t(rows[std::size_t(y) * width + x]));
    return img;
}

inline BinaryImage mask_from(int width, int height,
                             const std::vector<int>& rows) {
    BinaryImage m = make_binary(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            m.set(x, y, rows[std::size_t(y) * width + x] ? 1 : 0);
    return m;
}

inline BinaryImage random_mask(int width, int height, double density,
                               std::mt19937& rng) {
    BinaryImage m = make_binary(width, height);
    std::bernoulli_distribution bit(density);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (bit(rng)) m.set(x, y, 1);
    return m;
}

// Star-shaped (hence simple) polygon around a center with random radii.
inline Contour random_star_polygon(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> radius(2.0, 12.0);
    Contour c;
    for (int i = 0; i < n; ++i) {
        const double a = 2 * 3.14159265358979323846 * i / n;
        const double r = radius(rng);
        // Snap to a fine lattice so coordinates are exact.
        c.points.push_back({std::round((20 + r * std::cos(a)) * 64) / 64,
                            std::round((20 + r * std::sin(a)) * 64) / 64});
    }
    if (polygon_signed_area(c.points) < 0)
        std::reverse(c.points.begin(), c.points.end());
    c.kind = Contour::Kind::outer;
    return c;
}

inline bool proper_cross(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    const double d1 = orient2d(c, d, a), d2 = orient2d(c, d, b);
    const double d3 = orient2d(a, b, c), d4 = orient2d(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    auto on = [](Vec2 p, Vec2 q, Vec2 r) {
        return orient2d(p, q, r) == 0 && std::min(p.x, q.x) <= r.x &&
               r.x <= std::max(p.x, q.x) && std::min(p.y, q.y) <= r.y &&
               r.y <= std::max(p.y, q.y);
    };
    return (d1 == 0 && on(c, d, a)) || (d2 == 0 && on(c, d, b)) ||
           (d3 == 0 && on(a, b, c)) || (d4 == 0 && on(a, b, d));
}

// Brute-force simplicity: no two non-adjacent edges touch.
inline bool polygon_is_simple(const std::vector<Vec2>& pts) {
    const int n = int(pts.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (proper_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]))
                return false;
        }
    }
    return true;
}

// Exact union area of the dilated squares on the quarter-pixel grid
// (valid for dilation = 0.25).
inline double dilated_union_area(const BinaryImage& m) {
    const int s = 4;  // cells per pixel
    const int w = (m.width + 2) * s, h = (m.height + 2) * s;
    std::vector<std::uint8_t> cell(std::size_t(w) * h, 0);
    std::uint64_t count = 0;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x) {
            if (!m.at(x, y)) continue;
            // Square [x-0.25, x+1.25) x [y-0.25, y+1.25), shifted by +1 px.
            for (int cy = (y + 1) * s - 1; cy < (y + 2) * s + 1; ++cy)
                for (int cx = (x + 1) * s - 1; cx < (x + 2) * s + 1; ++cx) {
                    auto& c = cell[std::size_t(cy) * w + cx];
                    if (!c) {
                        c = 1;
                        ++count;
                    }
                }
        }
    return double(count) / (s * s);
}

}  // namespace testutil
