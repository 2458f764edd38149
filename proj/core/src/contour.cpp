#include "granmorph/contour.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace granmorph {

namespace {

struct Frac {
    int num = 1;
    int den = 4;
};

Frac snap_dilation(double d) {
    if (!(d > 0.0 && d < 0.5))
        throw std::invalid_argument("extract_contours: dilation must lie in (0, 0.5)");
    int num = int(std::lround(d * 128.0));
    num = std::clamp(num, 1, 63);
    int den = 128;
    const int g = std::gcd(num, den);
    return {num / g, den / g};
}

// Directed boundary edge encoding on the fine vertex grid. Directions are
// chosen so the foreground lies on the algebraic left; outer cycles then have
// positive shoelace area, holes negative.
enum : std::uint8_t { kNone = 0, kPlusX, kMinusX, kMinusY, kPlusY };

struct FineGrid {
    int w = 0, h = 0;          // cells
    std::vector<std::uint8_t> fg;
    std::vector<int> label;

    bool cell(int x, int y) const {
        return x >= 0 && x < w && y >= 0 && y < h && fg[std::size_t(y) * w + x];
    }
    int cell_label(int x, int y) const { return label[std::size_t(y) * w + x]; }
};

int label_fine_components(FineGrid& g) {
    g.label.assign(g.fg.size(), -1);
    int count = 0;
    std::vector<std::size_t> stack;
    for (std::size_t seed = 0; seed < g.fg.size(); ++seed) {
        if (!g.fg[seed] || g.label[seed] >= 0) continue;
        const int id = count++;
        g.label[seed] = id;
        stack.push_back(seed);
        while (!stack.empty()) {
            std::size_t i = stack.back();
            stack.pop_back();
            const int x = int(i % g.w), y = int(i / g.w);
            const int nx[4] = {x - 1, x + 1, x, x};
            const int ny[4] = {y, y, y - 1, y + 1};
            for (int k = 0; k < 4; ++k) {
                if (!g.cell(nx[k], ny[k])) continue;
                const std::size_t j = std::size_t(ny[k]) * g.w + nx[k];
                if (g.label[j] < 0) {
                    g.label[j] = id;
                    stack.push_back(j);
                }
            }
        }
    }
    return count;
}

struct TracedCycle {
    std::vector<std::pair<int, int>> corners;  // fine vertex coordinates
    long long twice_area = 0;                  // integer shoelace, fine units
    int component = -1;
};

}  // namespace

ContourSet extract_contours(const BinaryImage& mask, double dilation) {
    const Frac f = snap_dilation(dilation);
    const int a = f.num, b = f.den, s = 2 * b;
    const int W = mask.width, H = mask.height;

    FineGrid grid;
    grid.w = s * W + 4 * a + 2;
    grid.h = s * H + 4 * a + 2;
    grid.fg.assign(std::size_t(grid.w) * grid.h, 0);

    // Pixel (px,py) contributes the fine cells [s*px+1, s*px+2b+4a+1) in x
    // (likewise y): the square of side 1+2*dilation around the pixel center.
    const int side = 2 * b + 4 * a;
    for (int py = 0; py < H; ++py)
        for (int px = 0; px < W; ++px) {
            if (!mask.at(px, py)) continue;
            for (int fy = s * py + 1; fy < s * py + 1 + side; ++fy)
                std::fill_n(grid.fg.begin() + std::size_t(fy) * grid.w + (s * px + 1),
                            side, std::uint8_t(1));
        }

    label_fine_components(grid);

    // One outgoing directed boundary edge per vertex; corner-point contact is
    // impossible because the square side 1+2*dilation is never an integer.
    const int vw = grid.w + 1, vh = grid.h + 1;
    std::vector<std::uint8_t> out_dir(std::size_t(vw) * vh, kNone);
    auto vidx = [vw](int vx, int vy) { return std::size_t(vy) * vw + vx; };
    for (int y = 0; y < grid.h; ++y)
        for (int x = 0; x < grid.w; ++x) {
            if (!grid.cell(x, y)) continue;
            if (!grid.cell(x, y - 1)) out_dir[vidx(x, y)] = kPlusX;
            if (!grid.cell(x, y + 1)) out_dir[vidx(x + 1, y + 1)] = kMinusX;
            if (!grid.cell(x - 1, y)) out_dir[vidx(x, y + 1)] = kMinusY;
            if (!grid.cell(x + 1, y)) out_dir[vidx(x + 1, y)] = kPlusY;
        }

    std::vector<TracedCycle> cycles;
    for (int vy = 0; vy < vh; ++vy)
        for (int vx = 0; vx < vw; ++vx) {
            if (out_dir[vidx(vx, vy)] == kNone) continue;
            TracedCycle cyc;
            int cx = vx, cy = vy;
            std::uint8_t prev = kNone;
            while (true) {
                const std::uint8_t dir = out_dir[vidx(cx, cy)];
                out_dir[vidx(cx, cy)] = kNone;
                if (cyc.component < 0) {
                    // Interior cell on the left of this edge.
                    switch (dir) {
                        case kPlusX: cyc.component = grid.cell_label(cx, cy); break;
                        case kMinusX: cyc.component = grid.cell_label(cx - 1, cy - 1); break;
                        case kMinusY: cyc.component = grid.cell_label(cx, cy - 1); break;
                        default: cyc.component = grid.cell_label(cx - 1, cy); break;
                    }
                }
                if (dir != prev) {
                    cyc.corners.emplace_back(cx, cy);
                    prev = dir;
                }
                switch (dir) {
                    case kPlusX: ++cx; break;
                    case kMinusX: --cx; break;
                    case kMinusY: --cy; break;
                    default: ++cy; break;
                }
                if (cx == vx && cy == vy) break;
            }
            // Drop the start vertex if it sits mid-run of a straight segment.
            auto& c = cyc.corners;
            if (c.size() >= 3) {
                const auto& p = c.back();
                const auto& q = c[0];
                const auto& r = c[1];
                if ((p.first == q.first && q.first == r.first) ||
                    (p.second == q.second && q.second == r.second))
                    c.erase(c.begin());
            }
            cycles.push_back(std::move(cyc));
        }

    // Exact integer areas from the corner lists; canonical start points.
    for (TracedCycle& cyc : cycles) {
        long long acc = 0;
        const auto& c = cyc.corners;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const auto& p = c[i];
            const auto& q = c[(i + 1) % c.size()];
            acc += (long long)p.first * q.second - (long long)q.first * p.second;
        }
        cyc.twice_area = acc;
        auto top = std::min_element(cyc.corners.begin(), cyc.corners.end(),
                                    [](auto& l, auto& r) {
                                        return std::tie(l.second, l.first) <
                                               std::tie(r.second, r.first);
                                    });
        std::rotate(cyc.corners.begin(), top, cyc.corners.end());
    }

    // Group cycles by component: one outer (positive area) plus its holes.
    std::stable_sort(cycles.begin(), cycles.end(), [](const auto& l, const auto& r) {
        if (l.component != r.component) return l.component < r.component;
        if ((l.twice_area > 0) != (r.twice_area > 0)) return l.twice_area > 0;
        return std::tie(l.corners[0].second, l.corners[0].first) <
               std::tie(r.corners[0].second, r.corners[0].first);
    });
    // Order components by their outer's topmost-leftmost vertex.
    std::vector<std::size_t> first_of;
    for (std::size_t i = 0; i < cycles.size(); ++i)
        if (cycles[i].twice_area > 0) first_of.push_back(i);
    std::sort(first_of.begin(), first_of.end(), [&](std::size_t l, std::size_t r) {
        return std::tie(cycles[l].corners[0].second, cycles[l].corners[0].first) <
               std::tie(cycles[r].corners[0].second, cycles[r].corners[0].first);
    });

    ContourSet cs;
    cs.width = W;
    cs.height = H;
    const double inv = 1.0 / s;
    const double off = 1 + 2 * a;
    auto to_image = [&](std::pair<int, int> v) {
        return Vec2{(v.first - off) * inv, (v.second - off) * inv};
    };
    for (std::size_t oi : first_of) {
        const int comp = cycles[oi].component;
        Contour outer;
        outer.kind = Contour::Kind::outer;
        for (auto& v : cycles[oi].corners) outer.points.push_back(to_image(v));
        const int parent = int(cs.contours.size());
        cs.contours.push_back(std::move(outer));
        for (std::size_t i = oi + 1;
             i < cycles.size() && cycles[i].component == comp; ++i) {
            Contour hole;
            hole.kind = Contour::Kind::hole;
            hole.parent = parent;
            for (auto& v : cycles[i].corners) hole.points.push_back(to_image(v));
            cs.contours.push_back(std::move(hole));
        }
    }
    return cs;
}

double signed_area(const Contour& c) {
    if (c.points.size() < 3)
        throw std::runtime_error("signed_area: degenerate contour (<3 points)");
    return polygon_signed_area(c.points);
}

void write_contours(const ContourSet& cs, std::ostream& out) {
    out << "contours " << cs.contours.size() << " " << cs.width << " " << cs.height
        << "\n";
    char buf[64];
    for (const Contour& c : cs.contours) {
        out << (c.kind == Contour::Kind::outer ? "outer" : "hole") << " "
            << c.points.size();
        for (const Vec2& p : c.points) {
            std::snprintf(buf, sizeof buf, " %.6f %.6f", p.x, p.y);
            out << buf;
        }
        out << "\n";
    }
}

ContourSet read_contours(std::istream& in) {
    std::string tag;
    std::size_t count = 0;
    ContourSet cs;
    if (!(in >> tag >> count >> cs.width >> cs.height) || tag != "contours")
        throw std::runtime_error("read_contours: bad header");
    std::vector<std::size_t> outers;
    for (std::size_t i = 0; i < count; ++i) {
        std::string kind;
        std::size_t n = 0;
        if (!(in >> kind >> n)) throw std::runtime_error("read_contours: truncated record");
        Contour c;
        c.kind = kind == "hole" ? Contour::Kind::hole : Contour::Kind::outer;
        c.points.resize(n);
        for (Vec2& p : c.points)
            if (!(in >> p.x >> p.y))
                throw std::runtime_error("read_contours: truncated coordinates");
        if (c.kind == Contour::Kind::outer) outers.push_back(cs.contours.size());
        cs.contours.push_back(std::move(c));
    }
    // Re-derive hole parents: smallest outer strictly containing the hole.
    for (Contour& c : cs.contours) {
        if (c.kind != Contour::Kind::hole) continue;
        double best = 0;
        for (std::size_t oi : outers) {
            const Contour& o = cs.contours[oi];
            if (!point_strictly_inside(o.points, c.points[0])) continue;
            const double area = polygon_signed_area(o.points);
            if (c.parent < 0 || area < best) {
                c.parent = int(oi);
                best = area;
            }
        }
        if (c.parent < 0)
            throw std::runtime_error("read_contours: hole without an enclosing outer");
    }
    return cs;
}

}  // namespace granmorph
