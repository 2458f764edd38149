#include "granmorph/morphology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

#include "granmorph/parallel.hpp"

namespace granmorph {

namespace {

std::uint64_t edge_key(int t, int u) {
    return (std::uint64_t(std::min(t, u)) << 32) | std::uint64_t(std::max(t, u));
}

int shared_edge(const TriMesh& mesh, int t, int u) {
    for (int k = 0; k < 3; ++k)
        if (mesh.tris[t].neighbor[k] == u) return k;
    throw std::logic_error("morphology: triangles are not adjacent");
}

// Complex triangle sequence including bounding junction triangles.
std::vector<int> complex_sequence(const ChainComplex& c) {
    std::vector<int> seq;
    if (c.end_a >= 0 &&
        (c.triangles.empty() || c.end_a != c.triangles.front()))
        seq.push_back(c.end_a);
    seq.insert(seq.end(), c.triangles.begin(), c.triangles.end());
    if (c.end_b >= 0 &&
        (c.triangles.empty() ? c.end_b != c.end_a : c.end_b != c.triangles.back()))
        seq.push_back(c.end_b);
    return seq;
}

bool is_cycle(const ChainComplex& c) {
    return c.kind == ChainComplex::Kind::torso && c.end_a < 0;
}

}  // namespace

GreyMesh triangle_mean_grey(const TriMesh& mesh, const GreyImage& img) {
    GreyMesh gm;
    gm.mesh = mesh;
    const int w = img.width(), h = img.height();
    std::vector<double> sum(mesh.tris.size(), 0);
    std::vector<std::uint64_t> cnt(mesh.tris.size(), 0);
    std::vector<int> owner(std::size_t(w) * std::size_t(h), -1);
    for (int t = 0; t < int(mesh.tris.size()); ++t) {
        const Vec2 a = mesh.vertex(mesh.tris[t].v[0]);
        const Vec2 b = mesh.vertex(mesh.tris[t].v[1]);
        const Vec2 c = mesh.vertex(mesh.tris[t].v[2]);
        const double sgn = triangle_area(a, b, c) >= 0 ? 1.0 : -1.0;
        const int x0 = std::max(0, int(std::floor(std::min({a.x, b.x, c.x}) - 0.5)));
        const int x1 = std::min(w - 1, int(std::ceil(std::max({a.x, b.x, c.x}))));
        const int y0 = std::max(0, int(std::floor(std::min({a.y, b.y, c.y}) - 0.5)));
        const int y1 = std::min(h - 1, int(std::ceil(std::max({a.y, b.y, c.y}))));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                int& own = owner[std::size_t(y) * w + x];
                if (own >= 0) continue;
                const Vec2 p{x + 0.5, y + 0.5};
                if (sgn * orient2d(a, b, p) >= 0 && sgn * orient2d(b, c, p) >= 0 &&
                    sgn * orient2d(c, a, p) >= 0) {
                    own = t;
                    sum[t] += img.at(x, y);
                    ++cnt[t];
                }
            }
        }
    }
    gm.grey.resize(mesh.tris.size());
    for (int t = 0; t < int(mesh.tris.size()); ++t) {
        if (cnt[t]) {
            gm.grey[t] = sum[t] / double(cnt[t]);
        } else {
            const Vec2 c = mesh.tri_centroid(t);
            const int x = std::clamp(int(std::floor(c.x)), 0, w - 1);
            const int y = std::clamp(int(std::floor(c.y)), 0, h - 1);
            gm.grey[t] = img.at(x, y);
        }
    }
    return gm;
}

double torso_fluctuation(const ChainComplex& complex, const GreyMesh& gm,
                         FluctuationMode mode) {
    const std::vector<int> seq = complex_sequence(complex);
    if (seq.empty()) return 0;
    if (mode == FluctuationMode::range) {
        double lo = 256, hi = -1;
        for (int t : seq) {
            lo = std::min(lo, gm.grey[t]);
            hi = std::max(hi, gm.grey[t]);
        }
        return hi - lo;
    }
    double step = 0;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        step = std::max(step, std::abs(gm.grey[seq[i]] - gm.grey[seq[i + 1]]));
    if (is_cycle(complex) && seq.size() > 2)
        step = std::max(step, std::abs(gm.grey[seq.back()] - gm.grey[seq.front()]));
    return step;
}

namespace {

// Retraces component boundaries after cuts: a directed triangle edge is a
// boundary edge when its twin is missing, cut, or in another component.
// Rotation around the head vertex through the component finds the successor,
// which keeps pinch vertices (two cuts meeting at a point) unambiguous.
ContourSet trace_components(const TriMesh& mesh,
                            const std::set<std::uint64_t>& cuts, int width,
                            int height) {
    const int nt = int(mesh.tris.size());
    for (int t = 0; t < nt; ++t)
        if (mesh.tri_area(t) <= 0)
            throw std::logic_error("trace_components: non-positive triangle");

    auto linked = [&](int t, int k) {
        const int n = mesh.tris[t].neighbor[k];
        return n >= 0 && !cuts.contains(edge_key(t, n));
    };
    std::vector<int> comp(nt, -1);
    int ncomp = 0;
    for (int t = 0; t < nt; ++t) {
        if (comp[t] >= 0) continue;
        std::vector<int> stack{t};
        comp[t] = ncomp;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int k = 0; k < 3; ++k) {
                if (!linked(u, k)) continue;
                const int n = mesh.tris[u].neighbor[k];
                if (comp[n] < 0) {
                    comp[n] = ncomp;
                    stack.push_back(n);
                }
            }
        }
        ++ncomp;
    }

    auto boundary = [&](int t, int k) {
        return !linked(t, k) || comp[mesh.tris[t].neighbor[k]] != comp[t];
    };
    auto next_boundary = [&](int t, int k) {
        int u = t, e = (k + 1) % 3;  // edge leaving the head vertex inside u
        while (!boundary(u, e)) {
            const int n = mesh.tris[u].neighbor[e];
            e = (shared_edge(mesh, n, u) + 1) % 3;
            u = n;
        }
        return std::pair{u, e};
    };

    std::vector<std::uint8_t> visited(std::size_t(nt) * 3, 0);
    struct Cycle {
        std::vector<Vec2> pts;
        double area = 0;
        int comp = 0;
    };
    std::vector<Cycle> cycles;
    for (int t = 0; t < nt; ++t) {
        for (int k = 0; k < 3; ++k) {
            if (visited[std::size_t(t) * 3 + k] || !boundary(t, k)) continue;
            Cycle cy;
            cy.comp = comp[t];
            int ct = t, ck = k;
            do {
                visited[std::size_t(ct) * 3 + ck] = 1;
                cy.pts.push_back(mesh.vertex(mesh.tris[ct].v[ck]));
                std::tie(ct, ck) = next_boundary(ct, ck);
            } while (ct != t || ck != k);
            // Merge collinear runs, then rotate to the topmost-leftmost point.
            std::vector<Vec2> merged;
            const int n = int(cy.pts.size());
            for (int i = 0; i < n; ++i) {
                const Vec2 prev = cy.pts[(i + n - 1) % n];
                const Vec2 next = cy.pts[(i + 1) % n];
                if (cross(cy.pts[i] - prev, next - cy.pts[i]) != 0)
                    merged.push_back(cy.pts[i]);
            }
            cy.pts = std::move(merged);
            auto lowest = std::min_element(
                cy.pts.begin(), cy.pts.end(), [](Vec2 a, Vec2 b) {
                    return a.y != b.y ? a.y < b.y : a.x < b.x;
                });
            std::rotate(cy.pts.begin(), lowest, cy.pts.end());
            cy.area = polygon_signed_area(cy.pts);
            cycles.push_back(std::move(cy));
        }
    }

    // One outer per component, holes attached to it; components ordered by
    // the canonical start point of their outer.
    std::vector<int> outer_of(ncomp, -1);
    for (int i = 0; i < int(cycles.size()); ++i) {
        if (cycles[i].area <= 0) continue;
        if (outer_of[cycles[i].comp] >= 0)
            throw std::logic_error("trace_components: multiple outer cycles");
        outer_of[cycles[i].comp] = i;
    }
    std::vector<int> order(ncomp);
    for (int c = 0; c < ncomp; ++c) order[c] = c;
    auto start_less = [&](int i, int j) {
        const Vec2 a = cycles[i].pts.front(), b = cycles[j].pts.front();
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    };
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return start_less(outer_of[a], outer_of[b]);
    });

    ContourSet out;
    out.width = width;
    out.height = height;
    for (int c : order) {
        const int parent = int(out.contours.size());
        out.contours.push_back({cycles[outer_of[c]].pts, Contour::Kind::outer, -1});
        std::vector<int> holes;
        for (int i = 0; i < int(cycles.size()); ++i)
            if (cycles[i].comp == c && cycles[i].area < 0) holes.push_back(i);
        std::sort(holes.begin(), holes.end(), start_less);
        for (int i : holes)
            out.contours.push_back({cycles[i].pts, Contour::Kind::hole, parent});
    }
    return out;
}

}  // namespace

int cut_blobs(const GreyMesh& gm, const CatSkeleton& skel,
              const SeparationConfig& cfg, ContourSet& cs) {
    const TriMesh& mesh = gm.mesh;
    std::set<std::uint64_t> cuts;
    for (const ChainComplex& c : skel.complexes) {
        if (c.kind == ChainComplex::Kind::limb) continue;
        if (torso_fluctuation(c, gm, cfg.mode) < cfg.threshold) continue;
        const std::vector<int> seq = complex_sequence(c);
        double best = -1;
        int ba = -1, bb = -1;
        auto consider = [&](int a, int b) {
            const double d = std::abs(gm.grey[a] - gm.grey[b]);
            if (d > best) {
                best = d;
                ba = a;
                bb = b;
            }
        };
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) consider(seq[i], seq[i + 1]);
        if (is_cycle(c) && seq.size() > 2) consider(seq.back(), seq.front());
        if (ba >= 0) cuts.insert(edge_key(ba, bb));
    }
    if (cuts.empty()) return 0;
    cs = trace_components(mesh, cuts, cs.width, cs.height);
    return int(cuts.size());
}

ContourSet separate_grains(const ContourSet& cs, const GreyImage& img,
                           const SeparationConfig& cfg) {
    ContourSet cur = cs;
    for (int pass = 0;; ++pass) {
        const TriMesh mesh = constrained_delaunay(cur);
        const GreyMesh gm = triangle_mean_grey(mesh, img);
        const CatSkeleton skel = build_skeleton(mesh, classify_triangles(mesh));
        if (cut_blobs(gm, skel, cfg, cur) == 0) return cur;
        if (pass + 1 >= cfg.max_passes)
            throw std::runtime_error(
                "separate_grains: cuts still pending after max passes");
    }
}

std::vector<ParticleClass> classify_particles(const GreyMesh& gm,
                                              SpectralBand binder_band) {
    std::vector<double> wsum(std::size_t(std::max(gm.mesh.blob_count, 0)), 0);
    std::vector<double> asum(wsum.size(), 0);
    for (int t = 0; t < int(gm.mesh.tris.size()); ++t) {
        const double a = std::abs(gm.mesh.tri_area(t));
        wsum[gm.mesh.tris[t].blob] += a * gm.grey[t];
        asum[gm.mesh.tris[t].blob] += a;
    }
    std::vector<ParticleClass> out(wsum.size(), ParticleClass::binder);
    for (std::size_t b = 0; b < wsum.size(); ++b) {
        const double mean = asum[b] > 0 ? wsum[b] / asum[b] : 0;
        out[b] = (mean < binder_band.low || mean > binder_band.high)
                     ? ParticleClass::grain
                     : ParticleClass::binder;
    }
    return out;
}

ContourSet remove_holes(const ContourSet& cs,
                        const std::vector<ParticleClass>& classes) {
    ContourSet out;
    out.width = cs.width;
    out.height = cs.height;
    std::vector<int> remap(cs.contours.size(), -1);
    int blob = -1;
    for (int i = 0; i < int(cs.contours.size()); ++i) {
        const Contour& c = cs.contours[i];
        if (c.kind == Contour::Kind::outer) {
            ++blob;
        } else if (classes.at(std::size_t(blob)) == ParticleClass::grain) {
            continue;
        }
        remap[i] = int(out.contours.size());
        out.contours.push_back(c);
        if (c.kind == Contour::Kind::hole)
            out.contours.back().parent = remap[c.parent];
    }
    return out;
}

namespace {

bool inside_particle(const std::vector<const Contour*>& rings, Vec2 p) {
    if (!point_strictly_inside(rings[0]->points, p)) return false;
    for (std::size_t i = 1; i < rings.size(); ++i)
        if (point_inside_or_on(rings[i]->points, p)) return false;
    return true;
}

// Longest chord of the particle polygon passing through p, sampling the
// directions from p to every boundary vertex.
double longest_chord_through(const std::vector<const Contour*>& rings, Vec2 p) {
    std::vector<std::pair<Vec2, Vec2>> edges;
    for (const Contour* r : rings) {
        const auto& pts = r->points;
        for (std::size_t i = 0; i < pts.size(); ++i)
            edges.emplace_back(pts[i], pts[(i + 1) % pts.size()]);
    }
    double best = 0;
    for (const Contour* r : rings) {
        for (Vec2 v : r->points) {
            const Vec2 d = v - p;
            const double dn = norm(d);
            if (dn < 1e-12) continue;
            std::vector<double> ts;
            for (const auto& [q1, q2] : edges) {
                const Vec2 e = q2 - q1;
                const double den = cross(d, e);
                if (den == 0) continue;
                const double s = cross(q1 - p, d) / den;
                if (s < 0 || s > 1) continue;
                ts.push_back(cross(q1 - p, e) / den);
            }
            std::sort(ts.begin(), ts.end());
            ts.erase(std::unique(ts.begin(), ts.end(),
                                 [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                     ts.end());
            // Maximal run of inside intervals around t = 0.
            int lo = -1;
            for (int i = 0; i + 1 < int(ts.size()); ++i)
                if (ts[i] <= 0 && 0 <= ts[i + 1]) {
                    lo = i;
                    break;
                }
            if (lo < 0) continue;
            int hi = lo + 1;
            auto mid_inside = [&](int a, int b) {
                return inside_particle(rings, p + ((ts[a] + ts[b]) / 2) * d);
            };
            if (!mid_inside(lo, hi)) continue;
            while (lo > 0 && mid_inside(lo - 1, lo)) --lo;
            while (hi + 1 < int(ts.size()) && mid_inside(hi, hi + 1)) ++hi;
            best = std::max(best, (ts[hi] - ts[lo]) * dn);
        }
    }
    return best;
}

}  // namespace

std::vector<ParticleStats> particle_statistics(
    const TriMesh& mesh, const CatSkeleton& pruned, const ContourSet& cs,
    const std::vector<ParticleClass>& classes, int workers) {
    const int nb = std::max(mesh.blob_count, 0);
    std::vector<ParticleStats> out{std::size_t(nb)};
    std::vector<double> ixx(nb, 0), iyy(nb, 0), ixy(nb, 0);
    for (int t = 0; t < int(mesh.tris.size()); ++t) {
        const int b = mesh.tris[t].blob;
        const Vec2 p0 = mesh.vertex(mesh.tris[t].v[0]);
        const Vec2 p1 = mesh.vertex(mesh.tris[t].v[1]);
        const Vec2 p2 = mesh.vertex(mesh.tris[t].v[2]);
        const double a = std::abs(triangle_area(p0, p1, p2));
        out[b].area += a;
        out[b].centroid = out[b].centroid + triangle_centroid(p0, p1, p2) * a;
        ixx[b] += a / 6 * (p0.x * p0.x + p1.x * p1.x + p2.x * p2.x +
                           p0.x * p1.x + p1.x * p2.x + p2.x * p0.x);
        iyy[b] += a / 6 * (p0.y * p0.y + p1.y * p1.y + p2.y * p2.y +
                           p0.y * p1.y + p1.y * p2.y + p2.y * p0.y);
        ixy[b] += a / 12 * ((p0.x + p1.x + p2.x) * (p0.y + p1.y + p2.y) +
                            p0.x * p0.y + p1.x * p1.y + p2.x * p2.y);
    }
    // Rings per blob, in contour order (outer first, then its holes).
    std::vector<std::vector<const Contour*>> rings{std::size_t(nb)};
    std::vector<int> blob_of_contour(cs.contours.size(), -1);
    {
        int b = -1;
        for (int i = 0; i < int(cs.contours.size()); ++i) {
            if (cs.contours[i].kind == Contour::Kind::outer) ++b;
            blob_of_contour[i] = b;
            if (b >= 0 && b < nb) rings[b].push_back(&cs.contours[i]);
        }
    }
    std::vector<int> nseg(nb, 0);
    for (const auto& s : pruned.segments) ++nseg[pruned.nodes[s.a].blob];

    parallel_for(nb, workers, [&](int b) {
        ParticleStats& ps = out[b];
        ps.id = b;
        ps.cls = b < int(classes.size()) ? classes[b] : ParticleClass::grain;
        if (ps.area > 0) ps.centroid = ps.centroid * (1.0 / ps.area);
        const double cxx = ixx[b] - ps.area * ps.centroid.x * ps.centroid.x;
        const double cyy = iyy[b] - ps.area * ps.centroid.y * ps.centroid.y;
        const double cxy = ixy[b] - ps.area * ps.centroid.x * ps.centroid.y;
        if (std::hypot(2 * cxy, cxx - cyy) > 1e-9 * (cxx + cyy)) {
            double deg = 0.5 * std::atan2(2 * cxy, cxx - cyy) * 180 / std::numbers::pi;
            if (deg < 0) deg += 180;
            if (deg >= 180) deg -= 180;
            ps.orientation = deg;
        }
        for (const Contour& c : cs.contours)
            if (c.kind == Contour::Kind::hole &&
                blob_of_contour[std::size_t(c.parent)] == b)
                ++ps.holes;
        if (nseg[b] > 0) {
            ps.length = pruned.total_length(b);
            ps.width = pruned.mean_width(b);
        } else {
            // Single-node skeleton: longest chord through the node, and the
            // area-equivalent width.
            Vec2 node = ps.centroid;
            for (const auto& n : pruned.nodes)
                if (n.blob == b) node = n.p;
            if (!rings[std::size_t(b)].empty())
                ps.length = longest_chord_through(rings[std::size_t(b)], node);
            ps.width = ps.length > 0 ? 4 * ps.area / (std::numbers::pi * ps.length) : 0;
        }
    });
    return out;
}

SceneStats scene_statistics(const std::vector<ParticleStats>& particles,
                            int image_width, int image_height, double bin_width) {
    if (bin_width <= 0) throw std::invalid_argument("scene_statistics: bin_width");
    SceneStats s;
    s.bin_width = bin_width;
    double grain_area = 0;
    for (const ParticleStats& p : particles) {
        if (p.cls != ParticleClass::grain) {
            ++s.binder_count;
            continue;
        }
        ++s.grain_count;
        grain_area += p.area;
        const double d = 2 * std::sqrt(p.area / std::numbers::pi);
        const std::size_t bin = std::size_t(d / bin_width);
        if (bin >= s.bins.size()) s.bins.resize(bin + 1, 0);
        ++s.bins[bin];
    }
    const double image_area = double(image_width) * double(image_height);
    s.area_fraction = image_area > 0 ? grain_area / image_area : 0;
    return s;
}

}  // namespace granmorph
