#include "granmorph/tessellate.hpp"

#include <algorithm>
#include <deque>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace granmorph {

int TriMesh::internal_edge_count(int t) const {
    const Tri& tr = tris[std::size_t(t)];
    int n = 0;
    for (int k = 0; k < 3; ++k)
        if (tr.neighbor[k] >= 0 && !tr.constrained[k]) ++n;
    return n;
}

namespace {

struct BlobInput {
    std::vector<std::vector<Vec2>> rings;  // rings[0] = outer, rest holes
};

// Incremental Delaunay triangulation with constraint recovery by edge
// flipping, one blob at a time. Indices 0..2 are the enclosing super
// triangle.
class BlobTriangulator {
public:
    explicit BlobTriangulator(const BlobInput& blob) : blob_(blob) {
        for (const auto& ring : blob.rings)
            for (const Vec2& p : ring) insert_unique(p);
        if (pts_.size() < 3) throw std::runtime_error("CDT: blob has fewer than 3 distinct points");
    }

    void run() {
        make_super_triangle();
        for (int i = 3; i < int(pts_.size()); ++i) insert_point(i);
        for (const auto& ring : blob_.rings) enforce_ring(ring);
        classify_interior();
        lawson_pass();
        canonical_ties();
    }

    // Interior triangles with local (pre-dedup) vertex indices remapped to
    // the emitted point order.
    const std::vector<Vec2>& points() const { return pts_; }

    struct OutTri {
        std::array<int, 3> v;
        std::array<bool, 3> con;
    };
    std::vector<OutTri> interior() const {
        std::vector<OutTri> out;
        for (const T& t : ts_) {
            if (!t.alive || !t.interior) continue;
            OutTri o;
            for (int k = 0; k < 3; ++k) {
                o.v[k] = t.v[k] - 3;
                o.con[k] = t.con[k];
            }
            out.push_back(o);
        }
        return out;
    }

private:
    struct T {
        std::array<int, 3> v{};
        std::array<int, 3> nb{-1, -1, -1};
        std::array<bool, 3> con{};
        bool alive = true;
        bool interior = false;
    };

    const BlobInput& blob_;
    std::vector<Vec2> pts_;  // [0..2] reserved for the super triangle
    std::map<std::pair<double, double>, int> index_;
    std::vector<T> ts_;

    void insert_unique(Vec2 p) {
        if (pts_.empty()) pts_.resize(3);
        auto [it, fresh] = index_.try_emplace({p.x, p.y}, int(pts_.size()));
        if (fresh) pts_.push_back(p);
    }

    int point_id(Vec2 p) const { return index_.at({p.x, p.y}); }

    Vec2 pt(int i) const { return pts_[std::size_t(i)]; }

    void make_super_triangle() {
        double lox = pts_[3].x, hix = lox, loy = pts_[3].y, hiy = loy;
        for (std::size_t i = 3; i < pts_.size(); ++i) {
            lox = std::min(lox, pts_[i].x);
            hix = std::max(hix, pts_[i].x);
            loy = std::min(loy, pts_[i].y);
            hiy = std::max(hiy, pts_[i].y);
        }
        const double span = std::max({hix - lox, hiy - loy, 1.0});
        const double cx = (lox + hix) / 2, cy = (loy + hiy) / 2;
        pts_[0] = {cx - 16 * span, cy - 8 * span};
        pts_[1] = {cx + 16 * span, cy - 8 * span};
        pts_[2] = {cx, cy + 16 * span};
        T t;
        t.v = {0, 1, 2};
        ts_.push_back(t);
    }

    int edge_of(int t, int a, int b) const {
        for (int k = 0; k < 3; ++k)
            if (ts_[t].v[k] == a && ts_[t].v[(k + 1) % 3] == b) return k;
        return -1;
    }

    void relink(int t) {
        for (int k = 0; k < 3; ++k) {
            const int n = ts_[t].nb[k];
            if (n < 0) continue;
            const int kn = edge_of(n, ts_[t].v[(k + 1) % 3], ts_[t].v[k]);
            ts_[n].nb[kn] = t;
        }
    }

    // Walks from an alive triangle toward p. Returns {tri, edge} with edge
    // -1 when strictly inside, else the edge p lies on; throws on duplicate.
    std::pair<int, int> locate(Vec2 p) const {
        int t = -1;
        for (int i = int(ts_.size()) - 1; i >= 0; --i)
            if (ts_[i].alive) {
                t = i;
                break;
            }
        int steps = 0;
        const int cap = int(ts_.size()) * 4 + 64;
        int prev = -1;
        while (true) {
            if (++steps > cap) throw std::runtime_error("CDT: point location failed to converge");
            int zero_edge = -1;
            int next = -1;
            for (int k = 0; k < 3; ++k) {
                const double o = orient2d(pt(ts_[t].v[k]), pt(ts_[t].v[(k + 1) % 3]), p);
                if (o < 0 && ts_[t].nb[k] != prev) {
                    next = ts_[t].nb[k];
                    break;
                }
                if (o < 0) next = ts_[t].nb[k];
                if (o == 0) zero_edge = k;
            }
            if (next >= 0) {
                prev = t;
                t = next;
                continue;
            }
            if (zero_edge >= 0) {
                const Vec2 a = pt(ts_[t].v[zero_edge]);
                const Vec2 b = pt(ts_[t].v[(zero_edge + 1) % 3]);
                if (p == a || p == b) throw std::runtime_error("CDT: duplicate point");
                return {t, zero_edge};
            }
            return {t, -1};
        }
    }

    void legalize(int t, int k, std::vector<std::pair<int, int>>& stack) {
        stack.emplace_back(t, k);
        while (!stack.empty()) {
            auto [ti, ki] = stack.back();
            stack.pop_back();
            if (!ts_[ti].alive || ts_[ti].con[ki]) continue;
            const int n = ts_[ti].nb[ki];
            if (n < 0) continue;
            const int a = ts_[ti].v[ki], b = ts_[ti].v[(ki + 1) % 3],
                      c = ts_[ti].v[(ki + 2) % 3];
            const int kn = edge_of(n, b, a);
            if (kn < 0) continue;
            const int d = ts_[n].v[(kn + 2) % 3];
            if (incircle(pt(a), pt(b), pt(c), pt(d)) > 0) {
                flip(ti, ki);
                stack.emplace_back(ti, 0);
                stack.emplace_back(ti, 1);
                stack.emplace_back(ti, 2);
                stack.emplace_back(n, 0);
                stack.emplace_back(n, 1);
                stack.emplace_back(n, 2);
            }
        }
    }

    // Flips the shared edge of t and its neighbor across edge k. t keeps
    // apex-c side vertices (a,d,c), neighbor becomes (d,b,c).
    void flip(int t, int k) {
        const int n = ts_[t].nb[k];
        const int a = ts_[t].v[k], b = ts_[t].v[(k + 1) % 3], c = ts_[t].v[(k + 2) % 3];
        const int kn = edge_of(n, b, a);
        const int d = ts_[n].v[(kn + 2) % 3];

        const int t_bc = ts_[t].nb[(k + 1) % 3];
        const int t_ca = ts_[t].nb[(k + 2) % 3];
        const int n_ad = ts_[n].nb[(kn + 1) % 3];
        const int n_db = ts_[n].nb[(kn + 2) % 3];
        const bool c_bc = ts_[t].con[(k + 1) % 3];
        const bool c_ca = ts_[t].con[(k + 2) % 3];
        const bool c_ad = ts_[n].con[(kn + 1) % 3];
        const bool c_db = ts_[n].con[(kn + 2) % 3];

        ts_[t].v = {a, d, c};
        ts_[t].nb = {n_ad, n, t_ca};
        ts_[t].con = {c_ad, false, c_ca};
        ts_[n].v = {d, b, c};
        ts_[n].nb = {n_db, t_bc, t};
        ts_[n].con = {c_db, c_bc, false};
        relink(t);
        relink(n);
    }

    void insert_point(int i) {
        const auto [t, edge] = locate(pt(i));
        std::vector<std::pair<int, int>> stack;
        if (edge < 0) {
            // 1 -> 3 split.
            const auto v = ts_[t].v;
            const auto nb = ts_[t].nb;
            const auto con = ts_[t].con;
            const int t1 = int(ts_.size()), t2 = t1 + 1;
            ts_[t] = T{{v[0], v[1], i}, {nb[0], t1, t2}, {con[0], false, false}, true, false};
            ts_.push_back(T{{v[1], v[2], i}, {nb[1], t2, t}, {con[1], false, false}, true, false});
            ts_.push_back(T{{v[2], v[0], i}, {nb[2], t, t1}, {con[2], false, false}, true, false});
            relink(t);
            relink(t1);
            relink(t2);
            legalize(t, 0, stack);
            legalize(t1, 0, stack);
            legalize(t2, 0, stack);
        } else {
            // 2 -> 4 split along the edge the point falls on.
            const int n = ts_[t].nb[edge];
            if (n < 0) throw std::runtime_error("CDT: point on super boundary");
            if (ts_[t].con[edge])
                throw std::runtime_error("CDT: vertex lies on a constrained segment");
            const int a = ts_[t].v[edge], b = ts_[t].v[(edge + 1) % 3],
                      c = ts_[t].v[(edge + 2) % 3];
            const int kn = edge_of(n, b, a);
            const int d = ts_[n].v[(kn + 2) % 3];
            const int t_bc = ts_[t].nb[(edge + 1) % 3];
            const int t_ca = ts_[t].nb[(edge + 2) % 3];
            const int n_ad = ts_[n].nb[(kn + 1) % 3];
            const int n_db = ts_[n].nb[(kn + 2) % 3];
            const bool cb = ts_[t].con[(edge + 1) % 3];
            const bool cc = ts_[t].con[(edge + 2) % 3];
            const bool cd = ts_[n].con[(kn + 1) % 3];
            const bool ce = ts_[n].con[(kn + 2) % 3];

            const int t1 = int(ts_.size()), t2 = t1 + 1;
            ts_[t] = T{{i, b, c}, {t2, t_bc, t1}, {false, cb, false}, true, false};
            ts_[n] = T{{a, d, i}, {n_ad, t2, t1}, {cd, false, false}, true, false};
            ts_.push_back(T{{c, a, i}, {t_ca, n, t}, {cc, false, false}, true, false});
            ts_.push_back(T{{d, b, i}, {n_db, t, n}, {ce, false, false}, true, false});
            relink(t);
            relink(n);
            relink(t1);
            relink(t2);
            legalize(t, 1, stack);
            legalize(t1, 0, stack);
            legalize(n, 0, stack);
            legalize(t2, 0, stack);
        }
    }

    bool edge_exists(int a, int b, int* tri = nullptr, int* edge = nullptr) const {
        for (int t = 0; t < int(ts_.size()); ++t) {
            if (!ts_[t].alive) continue;
            const int k = edge_of(t, a, b);
            if (k >= 0) {
                if (tri) *tri = t;
                if (edge) *edge = k;
                return true;
            }
        }
        return false;
    }

    void mark_constrained(int a, int b) {
        for (int t = 0; t < int(ts_.size()); ++t) {
            if (!ts_[t].alive) continue;
            for (int dir = 0; dir < 2; ++dir) {
                const int k = dir ? edge_of(t, b, a) : edge_of(t, a, b);
                if (k >= 0) ts_[t].con[k] = true;
            }
        }
    }

    static int sgn(double v) { return v > 0 ? 1 : v < 0 ? -1 : 0; }

    bool properly_crosses(int p, int q, int a, int b) const {
        const int o1 = sgn(orient2d(pt(a), pt(b), pt(p)));
        const int o2 = sgn(orient2d(pt(a), pt(b), pt(q)));
        const int o3 = sgn(orient2d(pt(p), pt(q), pt(a)));
        const int o4 = sgn(orient2d(pt(p), pt(q), pt(b)));
        return o1 * o2 < 0 && o3 * o4 < 0;
    }

    bool flippable(int t, int k) const {
        const int n = ts_[t].nb[k];
        if (n < 0 || ts_[t].con[k]) return false;
        const int a = ts_[t].v[k], b = ts_[t].v[(k + 1) % 3], c = ts_[t].v[(k + 2) % 3];
        const int kn = edge_of(n, b, a);
        const int d = ts_[n].v[(kn + 2) % 3];
        // Quad a,d,b,c must be strictly convex for the flip to be valid.
        return orient2d(pt(a), pt(d), pt(c)) > 0 && orient2d(pt(d), pt(b), pt(c)) > 0;
    }

    // Recovers segment (a,b) as an edge by flipping crossing edges.
    void enforce_segment(int a, int b) {
        const int cap = int(ts_.size()) * 8 + 256;
        for (int round = 0; round < cap; ++round) {
            if (edge_exists(a, b)) {
                mark_constrained(a, b);
                return;
            }
            bool flipped = false;
            for (int t = 0; t < int(ts_.size()) && !flipped; ++t) {
                if (!ts_[t].alive) continue;
                for (int k = 0; k < 3; ++k) {
                    const int p = ts_[t].v[k], q = ts_[t].v[(k + 1) % 3];
                    if (p == a || p == b || q == a || q == b) continue;
                    if (!properly_crosses(p, q, a, b)) continue;
                    if (ts_[t].con[k])
                        throw std::runtime_error("CDT: constraint segments cross (overlapping contours?)");
                    if (!flippable(t, k)) continue;
                    flip(t, k);
                    flipped = true;
                    break;
                }
            }
            if (!flipped && !edge_exists(a, b))
                throw std::runtime_error("CDT: failed to recover a constraint segment (non-simple contour?)");
        }
        throw std::runtime_error("CDT: constraint recovery did not terminate");
    }

    void enforce_ring(const std::vector<Vec2>& ring) {
        for (std::size_t i = 0; i < ring.size(); ++i) {
            const int a = point_id(ring[i]);
            const int b = point_id(ring[(i + 1) % ring.size()]);
            if (a == b) throw std::runtime_error("CDT: zero-length contour segment");
            enforce_segment(a, b);
        }
    }

    // Interior iff the blob's rings wind around the triangle centroid.
    void classify_interior() {
        for (T& t : ts_) {
            if (!t.alive) continue;
            if (t.v[0] < 3 || t.v[1] < 3 || t.v[2] < 3) {
                t.alive = false;
                continue;
            }
            const Vec2 c = triangle_centroid(pt(t.v[0]), pt(t.v[1]), pt(t.v[2]));
            int wind = 0;
            for (const auto& ring : blob_.rings) wind += winding_number(ring, c);
            t.interior = wind != 0;
        }
    }

    // Restores local Delaunayhood among interior triangles (the super
    // triangle and constraint flips may have disturbed it near the hull).
    void lawson_pass() {
        bool changed = true;
        int guard = int(ts_.size()) * 16 + 256;
        while (changed && guard-- > 0) {
            changed = false;
            for (int t = 0; t < int(ts_.size()); ++t) {
                if (!ts_[t].alive || !ts_[t].interior) continue;
                for (int k = 0; k < 3; ++k) {
                    const int n = ts_[t].nb[k];
                    if (n < 0 || ts_[t].con[k] || !ts_[n].interior) continue;
                    const int a = ts_[t].v[k], b = ts_[t].v[(k + 1) % 3],
                              c = ts_[t].v[(k + 2) % 3];
                    const int kn = edge_of(n, b, a);
                    const int d = ts_[n].v[(kn + 2) % 3];
                    if (incircle(pt(a), pt(b), pt(c), pt(d)) > 0 && flippable(t, k)) {
                        flip(t, k);
                        changed = true;
                        break;
                    }
                }
            }
        }
    }

    // Cocircular ties resolve to the diagonal containing the lowest vertex
    // index of the quad; each such flip strictly lowers the minimum endpoint
    // of the edge, so the pass terminates.
    void canonical_ties() {
        bool changed = true;
        int guard = int(ts_.size()) * 16 + 256;
        while (changed && guard-- > 0) {
            changed = false;
            for (int t = 0; t < int(ts_.size()); ++t) {
                if (!ts_[t].alive || !ts_[t].interior) continue;
                for (int k = 0; k < 3; ++k) {
                    const int n = ts_[t].nb[k];
                    if (n < 0 || ts_[t].con[k] || !ts_[n].interior) continue;
                    const int a = ts_[t].v[k], b = ts_[t].v[(k + 1) % 3],
                              c = ts_[t].v[(k + 2) % 3];
                    const int kn = edge_of(n, b, a);
                    const int d = ts_[n].v[(kn + 2) % 3];
                    if (incircle(pt(a), pt(b), pt(c), pt(d)) != 0) continue;
                    const int lowest = std::min({a, b, c, d});
                    if ((lowest == c || lowest == d) && flippable(t, k)) {
                        flip(t, k);
                        changed = true;
                        break;
                    }
                }
            }
        }
    }
};

std::vector<BlobInput> group_blobs(const ContourSet& cs) {
    std::vector<BlobInput> blobs;
    std::vector<int> blob_of(cs.contours.size(), -1);
    for (std::size_t i = 0; i < cs.contours.size(); ++i) {
        const Contour& c = cs.contours[i];
        if (c.kind != Contour::Kind::outer) continue;
        blob_of[i] = int(blobs.size());
        blobs.emplace_back();
        blobs.back().rings.push_back(c.points);
    }
    for (std::size_t i = 0; i < cs.contours.size(); ++i) {
        const Contour& c = cs.contours[i];
        if (c.kind != Contour::Kind::hole) continue;
        if (c.parent < 0 || c.parent >= int(cs.contours.size()) || blob_of[c.parent] < 0)
            throw std::runtime_error("constrained_delaunay: hole without a valid parent");
        blobs[blob_of[c.parent]].rings.push_back(c.points);
    }
    return blobs;
}

void validate_blob(const BlobInput& blob) {
    for (std::size_t r = 0; r < blob.rings.size(); ++r) {
        const auto& ring = blob.rings[r];
        if (ring.size() < 3)
            throw std::runtime_error("constrained_delaunay: contour with fewer than 3 points");
        const double area = polygon_signed_area(ring);
        if (r == 0 && area <= 0)
            throw std::runtime_error("constrained_delaunay: outer contour not CCW-positive");
        if (r > 0 && area >= 0)
            throw std::runtime_error("constrained_delaunay: hole contour not CW-negative");
    }
}

}  // namespace

TriMesh constrained_delaunay(const ContourSet& cs) {
    const std::vector<BlobInput> blobs = group_blobs(cs);
    TriMesh mesh;
    mesh.blob_count = int(blobs.size());
    for (std::size_t bi = 0; bi < blobs.size(); ++bi) {
        validate_blob(blobs[bi]);
        BlobTriangulator tri(blobs[bi]);
        tri.run();
        const int base = int(mesh.vertices.size());
        const auto& pts = tri.points();
        mesh.vertices.insert(mesh.vertices.end(), pts.begin() + 3, pts.end());
        for (const auto& t : tri.interior()) {
            TriMesh::Tri out;
            for (int k = 0; k < 3; ++k) {
                out.v[k] = t.v[k] + base;
                out.constrained[k] = t.con[k];
            }
            out.blob = int(bi);
            mesh.tris.push_back(out);
        }
    }
    // Canonical triangle order: by blob, then by sorted vertex triple; each
    // triangle starts at its lowest vertex with CCW orientation preserved.
    for (auto& t : mesh.tris) {
        while (t.v[0] != std::min({t.v[0], t.v[1], t.v[2]})) {
            t.v = {t.v[1], t.v[2], t.v[0]};
            t.constrained = {t.constrained[1], t.constrained[2], t.constrained[0]};
        }
    }
    std::sort(mesh.tris.begin(), mesh.tris.end(), [](const auto& l, const auto& r) {
        return std::tie(l.blob, l.v) < std::tie(r.blob, r.v);
    });
    rebuild_adjacency(mesh);
    return mesh;
}

void rebuild_adjacency(TriMesh& mesh) {
    std::map<std::pair<int, int>, int> half;  // directed edge -> triangle
    for (int t = 0; t < int(mesh.tris.size()); ++t) {
        auto& tr = mesh.tris[t];
        tr.neighbor = {-1, -1, -1};
        for (int k = 0; k < 3; ++k) {
            auto [it, fresh] = half.try_emplace({tr.v[k], tr.v[(k + 1) % 3]}, t);
            if (!fresh) throw std::runtime_error("rebuild_adjacency: non-manifold mesh");
        }
    }
    for (int t = 0; t < int(mesh.tris.size()); ++t) {
        auto& tr = mesh.tris[t];
        for (int k = 0; k < 3; ++k) {
            auto it = half.find({tr.v[(k + 1) % 3], tr.v[k]});
            if (it != half.end()) tr.neighbor[k] = it->second;
        }
    }
}

std::vector<std::pair<int, int>> check_locally_delaunay(const TriMesh& mesh) {
    std::vector<std::pair<int, int>> bad;
    for (int t = 0; t < int(mesh.tris.size()); ++t) {
        const auto& tr = mesh.tris[t];
        for (int k = 0; k < 3; ++k) {
            const int n = tr.neighbor[k];
            if (n < t || tr.constrained[k]) continue;  // each edge once
            if (n < 0) continue;
            const auto& nt = mesh.tris[n];
            int kn = -1;
            for (int j = 0; j < 3; ++j)
                if (nt.v[j] == tr.v[(k + 1) % 3] && nt.v[(j + 1) % 3] == tr.v[k]) kn = j;
            if (kn < 0) continue;
            const int d = nt.v[(kn + 2) % 3];
            if (incircle(mesh.vertex(tr.v[0]), mesh.vertex(tr.v[1]),
                         mesh.vertex(tr.v[2]), mesh.vertex(d)) > 0)
                bad.emplace_back(t, k);
        }
    }
    return bad;
}

void write_mesh(const TriMesh& mesh, std::ostream& out) {
    char buf[80];
    for (const Vec2& p : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.6f %.6f\n", p.x, p.y);
        out << buf;
    }
    for (const auto& t : mesh.tris) {
        out << "t " << t.v[0] << " " << t.v[1] << " " << t.v[2] << " "
            << int(t.constrained[0]) << " " << int(t.constrained[1]) << " "
            << int(t.constrained[2]) << " " << t.blob << "\n";
    }
}

TriMesh read_mesh(std::istream& in) {
    TriMesh mesh;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "v") {
            Vec2 p;
            if (!(ss >> p.x >> p.y)) throw std::runtime_error("read_mesh: bad vertex line");
            mesh.vertices.push_back(p);
        } else if (tag == "t") {
            TriMesh::Tri t;
            int c0, c1, c2;
            if (!(ss >> t.v[0] >> t.v[1] >> t.v[2] >> c0 >> c1 >> c2 >> t.blob))
                throw std::runtime_error("read_mesh: bad triangle line");
            t.constrained = {c0 != 0, c1 != 0, c2 != 0};
            mesh.tris.push_back(t);
            mesh.blob_count = std::max(mesh.blob_count, t.blob + 1);
        } else {
            throw std::runtime_error("read_mesh: unknown record '" + tag + "'");
        }
    }
    rebuild_adjacency(mesh);
    return mesh;
}

}  // namespace granmorph
