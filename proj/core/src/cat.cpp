#include "granmorph/cat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace granmorph {

namespace {

bool edge_internal(const TriMesh& mesh, const std::vector<std::uint8_t>& active,
                   int t, int k) {
    const int n = mesh.tris[t].neighbor[k];
    return n >= 0 && !mesh.tris[t].constrained[k] && active[t] && active[n];
}

int internal_degree(const TriMesh& mesh, const std::vector<std::uint8_t>& active, int t) {
    int d = 0;
    for (int k = 0; k < 3; ++k)
        if (edge_internal(mesh, active, t, k)) ++d;
    return d;
}

std::vector<TriClass> classify_masked(const TriMesh& mesh,
                                      const std::vector<std::uint8_t>& active) {
    std::vector<TriClass> cls(mesh.tris.size(), TriClass::isolated);
    for (int t = 0; t < int(mesh.tris.size()); ++t) {
        switch (internal_degree(mesh, active, t)) {
            case 3: cls[t] = TriClass::junction; break;
            case 2: cls[t] = TriClass::sleeve; break;
            case 1: cls[t] = TriClass::termination; break;
            default: cls[t] = TriClass::isolated; break;
        }
    }
    return cls;
}

// Unique internal neighbor of a sleeve/termination other than `prev`.
int next_along(const TriMesh& mesh, const std::vector<std::uint8_t>& active,
               int t, int prev) {
    for (int k = 0; k < 3; ++k) {
        if (!edge_internal(mesh, active, t, k)) continue;
        const int n = mesh.tris[t].neighbor[k];
        if (n != prev) return n;
    }
    return -1;
}

std::vector<ChainComplex> decompose_masked(const TriMesh& mesh,
                                           const std::vector<std::uint8_t>& active,
                                           const std::vector<TriClass>& cls) {
    std::vector<ChainComplex> out;
    std::vector<std::uint8_t> assigned(mesh.tris.size(), 0);

    auto walk_from = [&](int junction, int first) {
        ChainComplex c;
        c.blob = mesh.tris[first].blob;
        c.end_a = junction;
        int prev = junction, cur = first;
        while (true) {
            assigned[cur] = 1;
            c.triangles.push_back(cur);
            if (cls[cur] == TriClass::termination) {
                c.kind = ChainComplex::Kind::limb;
                c.end_b = cur;
                return c;
            }
            const int nxt = next_along(mesh, active, cur, prev);
            if (cls[nxt] == TriClass::junction) {
                c.kind = ChainComplex::Kind::torso;
                c.end_b = nxt;
                return c;
            }
            prev = cur;
            cur = nxt;
        }
    };

    for (int t = 0; t < int(mesh.tris.size()); ++t) {
        if (!active[t] || cls[t] != TriClass::junction) continue;
        for (int k = 0; k < 3; ++k) {
            if (!edge_internal(mesh, active, t, k)) continue;
            const int u = mesh.tris[t].neighbor[k];
            if (cls[u] == TriClass::junction) {
                if (t < u) {
                    ChainComplex c;
                    c.kind = ChainComplex::Kind::torso;
                    c.blob = mesh.tris[t].blob;
                    c.end_a = t;
                    c.end_b = u;
                    out.push_back(std::move(c));
                }
            } else if (!assigned[u]) {
                out.push_back(walk_from(t, u));
            }
        }
    }
    // Junction-free blobs: free chains from terminations, isolated singles,
    // and closed sleeve cycles (annular blobs).
    for (int t = 0; t < int(mesh.tris.size()); ++t) {
        if (!active[t] || assigned[t] || cls[t] == TriClass::junction) continue;
        if (cls[t] == TriClass::termination) {
            ChainComplex c;
            c.kind = ChainComplex::Kind::free_chain;
            c.blob = mesh.tris[t].blob;
            c.end_a = t;
            int prev = -1, cur = t;
            while (cur >= 0) {
                assigned[cur] = 1;
                c.triangles.push_back(cur);
                if (cls[cur] == TriClass::termination && cur != t) break;
                const int nxt = next_along(mesh, active, cur, prev);
                prev = cur;
                cur = nxt;
            }
            c.end_b = c.triangles.back();
            out.push_back(std::move(c));
        } else if (cls[t] == TriClass::isolated) {
            ChainComplex c;
            c.kind = ChainComplex::Kind::free_chain;
            c.blob = mesh.tris[t].blob;
            c.end_a = c.end_b = t;
            c.triangles.push_back(t);
            assigned[t] = 1;
            out.push_back(std::move(c));
        }
    }
    for (int t = 0; t < int(mesh.tris.size()); ++t) {
        if (!active[t] || assigned[t] || cls[t] == TriClass::junction) continue;
        // Closed cycle of sleeves.
        ChainComplex c;
        c.kind = ChainComplex::Kind::torso;
        c.blob = mesh.tris[t].blob;
        int prev = -1, cur = t;
        do {
            assigned[cur] = 1;
            c.triangles.push_back(cur);
            const int nxt = next_along(mesh, active, cur, prev);
            prev = cur;
            cur = nxt;
        } while (cur != t && cur >= 0);
        out.push_back(std::move(c));
    }
    return out;
}

std::uint64_t edge_key(int t, int u) {
    return (std::uint64_t(std::min(t, u)) << 32) | std::uint64_t(std::max(t, u));
}

int shared_edge(const TriMesh& mesh, int t, int u) {
    for (int k = 0; k < 3; ++k)
        if (mesh.tris[t].neighbor[k] == u) return k;
    return -1;
}

double chord_length(const TriMesh& mesh, int t, int k) {
    return dist(mesh.vertex(mesh.tris[t].v[k]), mesh.vertex(mesh.tris[t].v[(k + 1) % 3]));
}

Vec2 chord_midpoint(const TriMesh& mesh, int t, int k) {
    return midpoint(mesh.vertex(mesh.tris[t].v[k]), mesh.vertex(mesh.tris[t].v[(k + 1) % 3]));
}

// Polyline length of a limb from its junction chord to the termination apex.
double limb_length(const TriMesh& mesh, const std::vector<std::uint8_t>& active,
                   const ChainComplex& limb) {
    double len = 0;
    Vec2 at = chord_midpoint(mesh, limb.triangles.front(),
                             shared_edge(mesh, limb.triangles.front(), limb.end_a));
    (void)active;
    for (std::size_t i = 0; i + 1 < limb.triangles.size(); ++i) {
        const int t = limb.triangles[i], u = limb.triangles[i + 1];
        const Vec2 m = chord_midpoint(mesh, t, shared_edge(mesh, t, u));
        len += dist(at, m);
        at = m;
    }
    const int term = limb.triangles.back();
    // Apex = vertex opposite the single internal edge of the termination.
    int internal_k = -1;
    for (int k = 0; k < 3; ++k) {
        const int n = mesh.tris[term].neighbor[k];
        if (n >= 0 && !mesh.tris[term].constrained[k] &&
            (limb.triangles.size() == 1
                 ? n == limb.end_a
                 : n == limb.triangles[limb.triangles.size() - 2]))
            internal_k = k;
    }
    const Vec2 apex = mesh.vertex(mesh.tris[term].v[(internal_k + 2) % 3]);
    len += dist(at, apex);
    return len;
}

}  // namespace

std::vector<TriClass> classify_triangles(const TriMesh& mesh) {
    return classify_masked(mesh, std::vector<std::uint8_t>(mesh.tris.size(), 1));
}

std::vector<ChainComplex> chain_decompose(const TriMesh& mesh,
                                          const std::vector<TriClass>& cls) {
    return decompose_masked(mesh, std::vector<std::uint8_t>(mesh.tris.size(), 1), cls);
}

double CatSkeleton::total_length(int blob) const {
    double len = 0;
    for (const Segment& s : segments)
        if (nodes[s.a].blob == blob) len += dist(nodes[s.a].p, nodes[s.b].p);
    return len;
}

double CatSkeleton::mean_width(int blob) const {
    double wsum = 0, lsum = 0;
    for (const Segment& s : segments) {
        if (nodes[s.a].blob != blob) continue;
        const double l = dist(nodes[s.a].p, nodes[s.b].p);
        wsum += l * (nodes[s.a].width + nodes[s.b].width) / 2;
        lsum += l;
    }
    return lsum > 0 ? wsum / lsum : 0;
}

CatSkeleton build_skeleton_masked(const TriMesh& mesh,
                                  const std::vector<std::uint8_t>& active) {
    const std::vector<TriClass> cls = classify_masked(mesh, active);
    CatSkeleton skel;
    skel.blob_count = mesh.blob_count;
    skel.collapsed.assign(std::size_t(std::max(mesh.blob_count, 0)), 0);
    skel.complexes = decompose_masked(mesh, active, cls);

    // Owning complex per internal edge.
    std::map<std::uint64_t, int> owner;
    std::vector<int> complex_of(mesh.tris.size(), -1);
    for (int ci = 0; ci < int(skel.complexes.size()); ++ci) {
        const ChainComplex& c = skel.complexes[ci];
        for (int t : c.triangles) complex_of[t] = ci;
        if (c.triangles.empty()) {
            owner[edge_key(c.end_a, c.end_b)] = ci;
            continue;
        }
        if (c.end_a >= 0 && cls[c.end_a] == TriClass::junction)
            owner[edge_key(c.end_a, c.triangles.front())] = ci;
        if (c.end_b >= 0 && cls[c.end_b] == TriClass::junction)
            owner[edge_key(c.end_b, c.triangles.back())] = ci;
        for (std::size_t i = 0; i + 1 < c.triangles.size(); ++i)
            owner[edge_key(c.triangles[i], c.triangles[i + 1])] = ci;
        if (c.kind == ChainComplex::Kind::torso && c.end_a < 0 && c.triangles.size() > 2)
            owner[edge_key(c.triangles.back(), c.triangles.front())] = ci;
    }

    std::map<std::uint64_t, int> chord_node;
    auto chord_node_id = [&](int t, int k) {
        const int u = mesh.tris[t].neighbor[k];
        auto [it, fresh] = chord_node.try_emplace(edge_key(t, u), int(skel.nodes.size()));
        if (fresh)
            skel.nodes.push_back({chord_midpoint(mesh, t, k), chord_length(mesh, t, k),
                                  mesh.tris[t].blob});
        return it->second;
    };
    auto owner_of = [&](int t, int u) {
        auto it = owner.find(edge_key(t, u));
        return it == owner.end() ? -1 : it->second;
    };

    for (int t = 0; t < int(mesh.tris.size()); ++t) {
        if (!active[t]) continue;
        const int blob = mesh.tris[t].blob;
        switch (cls[t]) {
            case TriClass::isolated: {
                const double eq =
                    2 * std::sqrt(std::abs(mesh.tri_area(t)) / std::numbers::pi);
                skel.nodes.push_back({mesh.tri_centroid(t), eq, blob});
                break;
            }
            case TriClass::termination: {
                for (int k = 0; k < 3; ++k) {
                    if (!edge_internal(mesh, active, t, k)) continue;
                    const int mid = chord_node_id(t, k);
                    const int apex = int(skel.nodes.size());
                    skel.nodes.push_back({mesh.vertex(mesh.tris[t].v[(k + 2) % 3]), 0.0, blob});
                    skel.segments.push_back({mid, apex, complex_of[t]});
                }
                break;
            }
            case TriClass::sleeve: {
                int mids[2], m = 0;
                for (int k = 0; k < 3; ++k)
                    if (edge_internal(mesh, active, t, k)) mids[m++] = chord_node_id(t, k);
                skel.segments.push_back({mids[0], mids[1], complex_of[t]});
                break;
            }
            case TriClass::junction: {
                double wsum = 0;
                int centroid = int(skel.nodes.size());
                skel.nodes.push_back({mesh.tri_centroid(t), 0.0, blob});
                for (int k = 0; k < 3; ++k) {
                    if (!edge_internal(mesh, active, t, k)) continue;
                    wsum += chord_length(mesh, t, k);
                    skel.segments.push_back({centroid, chord_node_id(t, k),
                                             owner_of(t, mesh.tris[t].neighbor[k])});
                }
                skel.nodes[centroid].width = wsum / 3;
                break;
            }
        }
    }

    // Hierarchy: complexes sharing a junction end are adjacent; each blob is
    // rooted at its largest torso, falling back to its largest complex.
    skel.complex_parent.assign(skel.complexes.size(), -1);
    std::map<int, std::vector<int>> at_junction;
    for (int ci = 0; ci < int(skel.complexes.size()); ++ci) {
        const ChainComplex& c = skel.complexes[ci];
        if (c.end_a >= 0 && cls[c.end_a] == TriClass::junction)
            at_junction[c.end_a].push_back(ci);
        if (c.end_b >= 0 && c.end_b != c.end_a && cls[c.end_b] == TriClass::junction)
            at_junction[c.end_b].push_back(ci);
    }
    std::vector<int> root_of_blob(std::size_t(std::max(mesh.blob_count, 0)), -1);
    for (int ci = 0; ci < int(skel.complexes.size()); ++ci) {
        const ChainComplex& c = skel.complexes[ci];
        int& root = root_of_blob[c.blob];
        if (root < 0) {
            root = ci;
            continue;
        }
        const ChainComplex& r = skel.complexes[root];
        const bool ct = c.kind == ChainComplex::Kind::torso;
        const bool rt = r.kind == ChainComplex::Kind::torso;
        if ((ct && !rt) || (ct == rt && c.triangles.size() > r.triangles.size())) root = ci;
    }
    std::vector<std::uint8_t> seen(skel.complexes.size(), 0);
    for (int root : root_of_blob) {
        if (root < 0 || seen[root]) continue;
        std::vector<int> queue{root};
        seen[root] = 1;
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            const int ci = queue[qi];
            const ChainComplex& c = skel.complexes[ci];
            for (int end : {c.end_a, c.end_b}) {
                if (end < 0 || cls[end] != TriClass::junction) continue;
                for (int nb : at_junction[end]) {
                    if (seen[nb]) continue;
                    seen[nb] = 1;
                    skel.complex_parent[nb] = ci;
                    queue.push_back(nb);
                }
            }
        }
    }
    return skel;
}

CatSkeleton build_skeleton(const TriMesh& mesh, const std::vector<TriClass>& classes) {
    (void)classes;  // recomputed internally; kept for the operation signature
    return build_skeleton_masked(mesh, std::vector<std::uint8_t>(mesh.tris.size(), 1));
}

CatSkeleton prune_skeleton(const TriMesh& mesh, const CatSkeleton& skel, double tau) {
    if (tau < 0) throw std::invalid_argument("prune_skeleton: tau must be >= 0");
    (void)skel;
    std::vector<std::uint8_t> active(mesh.tris.size(), 1);

    std::vector<std::uint8_t> had_junction(std::size_t(std::max(mesh.blob_count, 1)), 0);
    {
        const auto cls = classify_triangles(mesh);
        for (int t = 0; t < int(mesh.tris.size()); ++t)
            if (cls[t] == TriClass::junction) had_junction[mesh.tris[t].blob] = 1;
    }

    // Leaves-first limb erosion; junctions reclassify as their limbs vanish
    // and chains re-merge across them.
    bool removed = true;
    while (removed) {
        removed = false;
        const auto cls = classify_masked(mesh, active);
        const auto complexes = decompose_masked(mesh, active, cls);
        for (const ChainComplex& c : complexes) {
            if (c.kind != ChainComplex::Kind::limb) continue;
            const double chord =
                chord_length(mesh, c.triangles.front(),
                             shared_edge(mesh, c.triangles.front(), c.end_a));
            if (limb_length(mesh, active, c) < tau * chord) {
                for (int t : c.triangles) active[t] = 0;
                removed = true;
            }
        }
    }

    // Residual junction-free chains of blobs that originally had junctions
    // collapse to a point when insignificant; native free chains are exempt.
    CatSkeleton interim = build_skeleton_masked(mesh, active);
    std::vector<std::uint8_t> collapse(had_junction.size(), 0);
    {
        const auto cls = classify_masked(mesh, active);
        std::vector<std::uint8_t> has_junction_now(had_junction.size(), 0);
        for (int t = 0; t < int(mesh.tris.size()); ++t)
            if (active[t] && cls[t] == TriClass::junction)
                has_junction_now[mesh.tris[t].blob] = 1;
        for (int b = 0; b < int(had_junction.size()); ++b) {
            if (!had_junction[b] || has_junction_now[b]) continue;
            double maxw = 0;
            for (const auto& n : interim.nodes)
                if (n.blob == b) maxw = std::max(maxw, n.width);
            // Core length: the chord-midpoint polyline, without the zero-width
            // apex spurs the termination rule appends at both ends.
            double core = 0;
            for (const auto& s : interim.segments)
                if (interim.nodes[s.a].blob == b &&
                    interim.nodes[s.a].width > 0 && interim.nodes[s.b].width > 0)
                    core += dist(interim.nodes[s.a].p, interim.nodes[s.b].p);
            if (core < tau * maxw) collapse[b] = 1;
        }
    }
    for (int b = 0; b < int(collapse.size()); ++b) {
        if (!collapse[b]) continue;
        int best = -1;
        double best_area = -1;
        for (int t = 0; t < int(mesh.tris.size()); ++t) {
            if (!active[t] || mesh.tris[t].blob != b) continue;
            const double a = std::abs(mesh.tri_area(t));
            if (a > best_area) {
                best_area = a;
                best = t;
            }
        }
        for (int t = 0; t < int(mesh.tris.size()); ++t)
            if (mesh.tris[t].blob == b) active[t] = (t == best);
    }

    CatSkeleton out = build_skeleton_masked(mesh, active);
    for (int b = 0; b < int(collapse.size()); ++b)
        if (collapse[b]) out.collapsed[b] = 1;
    return out;
}

void write_skeleton(const CatSkeleton& skel, std::ostream& out) {
    char buf[96];
    for (const auto& n : skel.nodes) {
        std::snprintf(buf, sizeof buf, "n %.6f %.6f %.6f\n", n.p.x, n.p.y, n.width);
        out << buf;
    }
    for (const auto& s : skel.segments)
        out << "s " << s.a << " " << s.b << " " << s.complex_id << "\n";
}

}  // namespace granmorph
