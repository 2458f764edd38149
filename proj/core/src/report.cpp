#include "granmorph/report.hpp"

#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace granmorph {

namespace {

const std::pair<Layer, const char*> kLayerNames[] = {
    {Layer::image, "image"},
    {Layer::mask, "mask"},
    {Layer::contours, "contours"},
    {Layer::mesh, "mesh"},
    {Layer::grey_triangles, "grey-triangles"},
    {Layer::skeleton_unpruned, "skeleton-unpruned"},
    {Layer::skeleton_pruned, "skeleton-pruned"},
};

const char* default_color(Layer l) {
    switch (l) {
        case Layer::contours: return "#e53935";
        case Layer::mesh: return "#9e9e9e";
        case Layer::skeleton_unpruned: return "#1e88e5";
        case Layer::skeleton_pruned: return "#43a047";
        default: return "#000000";
    }
}

std::string f3(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string g6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void emit_runs(const std::function<int(int, int)>& value, int w, int h,
               const std::function<void(int, int, int, int)>& rect) {
    for (int y = 0; y < h; ++y) {
        int x = 0;
        while (x < w) {
            const int v = value(x, y);
            int x2 = x + 1;
            while (x2 < w && value(x2, y) == v) ++x2;
            rect(x, y, x2 - x, v);
            x = x2;
        }
    }
}

void path_from_points(std::ostream& out, const std::vector<Vec2>& pts) {
    out << "M " << f3(pts[0].x) << " " << f3(pts[0].y);
    for (std::size_t i = 1; i < pts.size(); ++i)
        out << " L " << f3(pts[i].x) << " " << f3(pts[i].y);
    out << " Z";
}

void render_skeleton(std::ostream& out, const CatSkeleton& skel,
                     const std::string& color, double sw) {
    std::vector<std::uint8_t> in_segment(skel.nodes.size(), 0);
    out << "<g fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
        << f3(sw) << "\">\n";
    for (const auto& s : skel.segments) {
        in_segment[std::size_t(s.a)] = in_segment[std::size_t(s.b)] = 1;
        out << "<path d=\"M " << f3(skel.nodes[s.a].p.x) << " "
            << f3(skel.nodes[s.a].p.y) << " L " << f3(skel.nodes[s.b].p.x)
            << " " << f3(skel.nodes[s.b].p.y) << "\"/>\n";
    }
    for (std::size_t i = 0; i < skel.nodes.size(); ++i)
        if (!in_segment[i])
            out << "<circle cx=\"" << f3(skel.nodes[i].p.x) << "\" cy=\""
                << f3(skel.nodes[i].p.y) << "\" r=\"" << f3(2 * sw)
                << "\" fill=\"" << color << "\" stroke=\"none\"/>\n";
    out << "</g>\n";
}

}  // namespace

const char* layer_name(Layer l) {
    for (const auto& [layer, name] : kLayerNames)
        if (layer == l) return name;
    throw std::invalid_argument("layer_name: unknown layer");
}

Layer layer_from_name(const std::string& name) {
    for (const auto& [layer, n] : kLayerNames)
        if (name == n) return layer;
    throw std::invalid_argument("unknown render layer: " + name);
}

void render_svg(const RenderScene& scene, const RenderSpec& spec,
                std::ostream& out) {
    if (spec.layers.empty())
        throw std::invalid_argument("render_svg: no layers selected");
    const double sw = spec.stroke_width;
    auto color = [&](Layer l) -> std::string {
        auto it = spec.palette.find(l);
        return it != spec.palette.end() ? it->second : default_color(l);
    };
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
        << g6(scene.width * spec.scale) << "\" height=\""
        << g6(scene.height * spec.scale) << "\" viewBox=\"0 0 " << scene.width
        << " " << scene.height << "\">\n";
    for (Layer layer : spec.layers) {
        out << "<g id=\"" << layer_name(layer) << "\">\n";
        switch (layer) {
            case Layer::image:
                if (scene.image) {
                    const GreyImage& img = *scene.image;
                    emit_runs([&](int x, int y) { return int(img.at(x, y)); },
                              img.width(), img.height(),
                              [&](int x, int y, int w, int g) {
                                  out << "<rect x=\"" << x << "\" y=\"" << y
                                      << "\" width=\"" << w
                                      << "\" height=\"1\" fill=\"rgb(" << g
                                      << "," << g << "," << g << ")\"/>\n";
                              });
                }
                break;
            case Layer::mask:
                if (scene.mask) {
                    const BinaryImage& m = *scene.mask;
                    emit_runs([&](int x, int y) { return int(m.at(x, y)); },
                              m.width, m.height,
                              [&](int x, int y, int w, int v) {
                                  if (v)
                                      out << "<rect x=\"" << x << "\" y=\"" << y
                                          << "\" width=\"" << w
                                          << "\" height=\"1\" fill=\"#ffffff\"/>\n";
                              });
                }
                break;
            case Layer::contours:
                if (scene.contours) {
                    out << "<g fill=\"none\" stroke=\"" << color(layer)
                        << "\" stroke-width=\"" << f3(sw) << "\">\n";
                    for (const Contour& c : scene.contours->contours) {
                        out << "<path d=\"";
                        path_from_points(out, c.points);
                        out << "\"/>\n";
                    }
                    out << "</g>\n";
                }
                break;
            case Layer::mesh:
                if (scene.mesh) {
                    out << "<g fill=\"none\" stroke=\"" << color(layer)
                        << "\" stroke-width=\"" << f3(sw / 2) << "\">\n";
                    for (const auto& t : scene.mesh->tris) {
                        out << "<path d=\"";
                        path_from_points(out, {scene.mesh->vertex(t.v[0]),
                                               scene.mesh->vertex(t.v[1]),
                                               scene.mesh->vertex(t.v[2])});
                        out << "\"/>\n";
                    }
                    out << "</g>\n";
                }
                break;
            case Layer::grey_triangles:
                if (scene.grey_mesh) {
                    const GreyMesh& gm = *scene.grey_mesh;
                    for (int t = 0; t < int(gm.mesh.tris.size()); ++t) {
                        const auto& tr = gm.mesh.tris[t];
                        const int g = int(gm.grey[t] + 0.5);
                        out << "<path fill=\"rgb(" << g << "," << g << "," << g
                            << ")\" stroke=\"none\" d=\"";
                        path_from_points(out, {gm.mesh.vertex(tr.v[0]),
                                               gm.mesh.vertex(tr.v[1]),
                                               gm.mesh.vertex(tr.v[2])});
                        out << "\"/>\n";
                    }
                }
                break;
            case Layer::skeleton_unpruned:
                if (scene.skeleton_unpruned)
                    render_skeleton(out, *scene.skeleton_unpruned, color(layer), sw);
                break;
            case Layer::skeleton_pruned:
                if (scene.skeleton_pruned)
                    render_skeleton(out, *scene.skeleton_pruned, color(layer), sw);
                break;
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
}

void write_stats_csv(const std::vector<ParticleStats>& particles,
                     std::ostream& out) {
    out << "id,class,area,length,width,cx,cy,orientation,holes\n";
    for (const ParticleStats& p : particles) {
        out << p.id << ","
            << (p.cls == ParticleClass::grain ? "grain" : "binder") << ","
            << g6(p.area) << "," << g6(p.length) << "," << g6(p.width) << ","
            << g6(p.centroid.x) << "," << g6(p.centroid.y) << ","
            << g6(p.orientation) << "," << p.holes << "\n";
    }
}

void write_scene_json(const SceneStats& scene,
                      const std::vector<ParticleStats>& particles,
                      std::ostream& out) {
    nlohmann::ordered_json j;
    j["grain_count"] = scene.grain_count;
    j["binder_count"] = scene.binder_count;
    j["area_fraction"] = scene.area_fraction;
    j["histogram"] = {{"bin_width", scene.bin_width}, {"bins", scene.bins}};
    auto& parts = j["particles"] = nlohmann::ordered_json::array();
    for (const ParticleStats& p : particles) {
        parts.push_back({
            {"id", p.id},
            {"class", p.cls == ParticleClass::grain ? "grain" : "binder"},
            {"area", p.area},
            {"length", p.length},
            {"width", p.width},
            {"centroid", {p.centroid.x, p.centroid.y}},
            {"orientation", p.orientation},
            {"holes", p.holes},
        });
    }
    out << j.dump(2) << "\n";
}

}  // namespace granmorph
