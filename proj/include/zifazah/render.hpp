#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "zifazah/color.hpp"
#include "zifazah/encoding.hpp"
#include "zifazah/numfmt.hpp"
#include "zifazah/session.hpp"
#include "zifazah/tessellate.hpp"

namespace zifazah {

inline constexpr double kFocusAlpha = 1.0;
inline constexpr double kContextAlpha = 0.25;

/// Viewing direction, pointing from the eye into the scene.
struct ViewSpec {
  Vec3 direction{0, 0, -1};

  static ViewSpec toward(const Vec3& d) {
    if (!is_finite(d) || !(norm(d) > 0)) throw Error("view direction must be a finite non-zero vector");
    return {normalized(d)};
  }
  bool operator==(const ViewSpec&) const = default;
};

struct DepthRange {
  double min = 0, max = 0;
};

inline double view_depth(const Vec3& p, const ViewSpec& view) { return dot(p, view.direction); }

inline DepthRange depth_range(std::span<const Vec3> positions, const ViewSpec& view) {
  DepthRange r{view_depth(positions.front(), view), view_depth(positions.front(), view)};
  for (const auto& p : positions) {
    const double d = view_depth(p, view);
    r.min = std::min(r.min, d);
    r.max = std::max(r.max, d);
  }
  return r;
}

/// Affine map of raw depth from `range` onto [lower, upper], clamped. A
/// degenerate range maps to the midpoint.
inline double map_depth(double depth, const DepthRange& range, double lower, double upper) {
  if (!(range.max > range.min)) return (lower + upper) / 2;
  const double t = (depth - range.min) / (range.max - range.min);
  return std::clamp(lower + t * (upper - lower), lower, upper);
}

/// Farther vertices (larger dot with the view direction) map toward `upper`.
inline std::vector<double> depth_normalize(std::span<const Vec3> positions, const ViewSpec& view, double lower,
                                           double upper) {
  if (positions.empty()) return {};
  const DepthRange range = depth_range(positions, view);
  std::vector<double> out;
  out.reserve(positions.size());
  for (const auto& p : positions) out.push_back(map_depth(view_depth(p, view), range, lower, upper));
  return out;
}

struct VertexAttributes {
  Vec3 position;
  Rgba color;
  double radius = kDefaultRadius;
  bool operator==(const VertexAttributes&) const = default;
};

struct FiberAttributes {
  int id = 0;
  std::string bundle;
  Shape shape = Shape::Tube;
  bool focus = true;
  bool culled = false;
  std::vector<VertexAttributes> vertices;  // empty when culled
  bool operator==(const FiberAttributes&) const = default;
};

/// Per-vertex color, alpha and radius. Base encodings first, then the depth
/// cue modifies its channel. Depth normalization uses the focused, unculled
/// vertices (all unculled vertices when nothing is focused).
inline std::vector<FiberAttributes> compute_vertex_attributes(const FiberModel& model, std::span<const char> focus,
                                                              std::span<const char> culled,
                                                              const EncodingState& encoding, const ViewSpec& view) {
  std::vector<Vec3> population;
  for (int pass = 0; pass < 2 && population.empty(); ++pass)
    for (const auto& f : model.fibers())
      if (!culled[f.id] && (pass == 1 || focus[f.id]))
        for (const auto& v : f.vertices) population.push_back(v.position);
  const DepthRange range = population.empty() ? DepthRange{} : depth_range(population, view);

  std::vector<FiberAttributes> table;
  table.reserve(model.size());
  for (const auto& f : model.fibers()) {
    const FiberEncoding& enc = encoding.at(f.id);
    FiberAttributes fa;
    fa.id = f.id;
    fa.bundle = f.bundle;
    fa.shape = enc.shape;
    fa.culled = culled[f.id] != 0;
    fa.focus = !fa.culled && focus[f.id];
    if (fa.culled) {
      table.push_back(std::move(fa));
      continue;
    }
    const Rgb palette = bundle_color(f.bundle);
    const double base_alpha = fa.focus ? kFocusAlpha : kContextAlpha;
    fa.vertices.reserve(f.vertices.size());
    for (const auto& v : f.vertices) {
      Rgb rgb = enc.color == ColorSource::Palette ? palette
                : enc.color == ColorSource::FA    ? colormap_scalar(v.fa)
                                                  : colormap_scalar(v.la);
      double alpha = base_alpha;
      double radius = enc.size.by_metric ? enc.size.minimal + enc.size.scale * v.metric(enc.size.metric) : kDefaultRadius;
      if (enc.depth.cue != DepthCue::None) {
        const double t = map_depth(view_depth(v.position, view), range, enc.depth.lower, enc.depth.upper);
        switch (enc.depth.cue) {
          case DepthCue::Size: radius *= t; break;
          case DepthCue::Color: rgb = colormap_scalar(t); break;
          case DepthCue::Value: rgb = {rgb.r * t, rgb.g * t, rgb.b * t}; break;
          case DepthCue::Transparency: alpha = base_alpha * t; break;
          case DepthCue::None: break;
        }
      }
      if (enc.shape == Shape::Line) radius = 0;
      VertexAttributes va;
      va.position = v.position;
      va.color = {std::clamp(rgb.r, 0.0, 1.0), std::clamp(rgb.g, 0.0, 1.0), std::clamp(rgb.b, 0.0, 1.0),
                  std::clamp(alpha, 0.0, 1.0)};
      va.radius = radius;
      fa.vertices.push_back(va);
    }
    table.push_back(std::move(fa));
  }
  return table;
}

struct FiberMesh {
  int fiber = 0;
  Shape kind = Shape::Tube;
  Mesh mesh;
};

struct SceneSnapshot {
  std::uint64_t generation = 0;
  ViewSpec view;
  PlaneState planes;
  std::vector<FiberAttributes> fibers;
  bool with_meshes = false;
  std::vector<FiberMesh> meshes;
};

inline std::vector<FiberMesh> tessellate_scene(const FiberModel& model, const std::vector<FiberAttributes>& fibers) {
  std::vector<FiberMesh> meshes;
  for (const auto& fa : fibers) {
    if (fa.culled || fa.shape == Shape::Line) continue;
    std::vector<double> radii;
    std::vector<Rgba> colors;
    for (const auto& v : fa.vertices) {
      radii.push_back(v.radius);
      colors.push_back(v.color);
    }
    const Fiber& f = model.fiber(fa.id);
    meshes.push_back({fa.id, fa.shape,
                      fa.shape == Shape::Tube ? tessellate_tube(f, radii, kTubeSides, colors)
                                              : tessellate_ribbon(f, kRibbonWidth, colors)});
  }
  return meshes;
}

/// Pure function of (model, session state, view).
inline SceneSnapshot emit_snapshot(const Session& s, const ViewSpec& view = {}, bool with_meshes = false) {
  const FiberModel& m = s.require_model();
  SceneSnapshot snap;
  snap.generation = s.generation;
  snap.view = view;
  snap.planes = s.planes;
  const auto focus = s.selection.focused_mask(m.size());
  const auto culled = s.culled_mask();
  snap.fibers = compute_vertex_attributes(m, focus, culled, s.encoding, view);
  snap.with_meshes = with_meshes;
  if (with_meshes) snap.meshes = tessellate_scene(m, snap.fibers);
  return snap;
}

namespace detail {

inline std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", c);
      out += buf;
    } else {
      out += c;
    }
  }
  return out + "\"";
}

inline void append_numbers(std::string& out, std::initializer_list<double> vals) {
  out += '[';
  bool first = true;
  for (double v : vals) {
    if (!first) out += ',';
    out += fixed6(v);
    first = false;
  }
  out += ']';
}

}  // namespace detail

/// Scene document: JSON with fixed key order, one fiber or mesh per line and
/// every real number printed with six decimals.
inline std::string serialize_snapshot(const SceneSnapshot& snap) {
  std::string out = "{\n\"format\": \"zifazah-scene/1\",\n";
  out += "\"generation\": " + std::to_string(snap.generation) + ",\n";
  out += "\"view\": ";
  detail::append_numbers(out, {snap.view.direction.x, snap.view.direction.y, snap.view.direction.z});
  out += ",\n\"planes\": [\n";
  const char* axis_name[] = {"x", "y", "z"};
  for (std::size_t i = 0; i < kPlanes.size(); ++i) {
    const Plane p = kPlanes[i];
    const auto& setting = snap.planes.of(p);
    out += "{\"name\": \"" + std::string(to_string(p)) + "\", \"axis\": \"" + axis_name[plane_axis(p)] +
           "\", \"position\": " + fixed6(setting.position) + ", \"enabled\": " + (setting.enabled ? "true" : "false") +
           "}";
    out += i + 1 < kPlanes.size() ? ",\n" : "\n";
  }
  out += "],\n\"fibers\": [\n";
  for (std::size_t i = 0; i < snap.fibers.size(); ++i) {
    const auto& f = snap.fibers[i];
    out += "{\"id\": " + std::to_string(f.id) + ", \"bundle\": " + detail::json_string(f.bundle) +
           ", \"shape\": \"" + std::string(to_string(f.shape)) + "\", \"focus\": " + (f.focus ? "true" : "false") +
           ", \"culled\": " + (f.culled ? "true" : "false");
    if (!f.culled) {
      out += ", \"vertices\": [";
      for (std::size_t k = 0; k < f.vertices.size(); ++k) {
        const auto& v = f.vertices[k];
        if (k) out += ',';
        detail::append_numbers(out, {v.position.x, v.position.y, v.position.z, v.color.r, v.color.g, v.color.b,
                                     v.color.a, v.radius});
      }
      out += ']';
    }
    out += '}';
    out += i + 1 < snap.fibers.size() ? ",\n" : "\n";
  }
  out += "]";
  if (snap.with_meshes) {
    out += ",\n\"meshes\": [\n";
    for (std::size_t i = 0; i < snap.meshes.size(); ++i) {
      const auto& fm = snap.meshes[i];
      out += "{\"fiber\": " + std::to_string(fm.fiber) + ", \"kind\": \"" + std::string(to_string(fm.kind)) +
             "\", \"vertices\": [";
      for (std::size_t k = 0; k < fm.mesh.vertices.size(); ++k) {
        const auto& p = fm.mesh.vertices[k];
        const auto& n = fm.mesh.normals[k];
        const auto& c = fm.mesh.colors[k];
        if (k) out += ',';
        detail::append_numbers(out, {p.x, p.y, p.z, n.x, n.y, n.z, c.r, c.g, c.b, c.a});
      }
      out += "], \"triangles\": [";
      for (std::size_t t = 0; t < fm.mesh.triangles.size(); ++t) {
        const auto& tri = fm.mesh.triangles[t];
        if (t) out += ',';
        out += "[" + std::to_string(tri[0]) + "," + std::to_string(tri[1]) + "," + std::to_string(tri[2]) + "]";
      }
      out += "]}";
      out += i + 1 < snap.meshes.size() ? ",\n" : "\n";
    }
    out += "]";
  }
  out += "\n}\n";
  return out;
}

}  // namespace zifazah
