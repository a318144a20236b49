#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "zifazah/color.hpp"
#include "zifazah/diagnostic.hpp"
#include "zifazah/fiber_model.hpp"
#include "zifazah/geometry.hpp"

namespace zifazah {

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<Vec3> normals;
  std::vector<std::array<int, 3>> triangles;
  std::vector<Rgba> colors;
};

struct Frame {
  Vec3 tangent, normal, binormal;
};

namespace detail {

inline Vec3 initial_normal(const Vec3& t) {
  // Axis of the tangent's smallest component, made orthogonal to it.
  int axis = 0;
  for (int a = 1; a < 3; ++a)
    if (std::abs(t[a]) < std::abs(t[axis])) axis = a;
  Vec3 e;
  e[axis] = 1;
  return normalized(e - t * dot(e, t));
}

inline Vec3 rotate_between(const Vec3& v, const Vec3& from, const Vec3& to) {
  const Vec3 axis = cross(from, to);
  const double s = norm(axis);
  const double c = dot(from, to);
  if (s < 1e-12) return v;
  const Vec3 k = axis * (1.0 / s);
  return v * c + cross(k, v) * s + k * (dot(k, v) * (1 - c));
}

}  // namespace detail

/// Rotation-minimizing frames along a polyline. Tangents are central
/// differences (one-sided at the ends); the first normal comes from the
/// smallest-component axis of the first tangent.
inline std::vector<Frame> parallel_transport_frames(std::span<const Vec3> pts) {
  const std::size_t n = pts.size();
  if (n < 2) throw Error("polyline needs at least 2 points");
  for (std::size_t k = 1; k < n; ++k)
    if (!(distance(pts[k], pts[k - 1]) > 0)) throw Error("coincident consecutive points");

  std::vector<Frame> frames(n);
  for (std::size_t k = 0; k < n; ++k) {
    Vec3 d = (k == 0) ? pts[1] - pts[0] : (k == n - 1) ? pts[n - 1] - pts[n - 2] : pts[k + 1] - pts[k - 1];
    if (!(norm(d) > 1e-12)) d = pts[k] - pts[k - 1];
    frames[k].tangent = normalized(d);
  }
  frames[0].normal = detail::initial_normal(frames[0].tangent);
  for (std::size_t k = 1; k < n; ++k) {
    Vec3 nrm = detail::rotate_between(frames[k - 1].normal, frames[k - 1].tangent, frames[k].tangent);
    nrm = nrm - frames[k].tangent * dot(nrm, frames[k].tangent);
    if (!(norm(nrm) > 1e-12)) nrm = detail::initial_normal(frames[k].tangent);
    frames[k].normal = normalized(nrm);
  }
  for (auto& f : frames) f.binormal = normalized(cross(f.tangent, f.normal));
  return frames;
}

inline std::vector<Vec3> positions_of(const Fiber& f) {
  std::vector<Vec3> pts;
  pts.reserve(f.vertices.size());
  for (const auto& v : f.vertices) pts.push_back(v.position);
  return pts;
}

/// Open-ended tube: ring k has `sides` vertices at radius radii[k] around
/// vertex k, in the plane normal to the local tangent.
inline Mesh tessellate_tube(const Fiber& fiber, std::span<const double> radii, int sides = 8,
                            std::span<const Rgba> colors = {}) {
  if (sides < 3) throw Error("tube needs at least 3 sides");
  const auto pts = positions_of(fiber);
  if (radii.size() != pts.size()) throw Error("one radius per vertex required");
  for (double r : radii)
    if (!(r > 0)) throw Error("tube radii must be positive");
  const auto frames = parallel_transport_frames(pts);

  Mesh mesh;
  const std::size_t ring = static_cast<std::size_t>(sides);
  mesh.vertices.reserve(pts.size() * ring);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    for (int j = 0; j < sides; ++j) {
      const double phi = 2.0 * std::numbers::pi * j / sides;
      const Vec3 dir = frames[k].normal * std::cos(phi) + frames[k].binormal * std::sin(phi);
      mesh.vertices.push_back(pts[k] + dir * radii[k]);
      mesh.normals.push_back(dir);
      mesh.colors.push_back(colors.empty() ? Rgba{} : colors[k]);
    }
  }
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    for (int j = 0; j < sides; ++j) {
      const int a = static_cast<int>(k) * sides + j;
      const int b = static_cast<int>(k) * sides + (j + 1) % sides;
      const int c = a + sides;
      const int d = b + sides;
      mesh.triangles.push_back({a, b, d});
      mesh.triangles.push_back({a, d, c});
    }
  }
  return mesh;
}

/// Flat strip of the given width centered on the polyline, spanning the
/// binormal direction; vertex normals are the transported normals.
inline Mesh tessellate_ribbon(const Fiber& fiber, double width, std::span<const Rgba> colors = {}) {
  if (!(width > 0)) throw Error("ribbon width must be positive");
  const auto pts = positions_of(fiber);
  const auto frames = parallel_transport_frames(pts);
  Mesh mesh;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Vec3 half = frames[k].binormal * (width / 2);
    mesh.vertices.push_back(pts[k] - half);
    mesh.vertices.push_back(pts[k] + half);
    mesh.normals.push_back(frames[k].normal);
    mesh.normals.push_back(frames[k].normal);
    const Rgba c = colors.empty() ? Rgba{} : colors[k];
    mesh.colors.push_back(c);
    mesh.colors.push_back(c);
  }
  for (int k = 0; k + 1 < static_cast<int>(pts.size()); ++k) {
    mesh.triangles.push_back({2 * k, 2 * k + 1, 2 * k + 3});
    mesh.triangles.push_back({2 * k, 2 * k + 3, 2 * k + 2});
  }
  return mesh;
}

}  // namespace zifazah
