#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <functional>
#include <cmath>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zifazah/diagnostic.hpp"
#include "zifazah/geometry.hpp"

namespace zifazah {

enum class Metric { FA, LA };

inline std::string_view to_string(Metric m) { return m == Metric::FA ? "FA" : "LA"; }

struct Vertex {
  Vec3 position;
  double fa = 0;
  double la = 0;

  double metric(Metric m) const { return m == Metric::FA ? fa : la; }
  bool operator==(const Vertex&) const = default;
};

struct Fiber {
  int id = 0;
  std::string bundle;
  std::vector<Vertex> vertices;

  Vec3 centroid() const {
    Vec3 c;
    for (const auto& v : vertices) c += v.position;
    return c * (1.0 / static_cast<double>(vertices.size()));
  }

  bool operator==(const Fiber&) const = default;
};

/// Validates a fiber against the dataset invariants. Throws Error.
inline void validate_fiber(const Fiber& f) {
  const std::string where = "fiber " + std::to_string(f.id);
  if (f.bundle.empty()) throw Error(where + ": empty bundle tag");
  for (char c : f.bundle)
    if (std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == ',')
      throw Error(where + ": bundle tag '" + f.bundle + "' contains a separator character");
  if (f.vertices.size() < 2) throw Error(where + ": fewer than 2 vertices");
  for (std::size_t k = 0; k < f.vertices.size(); ++k) {
    const auto& v = f.vertices[k];
    if (!is_finite(v.position)) throw Error(where + ": non-finite vertex position");
    if (!(v.fa >= 0 && v.fa <= 1) || !(v.la >= 0 && v.la <= 1))
      throw Error(where + ": FA/LA outside [0,1]");
    if (k > 0 && !(distance(v.position, f.vertices[k - 1].position) > 0))
      throw Error(where + ": coincident consecutive vertices at index " + std::to_string(k));
  }
}

/// The loaded streamline dataset. Immutable after construction; fiber ids are
/// their indices.
class FiberModel {
 public:
  FiberModel() = default;

  /// Takes ownership of `fibers`, renumbering ids densely in order.
  explicit FiberModel(std::vector<Fiber> fibers) : fibers_(std::move(fibers)) {
    for (std::size_t i = 0; i < fibers_.size(); ++i) {
      fibers_[i].id = static_cast<int>(i);
      validate_fiber(fibers_[i]);
      bundles_.insert(fibers_[i].bundle);
    }
    if (!fibers_.empty()) {
      bounds_ = Box::around(fibers_.front().vertices.front().position);
      for (const auto& f : fibers_)
        for (const auto& v : f.vertices) bounds_.expand(v.position);
    }
  }

  const std::vector<Fiber>& fibers() const { return fibers_; }
  const Fiber& fiber(int id) const { return fibers_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return fibers_.size(); }
  bool empty() const { return fibers_.empty(); }
  const std::set<std::string>& bundles() const { return bundles_; }
  bool has_bundle(std::string_view tag) const { return bundles_.count(std::string(tag)) > 0; }

  std::size_t vertex_count() const {
    std::size_t n = 0;
    for (const auto& f : fibers_) n += f.vertices.size();
    return n;
  }

  /// Minimal box containing every vertex. Throws on an empty model.
  const Box& bounds() const {
    if (fibers_.empty()) throw Error("empty model has no bounds");
    return bounds_;
  }

  bool operator==(const FiberModel& o) const { return fibers_ == o.fibers_; }

 private:
  std::vector<Fiber> fibers_;
  std::set<std::string> bundles_;
  Box bounds_;
};

inline const Box& model_bounds(const FiberModel& m) { return m.bounds(); }

/// Diffusion tensor eigenvalues, sorted descending.
struct EigenTriple {
  double l1 = 0, l2 = 0, l3 = 0;

  /// Sorts the three values; throws on negative or non-finite input.
  static EigenTriple sorted(double a, double b, double c) {
    for (double v : {a, b, c})
      if (!std::isfinite(v) || v < 0) throw Error("eigenvalues must be finite and nonnegative");
    std::array<double, 3> e{a, b, c};
    std::sort(e.begin(), e.end(), std::greater<>());
    return {e[0], e[1], e[2]};
  }

  double trace() const { return l1 + l2 + l3; }
};

namespace detail {
inline void require_nondegenerate(const EigenTriple& e) {
  if (!(e.l1 > 0 || e.l2 > 0 || e.l3 > 0)) throw Error("degenerate tensor");
}
}  // namespace detail

/// FA = sqrt(3/2) * |lambda - mean| / |lambda|, in the pairwise-difference
/// form sqrt(((l1-l2)^2 + (l2-l3)^2 + (l3-l1)^2) / (2 |lambda|^2)).
inline double fractional_anisotropy(const EigenTriple& e) {
  detail::require_nondegenerate(e);
  const double a = e.l1 - e.l2, b = e.l2 - e.l3, c = e.l3 - e.l1;
  const double den = e.l1 * e.l1 + e.l2 * e.l2 + e.l3 * e.l3;
  return std::clamp(std::sqrt(0.5 * (a * a + b * b + c * c) / den), 0.0, 1.0);
}

/// Westin linear coefficient (l1 - l2) / trace.
inline double linear_anisotropy(const EigenTriple& e) {
  detail::require_nondegenerate(e);
  return std::clamp((e.l1 - e.l2) / e.trace(), 0.0, 1.0);
}

/// Unweighted arithmetic mean of a per-vertex scalar over the fiber.
inline double fiber_mean(const Fiber& f, Metric m) {
  double sum = 0;
  for (const auto& v : f.vertices) sum += v.metric(m);
  return sum / static_cast<double>(f.vertices.size());
}

}  // namespace zifazah
