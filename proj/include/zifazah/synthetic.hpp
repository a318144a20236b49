#pragma once

// Deterministic synthetic brain used for desk-scale testing.
//
// Five bundles are generated, each with `fibers_per_bundle` fibers of
// kSyntheticVertices vertices, in the order CC, CST, CG, ILF, IFO. Fiber j of a
// bundle gets the rank u = (j + 0.5) / n. Vertex k gets the curve parameter
// s = k / (V - 1), which is the arc-length fraction of the un-jittered curve.
//
// Scalar profile (identical for FA and LA apart from the coefficients):
//
//   value(j, k) = base + spread * u + ramp * (s - 0.5)
//
// The ramp term sums to zero over a fiber, so the per-fiber mean is exactly
// base + spread * u (up to rounding), which makes threshold counts closed form.
// Jitter only moves positions, never scalars.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string_view>

#include "zifazah/fiber_model.hpp"

namespace zifazah {

struct BundleProfile {
  std::string_view tag;
  double fa_base, fa_spread;
  double la_base, la_spread;
};

inline constexpr int kSyntheticVertices = 24;
inline constexpr double kSyntheticRamp = 0.1;

inline constexpr std::array<BundleProfile, 5> kSyntheticBundles{{
    {"CC", 0.30, 0.40, 0.20, 0.35},
    {"CST", 0.35, 0.40, 0.15, 0.30},
    {"CG", 0.40, 0.35, 0.25, 0.30},
    {"ILF", 0.45, 0.35, 0.30, 0.30},
    {"IFO", 0.20, 0.45, 0.10, 0.40},
}};

inline double synthetic_rank(int j, int fibers_per_bundle) {
  return (j + 0.5) / static_cast<double>(fibers_per_bundle);
}

/// Closed-form per-fiber mean of the scalar profile.
inline double synthetic_fiber_mean(const BundleProfile& b, int j, int fibers_per_bundle, Metric m) {
  const double u = synthetic_rank(j, fibers_per_bundle);
  return m == Metric::FA ? b.fa_base + b.fa_spread * u : b.la_base + b.la_spread * u;
}

namespace detail {

// mt19937_64 output is fixed by the standard; the distributions are not, so
// uniforms are derived from raw bits.
class JitterSource {
 public:
  explicit JitterSource(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }
  Vec3 box(double half) { return {uniform(-half, half), uniform(-half, half), uniform(-half, half)}; }

 private:
  std::mt19937_64 engine_;
};

// Un-jittered centerlines, s in [0,1]. Coordinates in mm inside a
// 240 x 240 x 160 volume; x is left-right, y posterior-anterior, z inferior-superior.
inline Vec3 bundle_curve(std::size_t bundle, double s, double u, int side) {
  constexpr double pi = std::numbers::pi;
  const double cx = 120.0;
  switch (bundle) {
    case 0: {  // CC: arc in the coronal plane crossing the midline
      const double theta = (25.0 + 130.0 * s) * pi / 180.0;
      return {cx + 55.0 * std::cos(theta), 80.0 + 80.0 * u, 70.0 + 40.0 * std::sin(theta)};
    }
    case 1:  // CST: near-vertical column on either hemisphere
      return {cx + side * (30.0 - 10.0 * s), 115.0 + 5.0 * std::sin(pi * s), 65.0 + 90.0 * s};
    case 2:  // CG: horizontal arc running anterior-posterior above the CC
      return {cx + side * 22.0, 50.0 + 130.0 * s, 100.0 + 15.0 * std::sin(pi * s)};
    case 3:  // ILF: lateral longitudinal curve, low
      return {cx + side * 55.0, 40.0 + 110.0 * s, 40.0 + 8.0 * std::sin(pi * s)};
    default:  // IFO: long longitudinal curve dipping in the middle
      return {cx + side * (45.0 + 5.0 * std::sin(pi * s)), 30.0 + 175.0 * s, 50.0 - 12.0 * std::sin(pi * s)};
  }
}

}  // namespace detail

/// Pure function of (seed, fibers_per_bundle).
inline FiberModel generate_synthetic_brain(std::uint64_t seed, int fibers_per_bundle) {
  if (fibers_per_bundle < 1) throw Error("fibers_per_bundle must be at least 1");
  detail::JitterSource rng(seed);
  std::vector<Fiber> fibers;
  fibers.reserve(kSyntheticBundles.size() * static_cast<std::size_t>(fibers_per_bundle));
  for (std::size_t b = 0; b < kSyntheticBundles.size(); ++b) {
    const auto& profile = kSyntheticBundles[b];
    for (int j = 0; j < fibers_per_bundle; ++j) {
      const double u = synthetic_rank(j, fibers_per_bundle);
      const int side = (j % 2 == 0) ? -1 : 1;
      const Vec3 offset = rng.box(4.0);
      Fiber f;
      f.bundle = std::string(profile.tag);
      f.vertices.reserve(kSyntheticVertices);
      for (int k = 0; k < kSyntheticVertices; ++k) {
        const double s = k / static_cast<double>(kSyntheticVertices - 1);
        Vertex v;
        v.position = detail::bundle_curve(b, s, u, side) + offset + rng.box(0.25);
        const double ramp = kSyntheticRamp * (s - 0.5);
        v.fa = profile.fa_base + profile.fa_spread * u + ramp;
        v.la = profile.la_base + profile.la_spread * u + ramp;
        f.vertices.push_back(v);
      }
      fibers.push_back(std::move(f));
    }
  }
  return FiberModel(std::move(fibers));
}

}  // namespace zifazah
