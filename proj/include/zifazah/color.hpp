#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string_view>
#include <utility>

namespace zifazah {

struct Rgb {
  double r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

struct Rgba {
  double r = 0, g = 0, b = 0, a = 1;
  bool operator==(const Rgba&) const = default;
};

/// Linear blue (0) to red (1) ramp; input is clamped.
inline Rgb colormap_scalar(double v) {
  v = std::clamp(v, 0.0, 1.0);
  return {v, 0.0, 1.0 - v};
}

// Palette for the five major bundles.
inline constexpr std::array<std::pair<std::string_view, Rgb>, 5> kBundlePalette{{
    {"CC", {0.89, 0.10, 0.11}},
    {"CST", {0.22, 0.49, 0.72}},
    {"CG", {0.30, 0.69, 0.29}},
    {"ILF", {0.99, 0.55, 0.24}},
    {"IFO", {0.60, 0.31, 0.64}},
}};

// Other tags pick from this cycle by FNV-1a hash of the tag.
inline constexpr std::array<Rgb, 12> kFallbackPalette{{
    {0.65, 0.81, 0.89}, {0.12, 0.47, 0.71}, {0.70, 0.87, 0.54}, {0.20, 0.63, 0.17},
    {0.98, 0.60, 0.60}, {0.89, 0.10, 0.11}, {0.99, 0.75, 0.44}, {1.00, 0.50, 0.00},
    {0.79, 0.70, 0.84}, {0.42, 0.24, 0.60}, {1.00, 1.00, 0.60}, {0.69, 0.35, 0.16},
}};

constexpr std::uint32_t fnv1a(std::string_view s) {
  std::uint32_t h = 2166136261u;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 16777619u;
  }
  return h;
}

inline Rgb bundle_color(std::string_view tag) {
  for (const auto& [name, rgb] : kBundlePalette)
    if (name == tag) return rgb;
  return kFallbackPalette[fnv1a(tag) % kFallbackPalette.size()];
}

}  // namespace zifazah
