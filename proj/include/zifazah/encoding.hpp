#pragma once

#include <string_view>
#include <vector>

#include "zifazah/ast.hpp"
#include "zifazah/update_rules.hpp"

namespace zifazah {

inline constexpr double kDefaultRadius = 0.4;
inline constexpr int kTubeSides = 8;
inline constexpr double kRibbonWidth = 1.0;

enum class Shape { Line, Tube, Ribbon };

inline std::string_view to_string(Shape s) {
  return s == Shape::Line ? "line" : s == Shape::Tube ? "tube" : "ribbon";
}

enum class ColorSource { Palette, FA, LA };

struct SizeEncoding {
  bool by_metric = false;
  Metric metric = Metric::FA;
  double minimal = kDefaultSizeMinimal;
  double scale = kDefaultSizeScale;
  bool operator==(const SizeEncoding&) const = default;
};

enum class DepthCue { None, Size, Color, Value, Transparency };

struct DepthEncoding {
  DepthCue cue = DepthCue::None;
  double lower = kDefaultDepthLower;
  double upper = kDefaultDepthUpper;
  bool operator==(const DepthEncoding&) const = default;
};

/// Resolved encoding of a single fiber, one mode per attribute.
struct FiberEncoding {
  Shape shape = Shape::Tube;
  ColorSource color = ColorSource::Palette;
  SizeEncoding size;
  DepthEncoding depth;
  bool operator==(const FiberEncoding&) const = default;
};

struct EncodingDirective {
  Attribute attribute = Attribute::Shape;
  Mode mode = Mode::Tube;
  std::vector<double> params;
  std::vector<int> fiber_set;
};

/// Per-fiber encodings indexed by fiber id.
class EncodingState {
 public:
  EncodingState() = default;
  explicit EncodingState(std::size_t fiber_count) : fibers_(fiber_count) {}

  const FiberEncoding& at(int id) const { return fibers_.at(static_cast<std::size_t>(id)); }
  FiberEncoding& at(int id) { return fibers_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return fibers_.size(); }

  void reset(int id) { at(id) = FiberEncoding{}; }

  bool operator==(const EncodingState&) const = default;

 private:
  std::vector<FiberEncoding> fibers_;
};

/// Last writer wins per fiber per attribute; other attributes are untouched.
/// The directive must already satisfy the combination table.
inline EncodingState apply_encoding(EncodingState state, const EncodingDirective& d) {
  const bool has_params = d.params.size() == 2;
  for (int id : d.fiber_set) {
    FiberEncoding& e = state.at(id);
    switch (d.attribute) {
      case Attribute::Shape:
        e.shape = d.mode == Mode::Line ? Shape::Line : d.mode == Mode::Ribbon ? Shape::Ribbon : Shape::Tube;
        break;
      case Attribute::Color: e.color = d.mode == Mode::LA ? ColorSource::LA : ColorSource::FA; break;
      case Attribute::Size:
        e.size.by_metric = true;
        e.size.metric = d.mode == Mode::LA ? Metric::LA : Metric::FA;
        e.size.minimal = has_params ? d.params[0] : kDefaultSizeMinimal;
        e.size.scale = has_params ? d.params[1] : kDefaultSizeScale;
        break;
      case Attribute::Depth:
        e.depth.cue = d.mode == Mode::Size    ? DepthCue::Size
                      : d.mode == Mode::Color ? DepthCue::Color
                      : d.mode == Mode::Value ? DepthCue::Value
                                              : DepthCue::Transparency;
        e.depth.lower = has_params ? d.params[0] : kDefaultDepthLower;
        e.depth.upper = has_params ? d.params[1] : kDefaultDepthUpper;
        break;
      case Attribute::Default:
      case Attribute::Reset: break;
    }
  }
  return state;
}

}  // namespace zifazah
