#pragma once

// Legal (attribute, mode, parameter count) combinations for UPDATE:
//
//   shape    BY line | tube | ribbon                       no parameters
//   color    BY FA | LA                                     no parameters
//   size     BY FA | LA                  [WITH minimal,scale]
//   depth    BY size | color | value | transparency  [WITH lower,upper]
//   DEFAULT                                                 nothing else
//   RESET                                                   nothing else

#include <algorithm>
#include <array>
#include <optional>
#include <string>

#include "zifazah/ast.hpp"

namespace zifazah {

inline constexpr double kDefaultSizeMinimal = 0.1;
inline constexpr double kDefaultSizeScale = 1.0;
inline constexpr double kDefaultDepthLower = 0.2;
inline constexpr double kDefaultDepthUpper = 1.0;

inline constexpr std::array<Attribute, 6> kAttributes{Attribute::Shape, Attribute::Color, Attribute::Size,
                                                      Attribute::Depth, Attribute::Default, Attribute::Reset};
inline constexpr std::array<Mode, 10> kModes{Mode::None, Mode::Line, Mode::Tube,  Mode::Ribbon, Mode::FA,
                                             Mode::LA,   Mode::Size, Mode::Color, Mode::Value,  Mode::Transparency};

inline bool is_legal_mode(Attribute a, Mode m) {
  switch (a) {
    case Attribute::Shape: return m == Mode::Line || m == Mode::Tube || m == Mode::Ribbon;
    case Attribute::Color:
    case Attribute::Size: return m == Mode::FA || m == Mode::LA;
    case Attribute::Depth:
      return m == Mode::Size || m == Mode::Color || m == Mode::Value || m == Mode::Transparency;
    case Attribute::Default:
    case Attribute::Reset: return m == Mode::None;
  }
  return false;
}

inline bool is_legal_arity(Attribute a, std::size_t n) {
  if (a == Attribute::Size || a == Attribute::Depth) return n == 0 || n == 2;
  return n == 0;
}

inline bool is_legal_combination(Attribute a, Mode m, std::size_t arity) {
  return is_legal_mode(a, m) && is_legal_arity(a, arity);
}

/// Returns an error message when the statement violates the combination
/// table or its parameter constraints.
inline std::optional<std::string> check_update(const UpdateStmt& u) {
  if (!is_legal_mode(u.attribute, u.mode)) {
    std::string msg = "invalid encoding combination: ";
    msg += to_string(u.attribute);
    msg += u.mode == Mode::None ? std::string(" without BY") : " BY " + std::string(to_string(u.mode));
    return msg;
  }
  if (!is_legal_arity(u.attribute, u.params.size())) {
    return "invalid encoding combination: " + std::string(to_string(u.attribute)) + " takes " +
           (u.attribute == Attribute::Size || u.attribute == Attribute::Depth ? "0 or 2" : "no") +
           " parameters, got " + std::to_string(u.params.size());
  }
  if (u.params.size() == 2) {
    const double a = u.params[0], b = u.params[1];
    if (u.attribute == Attribute::Size) {
      if (!(a > 0) || !(a + b > 0)) return "size parameters require minimal > 0 and minimal + scale > 0";
    } else {
      if (!(a >= 0 && a <= b)) return "depth bounds require 0 <= lower <= upper";
      if (u.mode == Mode::Size && !(a > 0)) return "depth by size requires lower > 0";
      if (u.mode != Mode::Size && b > 1) return "depth bounds for this cue must not exceed 1";
    }
  }
  return std::nullopt;
}

}  // namespace zifazah
