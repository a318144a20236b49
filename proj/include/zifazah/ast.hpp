#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "zifazah/fiber_model.hpp"

namespace zifazah {

enum class Verb { Load, Select, Locate, Update, Calculate };
enum class Polarity { In, Out };

inline std::string_view to_string(Verb v) {
  switch (v) {
    case Verb::Load: return "LOAD";
    case Verb::Select: return "SELECT";
    case Verb::Locate: return "LOCATE";
    case Verb::Update: return "UPDATE";
    case Verb::Calculate: return "CALCULATE";
  }
  return "";
}

/// Data scope of a statement. `source` keeps the literal as written (empty
/// when the clause was omitted) and is ignored by equality.
struct TargetSpec {
  bool all = true;
  std::vector<std::string> names;
  Polarity polarity = Polarity::In;
  std::string source;

  static TargetSpec everything() { return {}; }
  static TargetSpec of(std::vector<std::string> names, Polarity p = Polarity::In) {
    TargetSpec t;
    t.all = false;
    t.names = std::move(names);
    t.polarity = p;
    return t;
  }
  bool is_default() const { return all && polarity == Polarity::In; }

  bool operator==(const TargetSpec& o) const {
    return all == o.all && polarity == o.polarity && (all || names == o.names);
  }
};

enum class CompareOp { Less, LessEqual, Greater, GreaterEqual, Equal, InRange };

struct Interval {
  double lo = 0, hi = 0;
  bool operator==(const Interval&) const = default;
};

struct ConditionExpr {
  Metric metric = Metric::FA;
  CompareOp op = CompareOp::Less;
  std::variant<double, Interval, std::string> rhs;  // number, range, or scalar variable

  bool operator==(const ConditionExpr&) const = default;
};

enum class Plane { Sagittal, Axial, Coronal };

inline constexpr std::array<Plane, 3> kPlanes{Plane::Sagittal, Plane::Coronal, Plane::Axial};

/// Sagittal is perpendicular to x, coronal to y, axial to z.
constexpr int plane_axis(Plane p) {
  return p == Plane::Sagittal ? 0 : p == Plane::Coronal ? 1 : 2;
}

inline std::string_view to_string(Plane p) {
  return p == Plane::Sagittal ? "sagittal" : p == Plane::Coronal ? "coronal" : "axial";
}

struct SpatialOp {
  Plane plane = Plane::Axial;
  double delta = 0;
  bool operator==(const SpatialOp&) const = default;
};

struct LoadStmt {
  std::string path;
  bool operator==(const LoadStmt&) const = default;
};

/// SELECT has three forms: a condition over a target, a relative plane move,
/// or a bare scope (`SELECT "CC"`). `literal` keeps the payload string.
struct SelectStmt {
  std::variant<ConditionExpr, SpatialOp, TargetSpec> what;
  TargetSpec target;
  std::string literal;

  bool operator==(const SelectStmt& o) const { return what == o.what && target == o.target; }
};

struct LocateStmt {
  ConditionExpr condition;
  TargetSpec target;
  std::string literal;

  bool operator==(const LocateStmt& o) const { return condition == o.condition && target == o.target; }
};

enum class Attribute { Shape, Color, Size, Depth, Default, Reset };
enum class Mode { None, Line, Tube, Ribbon, FA, LA, Size, Color, Value, Transparency };

inline std::string_view to_string(Attribute a) {
  switch (a) {
    case Attribute::Shape: return "shape";
    case Attribute::Color: return "color";
    case Attribute::Size: return "size";
    case Attribute::Depth: return "depth";
    case Attribute::Default: return "DEFAULT";
    case Attribute::Reset: return "RESET";
  }
  return "";
}

inline std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::None: return "";
    case Mode::Line: return "line";
    case Mode::Tube: return "tube";
    case Mode::Ribbon: return "ribbon";
    case Mode::FA: return "FA";
    case Mode::LA: return "LA";
    case Mode::Size: return "size";
    case Mode::Color: return "color";
    case Mode::Value: return "value";
    case Mode::Transparency: return "transparency";
  }
  return "";
}

struct UpdateStmt {
  Attribute attribute = Attribute::Reset;
  Mode mode = Mode::None;
  std::vector<double> params;
  TargetSpec target;

  bool operator==(const UpdateStmt&) const = default;
};

enum class Routine { AvgFA, AvgLA, NumFibers };

inline std::string_view to_string(Routine r) {
  return r == Routine::AvgFA ? "AvgFA" : r == Routine::AvgLA ? "AvgLA" : "NumFibers";
}

struct CalculateStmt {
  Routine routine = Routine::NumFibers;
  TargetSpec target;

  bool operator==(const CalculateStmt&) const = default;
};

using StatementBody = std::variant<LoadStmt, SelectStmt, LocateStmt, UpdateStmt, CalculateStmt>;

struct Statement {
  std::optional<std::string> assign_to;
  StatementBody body;
  int line = 0;

  Verb verb() const { return static_cast<Verb>(body.index()); }

  /// Structural equality; source positions are not compared.
  bool operator==(const Statement& o) const { return assign_to == o.assign_to && body == o.body; }
};

struct Script {
  std::vector<Statement> statements;
  bool operator==(const Script&) const = default;
};

}  // namespace zifazah
