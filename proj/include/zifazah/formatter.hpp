#pragma once

#include <string>

#include "zifazah/ast.hpp"
#include "zifazah/numfmt.hpp"

namespace zifazah {

inline std::string format_condition(const ConditionExpr& c) {
  std::string out{to_string(c.metric)};
  if (c.op == CompareOp::InRange) {
    const auto& r = std::get<Interval>(c.rhs);
    return out + " in [" + shortest(r.lo) + "," + shortest(r.hi) + "]";
  }
  switch (c.op) {
    case CompareOp::Less: out += " < "; break;
    case CompareOp::LessEqual: out += " <= "; break;
    case CompareOp::Greater: out += " > "; break;
    case CompareOp::GreaterEqual: out += " >= "; break;
    default: out += " == "; break;
  }
  if (const auto* num = std::get_if<double>(&c.rhs))
    out += shortest(*num);
  else if (const auto* name = std::get_if<std::string>(&c.rhs))
    out += *name;
  return out;
}

inline std::string format_spatial(const SpatialOp& s) {
  std::string out{to_string(s.plane)};
  out += s.delta < 0 || std::signbit(s.delta) ? " -" : " +";
  return out + shortest(std::abs(s.delta));
}

/// Scope list text; the literal as written when available.
inline std::string format_scope(const TargetSpec& t) {
  if (!t.source.empty()) return t.source;
  if (t.all) return "ALL";
  std::string out;
  for (const auto& n : t.names) out += (out.empty() ? "" : ",") + n;
  return out;
}

inline std::string format_target_clause(const TargetSpec& t) {
  if (t.source.empty() && t.is_default()) return "";
  return std::string(t.polarity == Polarity::In ? " IN \"" : " OUT \"") + format_scope(t) + "\"";
}

/// Canonical single-line rendering: keywords canonicalized, string payloads
/// kept as written.
inline std::string format_statement(const Statement& st) {
  std::string out;
  if (st.assign_to) out += *st.assign_to + " = ";
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, LoadStmt>) {
          out += "LOAD \"" + body.path + "\"";
        } else if constexpr (std::is_same_v<T, SelectStmt>) {
          std::string payload = body.literal;
          if (payload.empty()) {
            if (const auto* c = std::get_if<ConditionExpr>(&body.what)) payload = format_condition(*c);
            else if (const auto* s = std::get_if<SpatialOp>(&body.what)) payload = format_spatial(*s);
            else payload = format_scope(std::get<TargetSpec>(body.what));
          }
          out += "SELECT \"" + payload + "\"" + format_target_clause(body.target);
        } else if constexpr (std::is_same_v<T, LocateStmt>) {
          const std::string payload = body.literal.empty() ? format_condition(body.condition) : body.literal;
          out += "LOCATE \"" + payload + "\"" + format_target_clause(body.target);
        } else if constexpr (std::is_same_v<T, UpdateStmt>) {
          out += "UPDATE ";
          out += to_string(body.attribute);
          if (body.mode != Mode::None) {
            out += " BY ";
            out += to_string(body.mode);
          }
          if (!body.params.empty()) {
            out += " WITH ";
            for (std::size_t i = 0; i < body.params.size(); ++i) out += (i ? "," : "") + shortest(body.params[i]);
          }
          out += format_target_clause(body.target);
        } else {
          out += "CALCULATE ";
          out += to_string(body.routine);
          out += format_target_clause(body.target);
        }
      },
      st.body);
  return out;
}

inline std::string format_script(const Script& script) {
  std::string out;
  for (const auto& st : script.statements) out += format_statement(st) + "\n";
  return out;
}

}  // namespace zifazah
