#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zifazah/ast.hpp"
#include "zifazah/encoding.hpp"
#include "zifazah/formatter.hpp"
#include "zifazah/parser.hpp"
#include "zifazah/session.hpp"

namespace zifazah {

struct ExecutionOutcome {
  int statements_run = 0;
  std::optional<int> halted_at;
  std::vector<LogEntry> messages;  // entries appended by this run
  bool scene_dirty = false;
};

namespace detail {

inline FiberSet all_ids(const FiberModel& m) {
  FiberSet ids(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) ids[i] = static_cast<int>(i);
  return ids;
}

inline FiberSet set_union(const FiberSet& a, const FiberSet& b) {
  FiberSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline FiberSet set_intersection(const FiberSet& a, const FiberSet& b) {
  FiberSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline FiberSet complement(const FiberSet& a, std::size_t n) {
  FiberSet out;
  std::size_t j = 0;
  for (int id = 0; id < static_cast<int>(n); ++id) {
    if (j < a.size() && a[j] == id)
      ++j;
    else
      out.push_back(id);
  }
  return out;
}

/// One scope name: fiber-set variable first, then bundle tag.
inline FiberSet resolve_name(const std::string& name, const Session& s, int line) {
  const FiberModel& m = s.require_model(line);
  if (auto it = s.env.find(name); it != s.env.end()) {
    if (const auto* set = std::get_if<FiberSet>(&it->second)) return *set;
    if (!m.has_bundle(name)) throw Error("'" + name + "' is not a fiber set", line);
  }
  if (!m.has_bundle(name)) throw Error("unknown target '" + name + "'", line);
  FiberSet ids;
  for (const auto& f : m.fibers())
    if (f.bundle == name) ids.push_back(f.id);
  return ids;
}

inline std::string describe_scope(const TargetSpec& t) {
  std::string scope;
  for (const auto& n : t.names) scope += (scope.empty() ? "" : ", ") + n;
  if (t.all) scope = "the whole model";
  return (t.polarity == Polarity::In ? "in " : "outside ") + scope;
}

}  // namespace detail

/// Resolves a scope against the model (not the current selection). OUT
/// complements against all fibers.
inline FiberSet resolve_target(const TargetSpec& spec, const Session& s, int line = 0) {
  const FiberModel& m = s.require_model(line);
  FiberSet in;
  if (spec.all) {
    in = detail::all_ids(m);
  } else {
    for (const auto& name : spec.names) in = detail::set_union(in, detail::resolve_name(name, s, line));
  }
  return spec.polarity == Polarity::In ? in : detail::complement(in, m.size());
}

/// The scalar the condition compares against. Throws for unbound or
/// non-scalar variables.
inline double condition_bound(const ConditionExpr& c, const std::map<std::string, Value>& env, int line = 0) {
  if (const auto* num = std::get_if<double>(&c.rhs)) return *num;
  const auto& name = std::get<std::string>(c.rhs);
  auto it = env.find(name);
  if (it == env.end()) throw Error("unknown variable '" + name + "'", line);
  const auto* v = std::get_if<double>(&it->second);
  if (!v) throw Error("variable '" + name + "' is not a scalar", line);
  return *v;
}

inline bool condition_holds(const ConditionExpr& c, double mean, const std::map<std::string, Value>& env,
                            int line = 0) {
  if (c.op == CompareOp::InRange) {
    const auto& r = std::get<Interval>(c.rhs);
    return mean >= r.lo && mean <= r.hi;
  }
  const double rhs = condition_bound(c, env, line);
  switch (c.op) {
    case CompareOp::Less: return mean < rhs;
    case CompareOp::LessEqual: return mean <= rhs;
    case CompareOp::Greater: return mean > rhs;
    case CompareOp::GreaterEqual: return mean >= rhs;
    case CompareOp::Equal: return mean == rhs;
    case CompareOp::InRange: break;
  }
  return false;
}

/// Compares the fiber's mean metric against the condition; ranges are
/// inclusive at both ends.
inline bool eval_condition(const ConditionExpr& c, const Fiber& f, const std::map<std::string, Value>& env,
                           int line = 0) {
  return condition_holds(c, fiber_mean(f, c.metric), env, line);
}

inline FiberSet filter_fibers(const ConditionExpr& c, const FiberSet& scope, const Session& s, int line) {
  const FiberModel& m = s.require_model(line);
  if (c.op != CompareOp::InRange) condition_bound(c, s.env, line);
  FiberSet out;
  for (int id : scope)
    if (eval_condition(c, m.fiber(id), s.env, line)) out.push_back(id);
  return out;
}

// Per-verb execution. Each validates fully before mutating the session so a
// fatal leaves no trace beyond the log entry.

inline void exec_load(const LoadStmt& load, const std::optional<std::string>& assign_to, Session& s, int line) {
  std::vector<Diagnostic> warnings;
  std::shared_ptr<const FiberModel> model;
  try {
    model = s.loader(load.path, warnings);
  } catch (const Error& e) {
    std::string msg = "invalid data input '" + load.path + "': " + e.what();
    if (e.diagnostic().line > 0) msg += " (data line " + std::to_string(e.diagnostic().line) + ")";
    throw Error(msg, line);
  }
  if (!model || model->empty()) throw Error("invalid data input '" + load.path + "': empty model", line);
  s.install_model(std::move(model));
  for (const auto& w : warnings) {
    std::string msg = w.message;
    if (w.line > 0) msg += " (data line " + std::to_string(w.line) + ")";
    s.append(entry_kind(w.level), msg, line);
  }
  if (assign_to) s.env[*assign_to] = ModelHandle{load.path};
  std::string bundles;
  for (const auto& b : s.model->bundles()) bundles += (bundles.empty() ? "" : ", ") + b;
  s.append(EntryKind::Notice,
           "loaded " + std::to_string(s.model->size()) + " fibers (" + bundles + ") from '" + load.path + "'", line);
}

inline void exec_select(const SelectStmt& sel, Session& s, int line) {
  s.require_model(line);
  if (const auto* move = std::get_if<SpatialOp>(&sel.what)) {
    auto& plane = s.planes.of(move->plane);
    plane.position += move->delta;
    plane.enabled = true;
    return;
  }

  const TargetSpec& scope = std::holds_alternative<TargetSpec>(sel.what) ? std::get<TargetSpec>(sel.what) : sel.target;
  const FiberSet in_scope = resolve_target(scope, s, line);
  FiberSet chosen = in_scope;
  if (const auto* cond = std::get_if<ConditionExpr>(&sel.what)) chosen = filter_fibers(*cond, in_scope, s, line);

  // Per-name entries so that enumerating "A,B" equals selecting A then B.
  std::vector<std::pair<std::string, FiberSet>> entries;
  if (scope.all && scope.polarity == Polarity::In) {
    entries.emplace_back("ALL", chosen);
  } else if (scope.polarity == Polarity::Out) {
    entries.emplace_back("OUT " + (scope.all ? std::string("ALL") : format_scope(TargetSpec::of(scope.names))), chosen);
  } else {
    for (const auto& name : scope.names)
      entries.emplace_back(name, detail::set_intersection(chosen, detail::resolve_name(name, s, line)));
  }
  if (entries.size() == 1 && entries.front().first == "ALL")
    s.selection.focus.clear();
  else
    s.selection.focus.erase("ALL");
  for (auto& [key, ids] : entries) s.selection.focus[key] = std::move(ids);
}

inline void exec_locate(const LocateStmt& loc, const std::optional<std::string>& assign_to, Session& s, int line) {
  if (!assign_to) throw Error("LOCATE requires a result variable", line);
  FiberSet found = filter_fibers(loc.condition, resolve_target(loc.target, s, line), s, line);
  const std::size_t n = found.size();
  s.env[*assign_to] = std::move(found);
  if (n == 0)
    s.append(EntryKind::Warning, "empty result: " + *assign_to + " holds no fibers", line);
  else
    s.append(EntryKind::Notice, *assign_to + " holds " + std::to_string(n) + " fibers", line);
}

inline void exec_update(const UpdateStmt& up, Session& s, int line) {
  const FiberModel& m = s.require_model(line);
  if (auto err = check_update(up)) throw Error(*err, line);
  if (up.attribute == Attribute::Default) {
    s.selection = SelectionState::everything(m.size());
    s.planes = PlaneState::initial(m.bounds());
    return;
  }
  const FiberSet ids = resolve_target(up.target, s, line);
  if (up.attribute == Attribute::Reset) {
    for (int id : ids) s.encoding.reset(id);
    return;
  }
  s.encoding = apply_encoding(std::move(s.encoding), {up.attribute, up.mode, up.params, ids});
}

inline double exec_calculate(const CalculateStmt& calc, const std::optional<std::string>& assign_to, Session& s,
                             int line) {
  const FiberModel& m = s.require_model(line);
  const FiberSet ids = resolve_target(calc.target, s, line);
  double value = 0;
  std::string text;
  const std::string scope = detail::describe_scope(calc.target);
  if (calc.routine == Routine::NumFibers) {
    value = static_cast<double>(ids.size());
    text = "Number of fibers " + scope + ": " + std::to_string(ids.size());
    if (ids.empty()) s.append(EntryKind::Notice, "no fibers " + scope, line);
  } else {
    if (ids.empty()) throw Error("average over empty set", line);
    const Metric metric = calc.routine == Routine::AvgFA ? Metric::FA : Metric::LA;
    double sum = 0;
    for (int id : ids) sum += fiber_mean(m.fiber(id), metric);
    value = sum / static_cast<double>(ids.size());
    text = "Average " + std::string(to_string(metric)) + " of fibers " + scope + ": " + fixed6(value);
  }
  if (assign_to) {
    s.env[*assign_to] = value;
    text += " (stored in " + *assign_to + ")";
  }
  LogEntry& e = s.append(EntryKind::Result, text, line);
  e.name = assign_to ? *assign_to : std::string(to_string(calc.routine));
  e.value = value;
  return value;
}

/// Executes one statement. Returns whether the visual state changed.
inline bool execute_statement(const Statement& st, Session& s) {
  const VisualState before = visual_state(s);
  std::visit(
      [&](const auto& body) {
        using T = std::decay_t<decltype(body)>;
        if constexpr (std::is_same_v<T, LoadStmt>) exec_load(body, st.assign_to, s, st.line);
        else if constexpr (std::is_same_v<T, SelectStmt>) exec_select(body, s, st.line);
        else if constexpr (std::is_same_v<T, LocateStmt>) exec_locate(body, st.assign_to, s, st.line);
        else if constexpr (std::is_same_v<T, UpdateStmt>) exec_update(body, s, st.line);
        else exec_calculate(body, st.assign_to, s, st.line);
      },
      st.body);
  if (st.verb() == Verb::Locate || st.verb() == Verb::Calculate) return false;
  const bool dirty = !(visual_state(s) == before);
  if (dirty) ++s.generation;
  return dirty;
}

namespace detail {
inline ExecutionOutcome run_until(const Script& script, Session& s, std::optional<int> stop_line) {
  ExecutionOutcome out;
  const std::uint64_t seq0 = s.last_seq();
  for (const auto& st : script.statements) {
    if (stop_line && st.line >= *stop_line) {
      out.halted_at = stop_line;
      break;
    }
    try {
      out.scene_dirty = execute_statement(st, s) || out.scene_dirty;
      ++out.statements_run;
    } catch (const Error& e) {
      Diagnostic d = e.diagnostic();
      if (d.line == 0) d.line = st.line;
      s.append(d);
      out.halted_at = st.line;
      break;
    }
  }
  if (!out.halted_at && stop_line) out.halted_at = stop_line;
  for (const auto& e : s.log)
    if (e.seq > seq0) out.messages.push_back(e);
  return out;
}
}  // namespace detail

/// Runs statements in order and stops at the first fatal.
inline ExecutionOutcome execute_script(const Script& script, Session& s) {
  return detail::run_until(script, s, std::nullopt);
}

/// Parses and runs source text. Parse diagnostics are logged; statements
/// before the first parse fatal run, then execution halts at that line.
inline ExecutionOutcome run_source(std::string_view source, Session& s) {
  const std::uint64_t seq0 = s.last_seq();
  ParseResult parsed = parse_script(source);
  const auto stop = parsed.first_fatal_line();
  // Fatals past the halt point are suppressed from the log; notices and
  // warnings before it are kept.
  for (const auto& d : parsed.diagnostics) {
    if (stop && d.line > *stop) continue;
    if (d.level != Level::Fatal) s.append(d);
  }
  std::optional<Diagnostic> fatal_diag;
  for (const auto& d : parsed.diagnostics)
    if (d.level == Level::Fatal && stop && d.line == *stop) {
      fatal_diag = d;
      break;
    }
  ExecutionOutcome out = detail::run_until(parsed.script, s, stop);
  if (fatal_diag && out.halted_at == stop) s.append(*fatal_diag);
  out.messages.clear();
  for (const auto& e : s.log)
    if (e.seq > seq0) out.messages.push_back(e);
  return out;
}

/// Fresh-script semantics: variables cleared and view state reset on the
/// current model before running. Generation stays put when the final scene
/// equals the scene before the run.
inline ExecutionOutcome run_full(std::string_view source, Session& s) {
  const VisualState before = visual_state(s);
  const std::uint64_t gen0 = s.generation;
  s.env.clear();
  s.reset_view_state();
  ExecutionOutcome out = run_source(source, s);
  const bool changed = !(visual_state(s) == before);
  if (!changed)
    s.generation = gen0;
  else if (s.generation == gen0)
    ++s.generation;
  out.scene_dirty = changed;
  return out;
}

}  // namespace zifazah
