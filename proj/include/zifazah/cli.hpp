#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zifazah/interpreter.hpp"
#include "zifazah/render.hpp"
#include "zifazah/service.hpp"
#include "zifazah/synthetic.hpp"

namespace zifazah {

struct SyntheticSpec {
  std::uint64_t seed = 1;
  int fibers_per_bundle = 10;
};

inline std::optional<SyntheticSpec> parse_synthetic_spec(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  const auto seed = parse_integer(text.substr(0, comma));
  const auto n = parse_integer(text.substr(comma + 1));
  if (!seed || !n || *seed < 0 || *n < 1 || *n > 100000) return std::nullopt;
  return SyntheticSpec{static_cast<std::uint64_t>(*seed), static_cast<int>(*n)};
}

struct RunOptions {
  std::string script_path;
  std::optional<std::string> data_path;
  std::optional<SyntheticSpec> synthetic;
  ViewSpec view;
  std::optional<std::string> export_path;
  bool meshes = false;
};

inline std::string format_entry(const LogEntry& e) {
  std::string out = "[" + std::string(to_string(e.kind)) + "]";
  if (e.line > 0) out += " line " + std::to_string(e.line);
  if (e.column > 0) out += ":" + std::to_string(e.column);
  return out + (e.line > 0 ? ": " : " ") + e.message;
}

inline std::optional<std::string> read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out.flush());
}

inline bool script_loads(std::string_view source) {
  for (const auto& st : parse_script(source).script.statements)
    if (st.verb() == Verb::Load) return true;
  return false;
}

/// Session for a batch run. With --data or --synthetic every LOAD resolves to
/// that model; otherwise LOAD reads the filesystem.
inline Session make_cli_session(std::shared_ptr<const FiberModel> override_model, std::string override_name) {
  if (!override_model) return Session{};
  return Session([model = std::move(override_model), name = std::move(override_name)](
                     const std::string& path, std::vector<Diagnostic>& notes) {
    notes.push_back(notice("'" + path + "' resolved to " + name));
    return model;
  });
}

/// Executes a script file, prints the log, optionally exports the snapshot.
/// Returns 0 iff no fatal diagnostic was produced.
inline int cli_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  const auto source = read_text_file(opt.script_path);
  if (!source) {
    err << "error: cannot read script '" << opt.script_path << "'\n";
    return 1;
  }
  std::shared_ptr<const FiberModel> override_model;
  std::string override_name;
  try {
    if (opt.data_path) {
      auto loaded = load_model_file(*opt.data_path);
      for (const auto& d : loaded.diagnostics) err << describe(d) << " in '" << *opt.data_path << "'\n";
      override_model = std::make_shared<const FiberModel>(std::move(loaded.model));
      override_name = "'" + *opt.data_path + "'";
    } else if (opt.synthetic) {
      override_model = std::make_shared<const FiberModel>(
          generate_synthetic_brain(opt.synthetic->seed, opt.synthetic->fibers_per_bundle));
      override_name = "synthetic brain (seed " + std::to_string(opt.synthetic->seed) + ", " +
                      std::to_string(opt.synthetic->fibers_per_bundle) + " per bundle)";
    }
  } catch (const Error& e) {
    err << "error: " << describe(e.diagnostic()) << "\n";
    return 1;
  }

  Session session = make_cli_session(override_model, override_name);
  if (override_model && !script_loads(*source)) session.install_model(override_model);
  const ExecutionOutcome outcome = run_full(*source, session);
  for (const auto& e : outcome.messages) out << format_entry(e) << "\n";

  int code = outcome.halted_at ? 1 : 0;
  if (opt.export_path) {
    if (!session.has_model()) {
      err << "error: no model loaded, nothing exported\n";
      return 1;
    }
    if (!write_text_file(*opt.export_path, serialize_snapshot(emit_snapshot(session, opt.view, opt.meshes)))) {
      err << "error: cannot write '" << *opt.export_path << "'\n";
      return 1;
    }
  }
  return code;
}

/// Parses each script and prints its diagnostics. Returns 1 if any script is
/// unreadable or has a fatal diagnostic.
inline int cli_check(const std::vector<std::string>& paths, std::ostream& out) {
  int code = 0;
  for (const auto& path : paths) {
    const auto source = read_text_file(path);
    if (!source) {
      out << path << ": cannot read\n";
      code = 1;
      continue;
    }
    const ParseResult r = parse_script(*source);
    for (const auto& d : r.diagnostics) out << path << ": " << describe(d) << "\n";
    if (!r.ok()) code = 1;
    out << path << ": " << r.script.statements.size() << " statements, " << r.diagnostics.size() << " diagnostics\n";
  }
  return code;
}

inline int cli_generate(std::uint64_t seed, int fibers_per_bundle, const std::string& path, std::ostream& err) {
  if (fibers_per_bundle < 1) {
    err << "error: fibers per bundle must be at least 1\n";
    return 1;
  }
  if (!write_text_file(path, serialize_model(generate_synthetic_brain(seed, fibers_per_bundle)))) {
    err << "error: cannot write '" << path << "'\n";
    return 1;
  }
  return 0;
}

}  // namespace zifazah
