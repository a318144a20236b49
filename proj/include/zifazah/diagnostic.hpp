#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zifazah {

enum class Level { Fatal, Warning, Notice };

inline std::string_view to_string(Level level) {
  switch (level) {
    case Level::Fatal: return "fatal";
    case Level::Warning: return "warning";
    case Level::Notice: return "notice";
  }
  return "fatal";
}

/// A leveled message tied to a source position. Line and column are 1-based;
/// 0 means "no position".
struct Diagnostic {
  Level level = Level::Fatal;
  std::string message;
  int line = 0;
  int column = 0;

  bool operator==(const Diagnostic&) const = default;
};

inline Diagnostic fatal(std::string message, int line = 0, int column = 0) {
  return {Level::Fatal, std::move(message), line, column};
}
inline Diagnostic warning(std::string message, int line = 0, int column = 0) {
  return {Level::Warning, std::move(message), line, column};
}
inline Diagnostic notice(std::string message, int line = 0, int column = 0) {
  return {Level::Notice, std::move(message), line, column};
}

inline bool has_fatal(const std::vector<Diagnostic>& diags) {
  for (const auto& d : diags)
    if (d.level == Level::Fatal) return true;
  return false;
}

inline std::string describe(const Diagnostic& d) {
  std::string out{to_string(d.level)};
  if (d.line > 0) {
    out += " line " + std::to_string(d.line);
    if (d.column > 0) out += ":" + std::to_string(d.column);
  }
  out += ": ";
  out += d.message;
  return out;
}

/// Thrown for fatal conditions. Carries the diagnostic that produced it.
class Error : public std::runtime_error {
 public:
  explicit Error(Diagnostic diag)
      : std::runtime_error(diag.message), diag_(std::move(diag)) {}
  explicit Error(std::string message, int line = 0, int column = 0)
      : Error(fatal(std::move(message), line, column)) {}

  const Diagnostic& diagnostic() const noexcept { return diag_; }

 private:
  Diagnostic diag_;
};

}  // namespace zifazah
