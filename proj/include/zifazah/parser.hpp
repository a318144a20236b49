#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zifazah/ast.hpp"
#include "zifazah/diagnostic.hpp"
#include "zifazah/lexer.hpp"
#include "zifazah/numfmt.hpp"
#include "zifazah/update_rules.hpp"

namespace zifazah {

struct ParseResult {
  Script script;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return !has_fatal(diagnostics); }
  /// Line of the first fatal diagnostic, if any.
  std::optional<int> first_fatal_line() const {
    std::optional<int> best;
    for (const auto& d : diagnostics)
      if (d.level == Level::Fatal && (!best || d.line < *best)) best = d.line;
    return best;
  }
};

namespace detail {

/// Cursor over the contents of a string literal (the embedded condition,
/// spatial and target grammars).
class LiteralScanner {
 public:
  LiteralScanner(std::string_view text, int line, int column) : s_(text), line_(line), column_(column) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eof() {
    skip_ws();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  std::string_view word() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ < s_.size() && is_ident_start(s_[pos_]))
      while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
    return s_.substr(start, pos_ - start);
  }
  bool consume(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }
  /// Unsigned decimal number.
  std::optional<double> unsigned_number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t j = pos_ + 1;
      if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
      if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
        pos_ = j;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    auto v = parse_double(s_.substr(start, pos_ - start));
    if (!v) pos_ = start;
    return v;
  }
  std::optional<double> signed_number() {
    const std::size_t save = pos_;
    double sign = 1;
    if (consume("-"))
      sign = -1;
    else
      consume("+");
    auto v = unsigned_number();
    if (!v) {
      pos_ = save;
      return std::nullopt;
    }
    return sign * *v;
  }
  std::string_view rest() {
    skip_ws();
    return s_.substr(pos_);
  }

  [[noreturn]] void fail(const std::string& message) const { throw Error(message, line_, column_); }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_, column_;
};

inline std::string_view leading_word(std::string_view text) {
  std::size_t i = 0;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  std::size_t j = i;
  while (j < text.size() && is_ident_char(text[j])) ++j;
  return text.substr(i, j - i);
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// `<metric> <op> <number|variable>` or `<metric> in [a,b]`.
inline ConditionExpr parse_condition(std::string_view text, int line = 0, int column = 0) {
  detail::LiteralScanner sc(text, line, column);
  ConditionExpr c;
  const auto metric = sc.word();
  if (metric.empty()) sc.fail("expected a metric (FA or LA) in condition");
  if (iequals(metric, "FA"))
    c.metric = Metric::FA;
  else if (iequals(metric, "LA"))
    c.metric = Metric::LA;
  else
    sc.fail("unknown metric '" + std::string(metric) + "'");

  if (iequals(detail::leading_word(sc.rest()), "in")) {
    sc.word();
    c.op = CompareOp::InRange;
    if (!sc.consume("[")) sc.fail("range operator requires '[lower,upper]'");
    auto lo = sc.signed_number();
    if (!lo || !sc.consume(",")) sc.fail("malformed range");
    auto hi = sc.signed_number();
    if (!hi || !sc.consume("]")) sc.fail("malformed range");
    if (*lo > *hi) sc.fail("empty range");
    c.rhs = Interval{*lo, *hi};
  } else {
    if (sc.consume("<="))
      c.op = CompareOp::LessEqual;
    else if (sc.consume(">="))
      c.op = CompareOp::GreaterEqual;
    else if (sc.consume("=="))
      c.op = CompareOp::Equal;
    else if (sc.consume("<"))
      c.op = CompareOp::Less;
    else if (sc.consume(">"))
      c.op = CompareOp::Greater;
    else if (sc.consume("="))
      c.op = CompareOp::Equal;
    else
      sc.fail("expected a comparison operator after " + std::string(metric));

    if (auto num = sc.signed_number()) {
      c.rhs = *num;
    } else {
      const auto name = sc.word();
      if (name.empty()) sc.fail("expected a number or variable in condition");
      if (lookup_keyword(name)) sc.fail("keyword '" + std::string(name) + "' cannot be used as a variable");
      c.rhs = std::string(name);
    }
  }
  if (!sc.eof()) sc.fail("unexpected '" + std::string(sc.rest()) + "' in condition");
  return c;
}

/// `<plane> (+|-)<offset>`; offsets are relative moves in mm.
inline SpatialOp parse_spatial(std::string_view text, int line = 0, int column = 0) {
  detail::LiteralScanner sc(text, line, column);
  SpatialOp op;
  const auto plane = sc.word();
  if (iequals(plane, "sagittal"))
    op.plane = Plane::Sagittal;
  else if (iequals(plane, "axial"))
    op.plane = Plane::Axial;
  else if (iequals(plane, "coronal"))
    op.plane = Plane::Coronal;
  else
    sc.fail("unknown plane '" + std::string(plane) + "'");
  double sign = 0;
  if (sc.consume("+"))
    sign = 1;
  else if (sc.consume("-"))
    sign = -1;
  else
    sc.fail("relative offset requires sign");
  auto v = sc.unsigned_number();
  if (!v) sc.fail("expected an offset in mm after the sign");
  op.delta = sign * *v;
  if (!sc.eof()) sc.fail("unexpected '" + std::string(sc.rest()) + "' after plane offset");
  return op;
}

/// Comma-separated scope list. "ALL" anywhere yields the whole model.
inline TargetSpec parse_target(std::string_view text, Polarity polarity = Polarity::In, int line = 0,
                               int column = 0) {
  TargetSpec t;
  t.all = false;
  t.polarity = polarity;
  t.source = std::string(text);
  if (detail::trim(text).empty()) throw Error("empty target", line, column);
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    const auto name = detail::trim(text.substr(pos, comma - pos));
    if (name.empty()) throw Error("empty name in target list", line, column);
    if (iequals(name, "ALL"))
      t.all = true;
    else if (std::find(t.names.begin(), t.names.end(), name) == t.names.end())
      t.names.emplace_back(name);
    pos = comma + 1;
  }
  if (t.all) t.names.clear();
  return t;
}

namespace detail {

class StatementParser {
 public:
  StatementParser(const std::vector<Token>& toks, std::vector<Diagnostic>& diags) : t_(toks), diags_(diags) {}

  Statement parse() {
    Statement st;
    st.line = t_.front().line;
    if (t_.size() >= 2 && t_[1].kind == TokenKind::Assign) {
      if (t_[0].kind != TokenKind::Identifier)
        fail(t_[0], "'" + t_[0].text + "' cannot be used as a variable name");
      st.assign_to = t_[0].text;
      p_ = 2;
    }
    if (at_end()) fail(t_.back(), "missing verb");
    const Token& verb = next();
    if (verb.kind != TokenKind::Keyword) fail(verb, "unknown verb '" + verb.text + "'");
    switch (*verb.keyword) {
      case Keyword::Load: st.body = load(); break;
      case Keyword::Select:
        if (st.assign_to) fail(verb, "verb does not produce a value: SELECT");
        st.body = select();
        break;
      case Keyword::Locate:
        if (!st.assign_to) fail(verb, "LOCATE requires a result variable");
        st.body = locate();
        break;
      case Keyword::Update:
        if (st.assign_to) fail(verb, "verb does not produce a value: UPDATE");
        st.body = update(verb);
        break;
      case Keyword::Calculate: st.body = calculate(verb); break;
      default: fail(verb, "unknown verb '" + verb.text + "'");
    }
    if (!at_end()) fail(t_[p_], "unexpected '" + t_[p_].text + "'");
    return st;
  }

 private:
  bool at_end() const { return p_ >= t_.size(); }
  const Token& next() { return t_[p_++]; }
  const Token* peek() const { return at_end() ? nullptr : &t_[p_]; }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw Error(message, at.line, at.column);
  }

  const Token& expect_string(const Token& after, const std::string& what) {
    if (at_end() || t_[p_].kind != TokenKind::String) fail(at_end() ? after : t_[p_], what + " requires a quoted string");
    return next();
  }

  std::optional<TargetSpec> target_clause() {
    const Token* tok = peek();
    if (!tok || !(tok->is(Keyword::In) || tok->is(Keyword::Out))) return std::nullopt;
    const Token& prep = next();
    const Polarity pol = prep.is(Keyword::In) ? Polarity::In : Polarity::Out;
    const Token& lit = expect_string(prep, prep.text);
    return parse_target(lit.text, pol, lit.line, lit.column);
  }

  LoadStmt load() {
    const Token& path = expect_string(t_[p_ - 1], "LOAD");
    if (path.text.empty()) fail(path, "LOAD requires a non-empty path");
    return {path.text};
  }

  SelectStmt select() {
    const Token& lit = expect_string(t_[p_ - 1], "SELECT");
    SelectStmt s;
    s.literal = lit.text;
    const auto head = leading_word(lit.text);
    const bool spatial = iequals(head, "sagittal") || iequals(head, "axial") || iequals(head, "coronal");
    const bool condition = iequals(head, "FA") || iequals(head, "LA");
    if (spatial)
      s.what = parse_spatial(lit.text, lit.line, lit.column);
    else if (condition)
      s.what = parse_condition(lit.text, lit.line, lit.column);
    else
      s.what = parse_target(lit.text, Polarity::In, lit.line, lit.column);
    const Token* prep = peek();
    if (auto t = target_clause()) {
      if (!condition) fail(*prep, spatial ? "a plane move takes no IN/OUT target" : "a scope selection takes no IN/OUT target");
      s.target = std::move(*t);
    }
    return s;
  }

  LocateStmt locate() {
    const Token& lit = expect_string(t_[p_ - 1], "LOCATE");
    LocateStmt l;
    l.literal = lit.text;
    l.condition = parse_condition(lit.text, lit.line, lit.column);
    if (auto t = target_clause()) l.target = std::move(*t);
    return l;
  }

  double signed_param() {
    double sign = 1;
    if (!at_end() && (t_[p_].is_op("-") || t_[p_].is_op("+"))) sign = next().text == "-" ? -1 : 1;
    if (at_end() || t_[p_].kind != TokenKind::Number) fail(at_end() ? t_.back() : t_[p_], "WITH expects numeric parameters");
    const Token& num = next();
    auto v = parse_double(num.text);
    if (!v) fail(num, "invalid number '" + num.text + "'");
    return sign * *v;
  }

  UpdateStmt update(const Token& verb) {
    UpdateStmt u;
    if (at_end()) fail(verb, "UPDATE requires an attribute (shape, color, size, depth, DEFAULT or RESET)");
    const Token& attr = next();
    switch (attr.kind == TokenKind::Keyword ? *attr.keyword : Keyword::Load) {
      case Keyword::Shape: u.attribute = Attribute::Shape; break;
      case Keyword::Color: u.attribute = Attribute::Color; break;
      case Keyword::Size: u.attribute = Attribute::Size; break;
      case Keyword::Depth: u.attribute = Attribute::Depth; break;
      case Keyword::Default: u.attribute = Attribute::Default; break;
      case Keyword::Reset: u.attribute = Attribute::Reset; break;
      default: fail(attr, "UPDATE requires an attribute, got '" + attr.text + "'");
    }
    bool seen_by = false, seen_with = false, seen_target = false;
    while (const Token* tok = peek()) {
      if (tok->is(Keyword::By)) {
        if (seen_by) fail(*tok, "duplicate BY clause");
        seen_by = true;
        next();
        if (at_end()) fail(*tok, "BY requires an encoding mode");
        const Token& m = next();
        u.mode = mode_of(m);
      } else if (tok->is(Keyword::With)) {
        if (seen_with) fail(*tok, "duplicate WITH clause");
        seen_with = true;
        next();
        u.params.push_back(signed_param());
        while (!at_end() && t_[p_].is_op(",")) {
          next();
          u.params.push_back(signed_param());
        }
      } else if (tok->is(Keyword::In) || tok->is(Keyword::Out)) {
        if (seen_target) fail(*tok, "duplicate target clause");
        seen_target = true;
        u.target = *target_clause();
      } else {
        break;
      }
    }
    if (auto err = check_update(u)) fail(attr, *err);
    return u;
  }

  Mode mode_of(const Token& m) const {
    if (m.kind == TokenKind::Keyword) {
      switch (*m.keyword) {
        case Keyword::Line: return Mode::Line;
        case Keyword::Tube: return Mode::Tube;
        case Keyword::Ribbon: return Mode::Ribbon;
        case Keyword::FA: return Mode::FA;
        case Keyword::LA: return Mode::LA;
        case Keyword::Size: return Mode::Size;
        case Keyword::Color: return Mode::Color;
        case Keyword::Value: return Mode::Value;
        case Keyword::Transparency: return Mode::Transparency;
        default: break;
      }
    }
    fail(m, "unknown encoding mode '" + m.text + "'");
  }

  CalculateStmt calculate(const Token& verb) {
    CalculateStmt c;
    if (at_end()) fail(verb, "CALCULATE requires a metric routine (AvgFA, AvgLA or NumFibers)");
    const Token& r = next();
    if (r.is(Keyword::AvgFA))
      c.routine = Routine::AvgFA;
    else if (r.is(Keyword::AvgLA))
      c.routine = Routine::AvgLA;
    else if (r.is(Keyword::NumFibers))
      c.routine = Routine::NumFibers;
    else if (r.is(Keyword::NumFiber)) {
      c.routine = Routine::NumFibers;
      diags_.push_back(notice("NumFiber is read as NumFibers", r.line, r.column));
    } else {
      fail(r, "unknown metric routine '" + r.text + "'");
    }
    if (auto t = target_clause()) c.target = std::move(*t);
    return c;
  }

  const std::vector<Token>& t_;
  std::vector<Diagnostic>& diags_;
  std::size_t p_ = 0;
};

inline bool starts_continuation(const Token& t) {
  return t.is(Keyword::In) || t.is(Keyword::Out) || t.is(Keyword::With) || t.is(Keyword::By);
}

}  // namespace detail

/// Parses a whole script. Each logical line yields one statement; a line that
/// begins with IN, OUT, WITH or BY continues the previous statement. Lines
/// with fatal diagnostics produce no statement.
inline ParseResult parse_script(std::string_view source) {
  ParseResult result;
  TokenStream lexed = tokenize(source);
  result.diagnostics = std::move(lexed.diagnostics);

  std::vector<int> bad_lines;
  for (const auto& d : result.diagnostics)
    if (d.level == Level::Fatal) bad_lines.push_back(d.line);
  auto line_is_bad = [&](int line) {
    return std::find(bad_lines.begin(), bad_lines.end(), line) != bad_lines.end();
  };

  struct Logical {
    std::vector<Token> tokens;
    bool bad = false;
  };
  std::vector<Logical> logical;
  std::vector<Token> current;
  auto flush = [&] {
    if (current.empty()) return;
    const int line = current.front().line;
    if (!logical.empty() && detail::starts_continuation(current.front())) {
      auto& prev = logical.back();
      prev.tokens.insert(prev.tokens.end(), current.begin(), current.end());
      prev.bad = prev.bad || line_is_bad(line);
    } else {
      logical.push_back({current, line_is_bad(line)});
    }
    current.clear();
  };
  for (auto& tok : lexed.tokens) {
    if (tok.kind == TokenKind::Newline)
      flush();
    else
      current.push_back(std::move(tok));
  }
  flush();

  for (const auto& stmt : logical) {
    if (stmt.bad) continue;
    try {
      result.script.statements.push_back(detail::StatementParser(stmt.tokens, result.diagnostics).parse());
    } catch (const Error& e) {
      result.diagnostics.push_back(e.diagnostic());
    }
  }
  std::stable_sort(result.diagnostics.begin(), result.diagnostics.end(),
                   [](const Diagnostic& a, const Diagnostic& b) { return a.line < b.line; });
  return result;
}

}  // namespace zifazah
