#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zifazah/diagnostic.hpp"

namespace zifazah {

enum class Keyword {
  // verbs
  Load, Select, Locate, Update, Calculate,
  // prepositions
  In, Out,
  // conjunctives
  By, With,
  // built-in routines
  AvgFA, AvgLA, NumFiber, NumFibers,
  // constants
  Shape, Color, Size, Depth, FA, LA, Sagittal, Axial, Coronal, Default, Reset,
  // encoding modes
  Line, Tube, Ribbon, Value, Transparency,
};

struct KeywordSpelling {
  Keyword keyword;
  std::string_view canonical;
};

// Canonical spellings; matching is case-insensitive.
inline constexpr std::array<KeywordSpelling, 29> kKeywords{{
    {Keyword::Load, "LOAD"},         {Keyword::Select, "SELECT"},
    {Keyword::Locate, "LOCATE"},     {Keyword::Update, "UPDATE"},
    {Keyword::Calculate, "CALCULATE"}, {Keyword::In, "IN"},
    {Keyword::Out, "OUT"},           {Keyword::By, "BY"},
    {Keyword::With, "WITH"},         {Keyword::AvgFA, "AvgFA"},
    {Keyword::AvgLA, "AvgLA"},       {Keyword::NumFiber, "NumFiber"},
    {Keyword::NumFibers, "NumFibers"}, {Keyword::Shape, "shape"},
    {Keyword::Color, "color"},       {Keyword::Size, "size"},
    {Keyword::Depth, "depth"},       {Keyword::FA, "FA"},
    {Keyword::LA, "LA"},             {Keyword::Sagittal, "sagittal"},
    {Keyword::Axial, "axial"},       {Keyword::Coronal, "coronal"},
    {Keyword::Default, "DEFAULT"},   {Keyword::Reset, "RESET"},
    {Keyword::Line, "line"},         {Keyword::Tube, "tube"},
    {Keyword::Ribbon, "ribbon"},     {Keyword::Value, "value"},
    {Keyword::Transparency, "transparency"},
}};

inline bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

inline std::optional<Keyword> lookup_keyword(std::string_view word) {
  for (const auto& k : kKeywords)
    if (iequals(word, k.canonical)) return k.keyword;
  return std::nullopt;
}

inline std::string_view canonical(Keyword k) {
  for (const auto& s : kKeywords)
    if (s.keyword == k) return s.canonical;
  return {};
}

enum class TokenKind { Keyword, Identifier, String, Number, Operator, Assign, Newline };

struct Token {
  TokenKind kind = TokenKind::Identifier;
  std::string text;  // string literals: contents without quotes
  int line = 1;
  int column = 1;
  std::optional<Keyword> keyword;

  bool is(Keyword k) const { return kind == TokenKind::Keyword && keyword == k; }
  bool is_op(std::string_view op) const { return kind == TokenKind::Operator && text == op; }
};

struct TokenStream {
  std::vector<Token> tokens;
  std::vector<Diagnostic> diagnostics;
};

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

/// Splits script text into tokens. A line with a lexical fatal contributes
/// no further tokens after the error; lexing resumes on the next line.
inline TokenStream tokenize(std::string_view src) {
  TokenStream out;
  int line = 1;
  std::size_t line_start = 0;
  std::size_t i = 0;
  auto col = [&](std::size_t pos) { return static_cast<int>(pos - line_start) + 1; };
  auto skip_line = [&] {
    while (i < src.size() && src[i] != '\n') ++i;
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      out.tokens.push_back({TokenKind::Newline, "\n", line, col(i), {}});
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      ++i;
      continue;
    }
    if (c == '#') {
      skip_line();
      continue;
    }
    const std::size_t start = i;
    if (c == '"') {
      const std::size_t close = src.find_first_of("\"\n", i + 1);
      if (close == std::string_view::npos || src[close] == '\n') {
        out.diagnostics.push_back(fatal("unterminated string", line, col(start)));
        skip_line();
        continue;
      }
      out.tokens.push_back({TokenKind::String, std::string(src.substr(i + 1, close - i - 1)), line, col(start), {}});
      i = close + 1;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      out.tokens.push_back({TokenKind::Number, std::string(src.substr(start, i - start)), line, col(start), {}});
      continue;
    }
    if (is_ident_start(c)) {
      while (i < src.size() && is_ident_char(src[i])) ++i;
      std::string word(src.substr(start, i - start));
      auto kw = lookup_keyword(word);
      out.tokens.push_back({kw ? TokenKind::Keyword : TokenKind::Identifier, std::move(word), line, col(start), kw});
      continue;
    }
    static constexpr std::array<std::string_view, 10> kOps{"<=", ">=", "==", "<", ">", "[", "]", "+", "-", ","};
    bool matched = false;
    for (auto op : kOps) {
      if (src.substr(i, op.size()) == op) {
        out.tokens.push_back({TokenKind::Operator, std::string(op), line, col(start), {}});
        i += op.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (c == '=') {
      out.tokens.push_back({TokenKind::Assign, "=", line, col(start), {}});
      ++i;
      continue;
    }
    out.diagnostics.push_back(fatal(std::string("unknown operator character '") + c + "'", line, col(start)));
    skip_line();
  }
  return out;
}

}  // namespace zifazah
