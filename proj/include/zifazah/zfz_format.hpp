#pragma once

// ZFZ text format, line oriented:
//
//   ZFZ 1
//   fibers <count>
//   fiber <bundle-tag> <nvertices>
//   x y z fa la            (or x y z l1 l2 l3, uniform per file)
//   ...
//
// Blank lines and lines whose first non-blank character is '#' are ignored.

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "zifazah/diagnostic.hpp"
#include "zifazah/fiber_model.hpp"
#include "zifazah/numfmt.hpp"

namespace zifazah {

struct ModelLoad {
  FiberModel model;
  std::vector<Diagnostic> diagnostics;  // warnings only; fatals are thrown
};

namespace detail {

struct ZfzLine {
  int number = 0;
  std::vector<std::string_view> fields;
};

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<ZfzLine> content_lines(std::string_view text) {
  std::vector<ZfzLine> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    ++number;
    auto fields = split_ws(text.substr(pos, nl - pos));
    if (!fields.empty() && fields.front().front() != '#') lines.push_back({number, std::move(fields)});
    pos = nl + 1;
  }
  return lines;
}

inline double clamp_unit(double v, std::string_view name, int line, std::vector<Diagnostic>& diags) {
  if (v < 0 || v > 1) {
    diags.push_back(warning(std::string(name) + " value " + shortest(v) + " outside [0,1], clamped", line));
    return std::clamp(v, 0.0, 1.0);
  }
  return v;
}

}  // namespace detail

/// Parses ZFZ text. Throws Error (with line number) on fatal problems;
/// out-of-range FA/LA values are clamped and reported as warnings.
inline ModelLoad parse_model(std::string_view text) {
  using detail::ZfzLine;
  const auto lines = detail::content_lines(text);
  std::vector<Diagnostic> diags;

  if (lines.empty() || lines[0].fields.size() != 2 || lines[0].fields[0] != "ZFZ" ||
      lines[0].fields[1] != "1")
    throw Error("unrecognized format", lines.empty() ? 1 : lines[0].number);
  if (lines.size() < 2 || lines[1].fields.size() != 2 || lines[1].fields[0] != "fibers")
    throw Error("unrecognized format: expected 'fibers <count>'", lines.size() < 2 ? 0 : lines[1].number);
  const auto count = parse_integer(lines[1].fields[1]);
  if (!count || *count < 0) throw Error("invalid fiber count", lines[1].number);
  if (*count == 0) throw Error("empty model", lines[1].number);

  std::vector<Fiber> fibers;
  fibers.reserve(static_cast<std::size_t>(*count));
  std::size_t arity = 0;
  std::size_t idx = 2;
  for (long long f = 0; f < *count; ++f) {
    if (idx >= lines.size())
      throw Error("expected " + std::to_string(*count) + " fibers, found " + std::to_string(f),
                  lines.back().number);
    const ZfzLine& head = lines[idx++];
    if (head.fields.size() != 3 || head.fields[0] != "fiber")
      throw Error("expected 'fiber <bundle> <nvertices>'", head.number);
    const auto nverts = parse_integer(head.fields[2]);
    if (!nverts) throw Error("invalid vertex count", head.number);
    if (*nverts < 2) throw Error("fiber has fewer than 2 vertices", head.number);

    Fiber fiber;
    fiber.id = static_cast<int>(f);
    fiber.bundle = std::string(head.fields[1]);
    fiber.vertices.reserve(static_cast<std::size_t>(*nverts));
    for (long long k = 0; k < *nverts; ++k) {
      if (idx >= lines.size()) throw Error("unexpected end of file inside fiber", head.number);
      const ZfzLine& vl = lines[idx++];
      if (arity == 0) {
        if (vl.fields.size() != 5 && vl.fields.size() != 6)
          throw Error("vertex line must have 5 or 6 values", vl.number);
        arity = vl.fields.size();
      }
      if (vl.fields.size() != arity)
        throw Error("vertex line arity differs from the rest of the file", vl.number);
      double vals[6] = {};
      for (std::size_t c = 0; c < arity; ++c) {
        auto v = parse_double(vl.fields[c]);
        if (!v) throw Error("invalid number '" + std::string(vl.fields[c]) + "'", vl.number);
        vals[c] = *v;
      }
      Vertex vert;
      vert.position = {vals[0], vals[1], vals[2]};
      if (arity == 5) {
        vert.fa = detail::clamp_unit(vals[3], "FA", vl.number, diags);
        vert.la = detail::clamp_unit(vals[4], "LA", vl.number, diags);
      } else {
        for (int c = 3; c < 6; ++c) {
          if (vals[c] < 0) {
            diags.push_back(warning("negative eigenvalue clamped to 0", vl.number));
            vals[c] = 0;
          }
        }
        try {
          const auto e = EigenTriple::sorted(vals[3], vals[4], vals[5]);
          vert.fa = fractional_anisotropy(e);
          vert.la = linear_anisotropy(e);
        } catch (const Error& err) {
          throw Error(err.what(), vl.number);
        }
      }
      if (!fiber.vertices.empty() && !(distance(vert.position, fiber.vertices.back().position) > 0))
        throw Error("coincident consecutive vertices", vl.number);
      fiber.vertices.push_back(vert);
    }
    try {
      validate_fiber(fiber);
    } catch (const Error& err) {
      throw Error(err.what(), head.number);
    }
    fibers.push_back(std::move(fiber));
  }
  if (idx < lines.size()) throw Error("trailing content after last fiber", lines[idx].number);
  return {FiberModel(std::move(fibers)), std::move(diags)};
}

inline ModelLoad load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read data file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

/// Writes the 5-column variant with shortest round-trip number formatting.
inline std::string serialize_model(const FiberModel& m) {
  std::string out = "ZFZ 1\nfibers " + std::to_string(m.size()) + "\n";
  for (const auto& f : m.fibers()) {
    out += "fiber " + f.bundle + " " + std::to_string(f.vertices.size()) + "\n";
    for (const auto& v : f.vertices) {
      out += shortest(v.position.x) + " " + shortest(v.position.y) + " " + shortest(v.position.z) + " " +
             shortest(v.fa) + " " + shortest(v.la) + "\n";
    }
  }
  return out;
}

}  // namespace zifazah
