#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "zifazah/zifazah.hpp"

namespace zifazah::testing {

// Hand-rolled generator built on raw engine bits so sequences are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin() { return (engine_() & 1u) != 0; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))];
  }
  Vec3 point(double half) { return {uniform(-half, half), uniform(-half, half), uniform(-half, half)}; }

 private:
  std::mt19937_64 engine_;
};

inline Fiber make_fiber(std::string bundle, const std::vector<Vec3>& points, const std::vector<double>& fa = {},
                        const std::vector<double>& la = {}) {
  Fiber f;
  f.bundle = std::move(bundle);
  for (std::size_t k = 0; k < points.size(); ++k) {
    Vertex v;
    v.position = points[k];
    v.fa = fa.empty() ? 0.5 : fa[k];
    v.la = la.empty() ? 0.25 : la[k];
    f.vertices.push_back(v);
  }
  return f;
}

// Random polyline fibers with random scalars in a few bundles.
inline FiberModel random_model(Rng& rng, int fibers, const std::vector<std::string>& bundles = {"A", "B", "C"}) {
  std::vector<Fiber> out;
  for (int i = 0; i < fibers; ++i) {
    const int n = rng.integer(2, 8);
    std::vector<Vec3> pts;
    std::vector<double> fa, la;
    Vec3 p = rng.point(50);
    for (int k = 0; k < n; ++k) {
      pts.push_back(p);
      p += Vec3{rng.uniform(0.5, 3), rng.uniform(-2, 2), rng.uniform(-2, 2)};
      fa.push_back(rng.unit());
      la.push_back(rng.unit());
    }
    out.push_back(make_fiber(rng.pick(bundles), pts, fa, la));
  }
  return FiberModel(std::move(out));
}

inline std::shared_ptr<const FiberModel> synthetic(std::uint64_t seed = 1, int n = 10) {
  return std::make_shared<const FiberModel>(generate_synthetic_brain(seed, n));
}

inline Session session_with(std::shared_ptr<const FiberModel> model) {
  Session s([model](const std::string&, std::vector<Diagnostic>&) { return model; });
  s.install_model(model);
  return s;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names{
      "tour",           "load_handle",   "filter_two_bundles", "filter_and_encode", "select_and_locate",
      "mixed_encoding", "reset_and_size", "cutting_planes",    "enumeration",       "variable_target",
      "count_cst",      "frontal_metrics", "compose",          "examine_roi",       "calculate_metrics"};
  return names;
}

inline std::string script_path(const std::string& name) { return std::string(ZIFAZAH_SCRIPTS_DIR) + "/" + name + ".zfz"; }
inline std::string corpus_script(const std::string& name) { return read_file(script_path(name)); }

// Independent oracle: per-fiber mean recomputed with a plain loop.
inline double mean_of(const Fiber& f, Metric m) {
  double sum = 0;
  for (const auto& v : f.vertices) sum += m == Metric::FA ? v.fa : v.la;
  return sum / static_cast<double>(f.vertices.size());
}

inline std::string snapshot_text(const Session& s, const ViewSpec& view = {}) {
  return serialize_snapshot(emit_snapshot(s, view));
}

}  // namespace zifazah::testing

namespace zifazah::testing {

// Randomly re-cases every keyword outside string literals. Identifiers keep
// their spelling since variable names are case-sensitive.
inline std::string fuzz_keyword_case(const std::string& src, Rng& rng) {
  std::string out;
  bool in_string = false;
  std::size_t i = 0;
  while (i < src.size()) {
    const char c = src[i];
    if (c == '"') in_string = !in_string;
    if (c == '\n') in_string = false;
    if (!in_string && (std::isalpha(static_cast<unsigned char>(c)) || c == '_')) {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      std::string word = src.substr(i, j - i);
      if (lookup_keyword(word))
        for (auto& ch : word)
          ch = rng.coin() ? static_cast<char>(std::toupper(static_cast<unsigned char>(ch)))
                          : static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
      out += word;
      i = j;
      continue;
    }
    out += c;
    ++i;
  }
  return out;
}

}  // namespace zifazah::testing
