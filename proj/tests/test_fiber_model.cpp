#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace zifazah;
using zifazah::testing::Rng;

namespace {

constexpr const char* kOneFiber =
    "ZFZ 1\n"
    "fibers 1\n"
    "fiber CC 2\n"
    "0 0 0 0.2 0.1\n"
    "1 2 3 0.4 0.3\n";

// Independent line splitter used as the parse oracle.
std::vector<std::vector<std::string>> split_lines(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> row;
    for (std::string w; ls >> w;) row.push_back(w);
    if (!row.empty()) rows.push_back(row);
  }
  return rows;
}

Diagnostic parse_error(const std::string& text) {
  try {
    parse_model(text);
  } catch (const Error& e) {
    return e.diagnostic();
  }
  ADD_FAILURE() << "expected a parse error";
  return {};
}

}  // namespace

TEST(ParseModel, HandBuiltFile) {
  const ModelLoad r = parse_model(kOneFiber);
  const auto rows = split_lines(kOneFiber);
  ASSERT_EQ(r.model.size(), 1u);
  EXPECT_EQ(r.model.bundles(), std::set<std::string>{"CC"});
  EXPECT_TRUE(r.diagnostics.empty());
  const Fiber& f = r.model.fiber(0);
  EXPECT_EQ(f.bundle, rows[2][1]);
  ASSERT_EQ(f.vertices.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    for (int a = 0; a < 3; ++a) EXPECT_DOUBLE_EQ(f.vertices[k].position[a], std::stod(rows[3 + k][a]));
    EXPECT_DOUBLE_EQ(f.vertices[k].fa, std::stod(rows[3 + k][3]));
    EXPECT_DOUBLE_EQ(f.vertices[k].la, std::stod(rows[3 + k][4]));
  }
}

TEST(ParseModel, CommentsAndBlankLinesIgnored) {
  const std::string text = "# header comment\nZFZ 1\n\nfibers 1\n# fiber follows\nfiber CST 2\n0 0 0 0.5 0.5\n1 0 0 0.5 0.5\n";
  EXPECT_EQ(parse_model(text).model.size(), 1u);
}

TEST(ParseModel, Errors) {
  EXPECT_NE(parse_error("ZFY 1\nfibers 1\n").message.find("unrecognized format"), std::string::npos);
  EXPECT_NE(parse_error("").message.find("unrecognized format"), std::string::npos);
  EXPECT_EQ(parse_error("ZFZ 1\nfibers 0\n").message, "empty model");
  const Diagnostic short_fiber = parse_error("ZFZ 1\nfibers 1\nfiber CC 1\n0 0 0 0.5 0.5\n");
  EXPECT_EQ(short_fiber.line, 3);
  EXPECT_EQ(short_fiber.level, Level::Fatal);
  EXPECT_GT(parse_error("ZFZ 1\nfibers 1\nfiber CC 2\n0 0 0 0.5 0.5\n1 0 0 1 1 1\n").line, 0);
  EXPECT_GT(parse_error("ZFZ 1\nfibers 1\nfiber CC 2\n0 0 0 0.5 0.5\n0 0 0 0.5 0.5\n").line, 0);
  EXPECT_GT(parse_error("ZFZ 1\nfibers 2\nfiber CC 2\n0 0 0 0.5 0.5\n1 0 0 0.5 0.5\n").line, 0);
  EXPECT_GT(parse_error(std::string(kOneFiber) + "extra\n").line, 0);
  EXPECT_GT(parse_error("ZFZ 1\nfibers 1\nfiber CC 2\n0 0 x 0.5 0.5\n1 0 0 0.5 0.5\n").line, 0);
}

TEST(ParseModel, OutOfRangeScalarsClampWithWarning) {
  const ModelLoad r = parse_model("ZFZ 1\nfibers 1\nfiber CC 2\n0 0 0 1.5 -0.2\n1 0 0 0.5 0.5\n");
  EXPECT_DOUBLE_EQ(r.model.fiber(0).vertices[0].fa, 1.0);
  EXPECT_DOUBLE_EQ(r.model.fiber(0).vertices[0].la, 0.0);
  ASSERT_EQ(r.diagnostics.size(), 2u);
  for (const auto& d : r.diagnostics) {
    EXPECT_EQ(d.level, Level::Warning);
    EXPECT_EQ(d.line, 4);
  }
}

TEST(ParseModel, EigenvalueVariantConverts) {
  const ModelLoad r = parse_model("ZFZ 1\nfibers 1\nfiber CG 2\n0 0 0 2 1 1\n1 0 0 1 0 0\n");
  const auto& v = r.model.fiber(0).vertices;
  EXPECT_NEAR(v[0].fa, 0.40824829046386301, 1e-12);
  EXPECT_DOUBLE_EQ(v[0].la, 0.25);
  EXPECT_DOUBLE_EQ(v[1].fa, 1.0);
  EXPECT_DOUBLE_EQ(v[1].la, 1.0);
}

TEST(ParseModel, RoundTripSynthetic) {
  const FiberModel m = generate_synthetic_brain(1, 10);
  const ModelLoad r = parse_model(serialize_model(m));
  EXPECT_EQ(r.model, m);
  EXPECT_EQ(serialize_model(r.model), serialize_model(m));
}

TEST(ParseModel, RoundTripRandomModels) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const FiberModel m = zifazah::testing::random_model(rng, rng.integer(1, 30));
    const FiberModel back = parse_model(serialize_model(m)).model;
    ASSERT_EQ(back.size(), m.size());
    EXPECT_EQ(back.bundles(), m.bundles());
    for (std::size_t i = 0; i < m.size(); ++i) {
      const Fiber& a = m.fiber(static_cast<int>(i));
      const Fiber& b = back.fiber(static_cast<int>(i));
      ASSERT_EQ(a.bundle, b.bundle);
      ASSERT_EQ(a.vertices.size(), b.vertices.size());
      for (std::size_t k = 0; k < a.vertices.size(); ++k) {
        EXPECT_LE(distance(a.vertices[k].position, b.vertices[k].position), 1e-9);
        EXPECT_NEAR(a.vertices[k].fa, b.vertices[k].fa, 1e-12);
      }
    }
  }
}

TEST(Anisotropy, ReferenceValues) {
  EXPECT_DOUBLE_EQ(fractional_anisotropy(EigenTriple::sorted(1, 1, 1)), 0.0);
  EXPECT_DOUBLE_EQ(fractional_anisotropy(EigenTriple::sorted(1, 0, 0)), 1.0);
  EXPECT_NEAR(fractional_anisotropy(EigenTriple::sorted(2, 1, 1)), 0.40824829046386301, 1e-15);
  EXPECT_DOUBLE_EQ(linear_anisotropy(EigenTriple::sorted(1, 1, 1)), 0.0);
  EXPECT_DOUBLE_EQ(linear_anisotropy(EigenTriple::sorted(1, 0, 0)), 1.0);
  EXPECT_DOUBLE_EQ(linear_anisotropy(EigenTriple::sorted(2, 1, 1)), 0.25);
}

TEST(Anisotropy, DegenerateAndInvalid) {
  EXPECT_THROW(fractional_anisotropy(EigenTriple::sorted(0, 0, 0)), Error);
  EXPECT_THROW(linear_anisotropy(EigenTriple::sorted(0, 0, 0)), Error);
  EXPECT_THROW(EigenTriple::sorted(-1, 0, 0), Error);
  EXPECT_THROW(EigenTriple::sorted(NAN, 0, 0), Error);
  const EigenTriple e = EigenTriple::sorted(1, 3, 2);
  EXPECT_EQ(e.l1, 3);
  EXPECT_EQ(e.l3, 1);
}

TEST(Anisotropy, ScaleInvarianceAndRange) {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const EigenTriple e = EigenTriple::sorted(rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(0.01, 3));
    const double k = std::exp(rng.uniform(-6, 6));
    const EigenTriple ek = EigenTriple::sorted(e.l1 * k, e.l2 * k, e.l3 * k);
    const double fa = fractional_anisotropy(e), la = linear_anisotropy(e);
    EXPECT_NEAR(fractional_anisotropy(ek), fa, 1e-12);
    EXPECT_NEAR(linear_anisotropy(ek), la, 1e-12);
    EXPECT_GE(fa, 0);
    EXPECT_LE(fa, 1);
    EXPECT_GE(la, 0);
    EXPECT_LE(la, 1);
  }
}

TEST(Anisotropy, FaGrowsAwayFromIsotropy) {
  double prev = -1;
  for (int i = 0; i <= 100; ++i) {
    const double t = i / 100.0;
    const double fa = fractional_anisotropy(EigenTriple::sorted(1 + t, 1 - t / 2, 1 - t / 2));
    EXPECT_GT(fa, prev);
    prev = fa;
  }
}

TEST(FiberMean, Examples) {
  const Vec3 a{0, 0, 0}, b{1, 0, 0}, c{2, 0, 0}, d{3, 0, 0};
  EXPECT_DOUBLE_EQ(fiber_mean(zifazah::testing::make_fiber("X", {a, b}, {0.2, 0.4}), Metric::FA), 0.3);
  EXPECT_DOUBLE_EQ(fiber_mean(zifazah::testing::make_fiber("X", {a, b, c}, {0.7, 0.7, 0.7}), Metric::FA), 0.7);
  EXPECT_DOUBLE_EQ(fiber_mean(zifazah::testing::make_fiber("X", {a, b, c, d}, {0, 1, 0.5, 0.5}), Metric::FA), 0.5);
}

TEST(FiberMean, WithinVertexRange) {
  Rng rng(3);
  const FiberModel m = zifazah::testing::random_model(rng, 300);
  for (const auto& f : m.fibers()) {
    for (Metric metric : {Metric::FA, Metric::LA}) {
      double lo = 1, hi = 0;
      for (const auto& v : f.vertices) {
        lo = std::min(lo, v.metric(metric));
        hi = std::max(hi, v.metric(metric));
      }
      const double mean = fiber_mean(f, metric);
      EXPECT_GE(mean, lo);
      EXPECT_LE(mean, hi);
    }
  }
}

TEST(FiberModel, InvariantsEnforced) {
  EXPECT_THROW(FiberModel({zifazah::testing::make_fiber("", {{0, 0, 0}, {1, 0, 0}})}), Error);
  EXPECT_THROW(FiberModel({zifazah::testing::make_fiber("CC", {{0, 0, 0}})}), Error);
  EXPECT_THROW(FiberModel({zifazah::testing::make_fiber("CC", {{0, 0, 0}, {0, 0, 0}})}), Error);
  EXPECT_THROW(FiberModel({zifazah::testing::make_fiber("CC", {{0, 0, 0}, {1, 0, 0}}, {0.5, 1.5})}), Error);
  EXPECT_THROW(FiberModel({zifazah::testing::make_fiber("C C", {{0, 0, 0}, {1, 0, 0}})}), Error);
  const FiberModel m({zifazah::testing::make_fiber("B", {{0, 0, 0}, {1, 0, 0}}),
                      zifazah::testing::make_fiber("A", {{0, 0, 0}, {1, 0, 0}})});
  EXPECT_EQ(m.fiber(0).id, 0);
  EXPECT_EQ(m.fiber(1).id, 1);
  EXPECT_EQ(m.bundles(), (std::set<std::string>{"A", "B"}));
}

TEST(Bounds, TwoPointHull) {
  const FiberModel m({zifazah::testing::make_fiber("CC", {{0, 0, 0}, {1, 2, 3}})});
  EXPECT_EQ(model_bounds(m).min, (Vec3{0, 0, 0}));
  EXPECT_EQ(model_bounds(m).max, (Vec3{1, 2, 3}));
  EXPECT_THROW(model_bounds(FiberModel{}), Error);
}

TEST(Bounds, TranslationEquivariant) {
  Rng rng(5);
  const FiberModel m = zifazah::testing::random_model(rng, 20);
  std::vector<Fiber> moved = m.fibers();
  for (auto& f : moved)
    for (auto& v : f.vertices) v.position += Vec3{5, 0, 0};
  const FiberModel t(std::move(moved));
  EXPECT_LE(distance(t.bounds().min, m.bounds().min + Vec3{5, 0, 0}), 1e-12);
  EXPECT_LE(distance(t.bounds().max, m.bounds().max + Vec3{5, 0, 0}), 1e-12);
}

TEST(Bounds, SyntheticMatchesScan) {
  const FiberModel m = generate_synthetic_brain(1, 10);
  Vec3 lo{1e9, 1e9, 1e9}, hi{-1e9, -1e9, -1e9};
  for (const auto& f : m.fibers())
    for (const auto& v : f.vertices)
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], v.position[a]);
        hi[a] = std::max(hi[a], v.position[a]);
      }
  EXPECT_EQ(m.bounds().min, lo);
  EXPECT_EQ(m.bounds().max, hi);
}

TEST(Synthetic, CardinalityAndTags) {
  const FiberModel m = generate_synthetic_brain(1, 10);
  EXPECT_EQ(m.size(), 50u);
  EXPECT_EQ(m.bundles(), (std::set<std::string>{"CC", "CST", "CG", "ILF", "IFO"}));
  for (const auto& tag : m.bundles()) {
    int count = 0;
    for (const auto& f : m.fibers()) count += f.bundle == tag;
    EXPECT_EQ(count, 10);
  }
  EXPECT_THROW(generate_synthetic_brain(1, 0), Error);
}

TEST(Synthetic, Deterministic) {
  EXPECT_EQ(serialize_model(generate_synthetic_brain(1, 10)), serialize_model(generate_synthetic_brain(1, 10)));
  EXPECT_NE(serialize_model(generate_synthetic_brain(1, 10)), serialize_model(generate_synthetic_brain(2, 10)));
}

TEST(Synthetic, ThresholdCountMatchesClosedForm) {
  const FiberModel m = generate_synthetic_brain(1, 10);
  const auto& cst = kSyntheticBundles[1];
  ASSERT_EQ(cst.tag, "CST");
  int predicted = 0;
  for (int j = 0; j < 10; ++j) predicted += synthetic_fiber_mean(cst, j, 10, Metric::FA) < 0.5;
  int counted = 0;
  for (const auto& f : m.fibers()) counted += f.bundle == "CST" && zifazah::testing::mean_of(f, Metric::FA) < 0.5;
  EXPECT_EQ(counted, predicted);
  EXPECT_EQ(predicted, 4);
}

TEST(Synthetic, MeansFollowProfile) {
  const int n = 7;
  const FiberModel m = generate_synthetic_brain(9, n);
  for (std::size_t b = 0; b < kSyntheticBundles.size(); ++b)
    for (int j = 0; j < n; ++j) {
      const Fiber& f = m.fiber(static_cast<int>(b) * n + j);
      EXPECT_EQ(f.bundle, kSyntheticBundles[b].tag);
      EXPECT_NEAR(fiber_mean(f, Metric::FA), synthetic_fiber_mean(kSyntheticBundles[b], j, n, Metric::FA), 1e-12);
      EXPECT_NEAR(fiber_mean(f, Metric::LA), synthetic_fiber_mean(kSyntheticBundles[b], j, n, Metric::LA), 1e-12);
    }
}
