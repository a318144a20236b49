#include <gtest/gtest.h>

#include <json.hpp>
#include <numbers>

#include "support.hpp"

using namespace zifazah;
using zifazah::testing::Rng;
using zifazah::testing::make_fiber;

namespace {

std::vector<FiberAttributes> attributes_of(const Session& s, const ViewSpec& view = {}) {
  const FiberModel& m = s.require_model();
  return compute_vertex_attributes(m, s.selection.focused_mask(m.size()), s.culled_mask(), s.encoding, view);
}

bool same_vertex(const VertexAttributes& a, const VertexAttributes& b) {
  return a.position == b.position && a.radius == b.radius && a.color.r == b.color.r && a.color.g == b.color.g &&
         a.color.b == b.color.b && a.color.a == b.color.a;
}

bool same_fiber(const FiberAttributes& a, const FiberAttributes& b) {
  if (a.id != b.id || a.shape != b.shape || a.focus != b.focus || a.culled != b.culled) return false;
  if (a.vertices.size() != b.vertices.size()) return false;
  for (std::size_t k = 0; k < a.vertices.size(); ++k)
    if (!same_vertex(a.vertices[k], b.vertices[k])) return false;
  return true;
}

EncodingDirective random_directive(Rng& rng, std::size_t fibers) {
  static const std::vector<std::pair<Attribute, Mode>> legal{
      {Attribute::Shape, Mode::Line},     {Attribute::Shape, Mode::Tube},  {Attribute::Shape, Mode::Ribbon},
      {Attribute::Color, Mode::FA},       {Attribute::Color, Mode::LA},    {Attribute::Size, Mode::FA},
      {Attribute::Size, Mode::LA},        {Attribute::Depth, Mode::Size},  {Attribute::Depth, Mode::Color},
      {Attribute::Depth, Mode::Value},    {Attribute::Depth, Mode::Transparency}};
  const auto& [attr, mode] = rng.pick(legal);
  EncodingDirective d{attr, mode, {}, {}};
  if (attr != Attribute::Shape && attr != Attribute::Color && rng.coin()) {
    const double a = rng.uniform(0.05, 0.5);
    d.params = {a, attr == Attribute::Depth ? rng.uniform(a, 1.0) : rng.uniform(0.0, 5.0)};
  }
  for (std::size_t id = 0; id < fibers; ++id)
    if (rng.coin()) d.fiber_set.push_back(static_cast<int>(id));
  return d;
}

std::shared_ptr<const FiberModel> toy_depth_model() {
  std::vector<Fiber> fibers;
  for (double z : {-10.0, 0.0, 10.0}) fibers.push_back(make_fiber("A", {{0, 0, z}, {5, 0, z}}));
  return std::make_shared<const FiberModel>(std::move(fibers));
}

std::vector<Vec3> arc(double radius, int n) {
  std::vector<Vec3> pts;
  for (int k = 0; k < n; ++k) {
    const double t = std::numbers::pi * k / (n - 1);
    pts.push_back({radius * std::cos(t), radius * std::sin(t), 0.0});
  }
  return pts;
}

}  // namespace

TEST(Colormap, Endpoints) {
  EXPECT_EQ(colormap_scalar(0.0), (Rgb{0, 0, 1}));
  EXPECT_EQ(colormap_scalar(1.0), (Rgb{1, 0, 0}));
  EXPECT_EQ(colormap_scalar(0.5), (Rgb{0.5, 0, 0.5}));
  EXPECT_EQ(colormap_scalar(-3.0), colormap_scalar(0.0));
  EXPECT_EQ(colormap_scalar(7.0), colormap_scalar(1.0));
}

TEST(Palette, PinnedAndStable) {
  EXPECT_EQ(bundle_color("CC"), (Rgb{0.89, 0.10, 0.11}));
  EXPECT_EQ(bundle_color("IFO"), (Rgb{0.60, 0.31, 0.64}));
  EXPECT_EQ(bundle_color("UF"), bundle_color("UF"));
  EXPECT_EQ(bundle_color("UF"), kFallbackPalette[fnv1a("UF") % 12]);
}

TEST(Encoding, LastWriterWins) {
  EncodingState s(3);
  s = apply_encoding(s, {Attribute::Shape, Mode::Ribbon, {}, {0, 1}});
  s = apply_encoding(s, {Attribute::Shape, Mode::Line, {}, {1, 2}});
  EXPECT_EQ(s.at(0).shape, Shape::Ribbon);
  EXPECT_EQ(s.at(1).shape, Shape::Line);
  EXPECT_EQ(s.at(2).shape, Shape::Line);
  s = apply_encoding(s, {Attribute::Depth, Mode::Size, {}, {0}});
  s = apply_encoding(s, {Attribute::Depth, Mode::Transparency, {0.3, 0.9}, {0}});
  EXPECT_EQ(s.at(0).depth, (DepthEncoding{DepthCue::Transparency, 0.3, 0.9}));
  EXPECT_EQ(s.at(0).shape, Shape::Ribbon);
}

TEST(Encoding, Locality) {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    EncodingState before(12);
    for (int k = 0; k < 5; ++k) before = apply_encoding(before, random_directive(rng, 12));
    const EncodingDirective d = random_directive(rng, 12);
    const EncodingState after = apply_encoding(before, d);
    for (int id = 0; id < 12; ++id)
      if (std::find(d.fiber_set.begin(), d.fiber_set.end(), id) == d.fiber_set.end()) {
        EXPECT_EQ(after.at(id), before.at(id));
      }
  }
}

TEST(Encoding, FiveBundlesDistinguishable) {
  auto m = zifazah::testing::synthetic();
  Session s = zifazah::testing::session_with(m);
  run_source("UPDATE shape BY ribbon IN \"CC\"\nUPDATE color BY FA IN \"CST\"\nUPDATE size BY LA IN \"CG\"\n"
             "UPDATE depth BY value IN \"ILF\"\nUPDATE shape BY line IN \"IFO\"",
             s);
  std::set<std::string> tuples;
  for (const auto& tag : m->bundles()) {
    const auto it = std::find_if(m->fibers().begin(), m->fibers().end(), [&](const Fiber& f) { return f.bundle == tag; });
    const auto& e = s.encoding.at(it->id);
    tuples.insert(std::string(to_string(e.shape)) + "/" + std::to_string(static_cast<int>(e.color)) + "/" +
                  std::to_string(e.size.by_metric) + "/" + std::to_string(static_cast<int>(e.depth.cue)));
  }
  EXPECT_EQ(tuples.size(), 5u);
}

TEST(DepthNormalize, Extremes) {
  const std::vector<Vec3> pts{{0, 0, 0}, {0, 0, -10}};
  const auto t = depth_normalize(pts, {}, 0.2, 0.8);
  EXPECT_EQ(t[0], 0.2);
  EXPECT_EQ(t[1], 0.8);
}

TEST(DepthNormalize, ConstantDepthIsMidpoint) {
  const std::vector<Vec3> pts{{0, 0, 3}, {5, 1, 3}, {-2, 9, 3}};
  for (double v : depth_normalize(pts, {}, 0.2, 0.8)) EXPECT_DOUBLE_EQ(v, 0.5);
}

TEST(DepthNormalize, MonotoneAndBounded) {
  Rng rng(11);
  for (int n : {100, 1000}) {
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i) pts.push_back(rng.point(100));
    const ViewSpec view = ViewSpec::toward({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.1, 1)});
    const double lo = rng.uniform(0, 0.5), hi = rng.uniform(0.5, 1);
    const auto t = depth_normalize(pts, view, lo, hi);
    for (int i = 0; i < n; ++i) {
      EXPECT_GE(t[i], lo);
      EXPECT_LE(t[i], hi);
      for (int j = 0; j < n; j += 7) {
        const double di = view_depth(pts[i], view), dj = view_depth(pts[j], view);
        if (di < dj) { EXPECT_LE(t[i], t[j]); }
        if (di == dj) { EXPECT_EQ(t[i], t[j]); }
      }
    }
  }
}

TEST(ViewSpec, RejectsDegenerate) {
  EXPECT_THROW(ViewSpec::toward({0, 0, 0}), Error);
  EXPECT_THROW(ViewSpec::toward({std::nan(""), 0, 1}), Error);
  EXPECT_NEAR(norm(ViewSpec::toward({0, 3, 4}).direction), 1.0, 1e-15);
}

TEST(Attributes, DefaultTable) {
  auto m = zifazah::testing::synthetic();
  Session s = zifazah::testing::session_with(m);
  for (const auto& fa : attributes_of(s)) {
    EXPECT_TRUE(fa.focus);
    const Rgb p = bundle_color(fa.bundle);
    for (const auto& v : fa.vertices) {
      EXPECT_EQ(v.color.a, 1.0);
      EXPECT_EQ(v.radius, 0.4);
      EXPECT_EQ(v.color.r, p.r);
      EXPECT_EQ(v.color.g, p.g);
      EXPECT_EQ(v.color.b, p.b);
    }
  }
}

TEST(Attributes, SizeFromFa) {
  auto m = std::make_shared<const FiberModel>(
      std::vector<Fiber>{make_fiber("A", {{0, 0, 0}, {1, 0, 0}}, {0.3, 0.3}, {0.1, 0.1})});
  Session s = zifazah::testing::session_with(m);
  run_source("UPDATE size BY FA WITH 0.1,20", s);
  EXPECT_NEAR(attributes_of(s)[0].vertices[0].radius, 6.1, 1e-12);
}

TEST(Attributes, ContextIsSemiTransparent) {
  Session s = zifazah::testing::session_with(zifazah::testing::synthetic());
  run_source("SELECT \"CC\"", s);
  for (const auto& fa : attributes_of(s))
    for (const auto& v : fa.vertices) EXPECT_EQ(v.color.a, fa.bundle == "CC" ? kFocusAlpha : kContextAlpha);
}

TEST(Attributes, TransparencyFollowsDepthOrder) {
  Session s = zifazah::testing::session_with(toy_depth_model());
  run_source("UPDATE depth BY transparency", s);
  const auto table = attributes_of(s);
  // Default view looks down -z, so the z = -10 fiber is farthest.
  for (const auto& v : table[0].vertices) EXPECT_DOUBLE_EQ(v.color.a, 1.0);
  for (const auto& v : table[1].vertices) EXPECT_DOUBLE_EQ(v.color.a, 0.6);
  for (const auto& v : table[2].vertices) EXPECT_DOUBLE_EQ(v.color.a, 0.2);
}

TEST(Attributes, DepthCueChannels) {
  Session s = zifazah::testing::session_with(toy_depth_model());
  run_source("UPDATE depth BY size IN \"A\" WITH 0.5,1", s);
  auto table = attributes_of(s);
  EXPECT_DOUBLE_EQ(table[2].vertices[0].radius, 0.4 * 0.5);
  EXPECT_DOUBLE_EQ(table[0].vertices[0].radius, 0.4);
  run_source("UPDATE depth BY color WITH 0.2,0.8", s);
  table = attributes_of(s);
  EXPECT_DOUBLE_EQ(table[0].vertices[0].color.r, 0.8);
  EXPECT_DOUBLE_EQ(table[2].vertices[0].color.b, 0.8);
  run_source("UPDATE depth BY value WITH 0.5,1", s);
  table = attributes_of(s);
  EXPECT_DOUBLE_EQ(table[2].vertices[0].color.r, bundle_color("A").r * 0.5);
}

TEST(Attributes, PopulationIsFocusedVertices) {
  auto m = toy_depth_model();
  Session s = zifazah::testing::session_with(m);
  run_source("x = LOCATE \"FA > 0\"\nUPDATE depth BY transparency WITH 0.2,1", s);
  s.selection.focus.clear();
  s.selection.focus["pair"] = {0, 1};
  const auto table = attributes_of(s);
  EXPECT_DOUBLE_EQ(table[0].vertices[0].color.a, 1.0);
  EXPECT_DOUBLE_EQ(table[1].vertices[0].color.a, 0.2);
  // Outside the population the mapping clamps.
  EXPECT_DOUBLE_EQ(table[2].vertices[0].color.a, kContextAlpha * 0.2);
}

TEST(Attributes, BoundsOnRandomEncodings) {
  Rng rng(21);
  auto m = zifazah::testing::synthetic();
  for (int trial = 0; trial < 50; ++trial) {
    Session s = zifazah::testing::session_with(m);
    for (int k = 0; k < 6; ++k) s.encoding = apply_encoding(s.encoding, random_directive(rng, m->size()));
    if (rng.coin()) run_source("SELECT \"FA < 0.5\" IN \"CST\"\nSELECT \"axial +40\"", s);
    const ViewSpec view = ViewSpec::toward(rng.point(1) + Vec3{0, 0, 2});
    for (const auto& fa : attributes_of(s, view))
      for (const auto& v : fa.vertices) {
        for (double c : {v.color.r, v.color.g, v.color.b, v.color.a}) {
          EXPECT_GE(c, 0.0);
          EXPECT_LE(c, 1.0);
        }
        if (fa.shape == Shape::Line) {
          EXPECT_EQ(v.radius, 0.0);
        }
        else
          EXPECT_GT(v.radius, 0.0);
      }
  }
}

TEST(Attributes, ResetEquivalence) {
  Rng rng(31);
  auto m = zifazah::testing::synthetic();
  Session fresh = zifazah::testing::session_with(m);
  const auto baseline = attributes_of(fresh);
  for (int trial = 0; trial < 50; ++trial) {
    Session s = zifazah::testing::session_with(m);
    for (int k = rng.integer(1, 8); k > 0; --k) s.encoding = apply_encoding(s.encoding, random_directive(rng, m->size()));
    run_source("UPDATE RESET IN \"ALL\"", s);
    const auto after = attributes_of(s);
    ASSERT_EQ(after.size(), baseline.size());
    for (std::size_t i = 0; i < after.size(); ++i) EXPECT_TRUE(same_fiber(after[i], baseline[i]));
  }
}

TEST(Tube, StraightFiber) {
  const Fiber f = make_fiber("A", {{0, 0, 0}, {0, 0, 5}});
  const std::vector<double> radii{1, 1};
  const Mesh mesh = tessellate_tube(f, radii, 4);
  ASSERT_EQ(mesh.vertices.size(), 8u);
  for (const auto& v : mesh.vertices) EXPECT_NEAR(std::hypot(v.x, v.y), 1.0, 1e-12);
  EXPECT_EQ(mesh.triangles.size(), 8u);
}

TEST(Tube, CountFormulas) {
  Rng rng(2);
  const FiberModel m = zifazah::testing::random_model(rng, 30);
  for (const auto& f : m.fibers()) {
    for (int sides : {3, 5, 8}) {
      const std::vector<double> radii(f.vertices.size(), 0.5);
      const Mesh mesh = tessellate_tube(f, radii, sides);
      EXPECT_EQ(mesh.vertices.size(), f.vertices.size() * sides);
      EXPECT_EQ(mesh.normals.size(), mesh.vertices.size());
      EXPECT_EQ(mesh.triangles.size(), 2 * (f.vertices.size() - 1) * sides);
      for (const auto& t : mesh.triangles)
        for (int idx : t) {
          EXPECT_GE(idx, 0);
          EXPECT_LT(idx, static_cast<int>(mesh.vertices.size()));
        }
    }
  }
}

TEST(Tube, ArcRingDistance) {
  const auto pts = arc(20.0, 33);
  const Fiber f = make_fiber("A", pts);
  std::vector<double> radii;
  for (std::size_t k = 0; k < pts.size(); ++k) radii.push_back(0.3 + 0.05 * static_cast<double>(k));
  const Mesh mesh = tessellate_tube(f, radii, kTubeSides);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double t = std::numbers::pi * static_cast<double>(k) / 32.0;
    const Vec3 tangent{-std::sin(t), std::cos(t), 0.0};
    for (int j = 0; j < kTubeSides; ++j) {
      const Vec3 offset = mesh.vertices[k * kTubeSides + j] - pts[k];
      EXPECT_NEAR(norm(offset), radii[k], 1e-6 * radii[k]);
      if (k > 0 && k + 1 < pts.size()) { EXPECT_NEAR(dot(offset, tangent), 0.0, 1e-9); }
    }
  }
}

TEST(Tube, FramesStayOrthonormal) {
  Rng rng(4);
  const FiberModel m = zifazah::testing::random_model(rng, 40);
  for (const auto& f : m.fibers()) {
    for (const auto& fr : parallel_transport_frames(positions_of(f))) {
      EXPECT_NEAR(norm(fr.normal), 1.0, 1e-12);
      EXPECT_NEAR(dot(fr.normal, fr.tangent), 0.0, 1e-12);
      EXPECT_NEAR(dot(fr.binormal, fr.tangent), 0.0, 1e-12);
    }
  }
}

TEST(Tube, RejectsBadInput) {
  const Fiber f = make_fiber("A", {{0, 0, 0}, {1, 0, 0}});
  EXPECT_THROW(tessellate_tube(f, std::vector<double>{1, 1}, 2), Error);
  EXPECT_THROW(tessellate_tube(f, std::vector<double>{1, 0}, 8), Error);
  EXPECT_THROW(tessellate_tube(f, std::vector<double>{1}, 8), Error);
  EXPECT_THROW(tessellate_tube(make_fiber("A", {{0, 0, 0}, {0, 0, 0}}), std::vector<double>{1, 1}, 8), Error);
}

TEST(Ribbon, CountsWidthPlanarity) {
  const Fiber two = make_fiber("A", {{0, 0, 0}, {2, 0, 0}});
  Mesh mesh = tessellate_ribbon(two, 1.0);
  EXPECT_EQ(mesh.vertices.size(), 4u);
  EXPECT_EQ(mesh.triangles.size(), 2u);

  const Fiber line = make_fiber("A", {{0, 0, 0}, {1, 1, 1}, {2, 2, 2}, {4, 4, 4}, {5, 5, 5}});
  mesh = tessellate_ribbon(line, 1.7);
  ASSERT_EQ(mesh.vertices.size(), 10u);
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(distance(mesh.vertices[2 * k], mesh.vertices[2 * k + 1]), 1.7, 1e-9);
  const Vec3 n = normalized(cross(mesh.vertices[1] - mesh.vertices[0], mesh.vertices[2] - mesh.vertices[0]));
  for (const auto& v : mesh.vertices) EXPECT_NEAR(dot(v - mesh.vertices[0], n), 0.0, 1e-9);
  EXPECT_THROW(tessellate_ribbon(line, 0.0), Error);
}

TEST(Snapshot, DeterministicAndGenerational) {
  Session s = zifazah::testing::session_with(zifazah::testing::synthetic());
  const auto a = emit_snapshot(s);
  EXPECT_EQ(serialize_snapshot(a), serialize_snapshot(emit_snapshot(s)));
  run_source("SELECT \"CC\"", s);
  const auto b = emit_snapshot(s);
  EXPECT_EQ(b.generation, a.generation + 1);
  EXPECT_NE(serialize_snapshot(a), serialize_snapshot(b));
  EXPECT_THROW(emit_snapshot(Session{}), Error);
}

TEST(Snapshot, ComposeEndState) {
  auto m = zifazah::testing::synthetic();
  Session s = zifazah::testing::session_with(m);
  EXPECT_FALSE(run_full(zifazah::testing::corpus_script("compose"), s).halted_at);
  const auto snap = emit_snapshot(s);
  for (const auto& fa : snap.fibers) {
    const auto& e = s.encoding.at(fa.id);
    const bool major = fa.bundle == "CC" || fa.bundle == "CST" || fa.bundle == "IFO";
    EXPECT_EQ(fa.focus, major) << fa.bundle;
    EXPECT_EQ(e.size.by_metric, fa.bundle == "CST");
    EXPECT_EQ(e.depth.cue, fa.bundle == "CC" ? DepthCue::Color : DepthCue::None);
    EXPECT_EQ(fa.shape, fa.bundle == "IFO" ? Shape::Ribbon : Shape::Tube);
    for (const auto& v : fa.vertices) EXPECT_EQ(v.color.a, major ? 1.0 : kContextAlpha);
  }
}

TEST(Snapshot, MeshesSkipLinesAndCulled) {
  auto m = zifazah::testing::synthetic();
  Session s = zifazah::testing::session_with(m);
  run_source("UPDATE shape BY line IN \"CC\"\nUPDATE shape BY ribbon IN \"CG\"\nSELECT \"axial +60\"", s);
  const auto snap = emit_snapshot(s, {}, true);
  const auto culled = s.culled_mask();
  std::size_t expect = 0;
  for (const auto& f : m->fibers()) expect += !culled[f.id] && f.bundle != "CC";
  EXPECT_EQ(snap.meshes.size(), expect);
  for (const auto& fm : snap.meshes) {
    const Fiber& f = m->fiber(fm.fiber);
    EXPECT_EQ(fm.mesh.vertices.size(), f.vertices.size() * (fm.kind == Shape::Tube ? kTubeSides : 2));
  }
}

TEST(Snapshot, SerializedLayout) {
  auto m = std::make_shared<const FiberModel>(std::vector<Fiber>{make_fiber("A", {{0, 0, 0}, {1, 0, 0}})});
  Session s = zifazah::testing::session_with(m);
  const std::string text = zifazah::testing::snapshot_text(s);
  EXPECT_EQ(text.rfind("{\n\"format\": \"zifazah-scene/1\",\n", 0), 0u);
  EXPECT_EQ(detail::json_string("a\"b\\\n"), "\"a\\\"b\\\\\\u000a\"");
  EXPECT_NE(text.find("[0.000000,0.000000,0.000000,"), std::string::npos);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j["fibers"].size(), 1u);
  EXPECT_EQ(j["planes"].size(), 3u);
  EXPECT_EQ(j["fibers"][0]["vertices"][0].size(), 8u);
}
