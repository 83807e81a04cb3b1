#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "chipencil/conic.hpp"
#include "support.hpp"

using namespace chipencil;

namespace {

template <class Fn>
void expect_errc(Errc code, Fn&& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

const Conic kUnitCircle(1, 0, 1, 0, 0, -1);
// focus (0.3, 0.8), directrix y = 0
const Conic kFrameParabola(1, 0, 0, -0.6, -1.6, 0.73);

}  // namespace

TEST(Conic, NormalizationLargestIsPlusOne) {
  const Conic u(1, 0, 0, -0.6, -1.6, 0.73);
  // exact: [-5/8, 0, 0, 3/8, 1, -73/160]
  EXPECT_DOUBLE_EQ(u.A(), -0.625);
  EXPECT_DOUBLE_EQ(u.D(), 0.375);
  EXPECT_DOUBLE_EQ(u.E(), 1.0);
  EXPECT_NEAR(u.F(), -73.0 / 160.0, 1e-16);
  expect_errc(Errc::RankDeficient, [] { Conic(0, 0, 0, 0, 0, 0); });
}

TEST(ConicEval, Examples) {
  EXPECT_NEAR(conic_eval(kFrameParabola, {0, 0.45625}), 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(conic_eval(kUnitCircle, {1, 0}), 0.0);
  EXPECT_DOUBLE_EQ(conic_eval(kUnitCircle, {2, 0}), 3.0);
}

TEST(ConicClassify, Examples) {
  EXPECT_EQ(conic_classify(kUnitCircle), ConicClass::Ellipse);
  EXPECT_EQ(conic_classify(kFrameParabola), ConicClass::Parabola);
  EXPECT_EQ(conic_classify(Conic(0, 1, 0, 0, 0, 0)), ConicClass::DegenerateLines);
  EXPECT_EQ(conic_classify(Conic(1, 0, -1, 0, 0, -1)), ConicClass::Hyperbola);
  EXPECT_EQ(conic_classify(Conic(1, 0, 1, 0, 0, 0)), ConicClass::DegeneratePoint);
  EXPECT_EQ(conic_classify(Conic(1, 0, 1, 0, 0, 1)), ConicClass::Empty);
  EXPECT_EQ(conic_classify(Conic(1, 0, 0, 0, 0, 1)), ConicClass::Empty);
  EXPECT_EQ(conic_classify(Conic(1, 0, 0, 0, 0, -1)), ConicClass::DegenerateLines);
  EXPECT_EQ(conic_classify(Conic(1, -2, 1, 0, 0, 0)), ConicClass::DegenerateLines);
}

TEST(ConicClassify, ScalingInvariantProperty) {
  proptest::Gen gen(17);
  for (int i = 0; i < 500; ++i) {
    ConicCoefficients k{};
    for (double& v : k) v = gen.uniform(-2, 2);
    const ConicClass base = conic_classify(Conic(k));
    for (double s : {1e-6, -1e-6, 1e6, -1e6}) {
      ConicCoefficients scaled = k;
      for (double& v : scaled) v *= s;
      EXPECT_EQ(conic_classify(Conic(scaled)), base);
    }
  }
}

TEST(TangentLine, Examples) {
  const LineForm t = tangent_line_at(kUnitCircle, {1, 0});
  EXPECT_LE(max_abs_difference(t, LineForm::from_coefficients(1, 0, -1)), 1e-15);

  // tangent at Z is the perpendicular bisector of AB
  const LineForm tz = tangent_line_at(kFrameParabola, {0, 0.45625});
  EXPECT_LE(max_abs_difference(tz, perpendicular_bisector({0, 0}, {0.3, 0.8})), 1e-15);

  expect_errc(Errc::NotOnConic, [] { tangent_line_at(kUnitCircle, {2, 0}); });
  expect_errc(Errc::SingularPoint, [] { tangent_line_at(Conic(0, 1, 0, 0, 0, 0), {0, 0}); });
}

TEST(PolarLine, Examples) {
  // polar of the circumcenter (1/2, 43/160) is line ZV, exact (1/5, -4/5, 73/200)
  const LineForm p = polar_line(kFrameParabola, {0.5, 43.0 / 160.0});
  EXPECT_NEAR(p.eval({0, 0.45625}), 0.0, 1e-15);
  EXPECT_NEAR(p.eval({1, 0.70625}), 0.0, 1e-15);
  EXPECT_LE(max_abs_difference(p, LineForm::from_coefficients(0.2, -0.8, 0.365)), 1e-15);

  const LineForm q = polar_line(kUnitCircle, {2, 0});
  EXPECT_LE(max_abs_difference(q, LineForm::from_coefficients(1, 0, -0.5)), 1e-15);
  expect_errc(Errc::ZeroPolar, [] { polar_line(kUnitCircle, {0, 0}); });
}

TEST(PolarLine, TangentCoincidesOnConicProperty) {
  proptest::Gen gen(23);
  for (int i = 0; i < 500; ++i) {
    // ellipse through a random point: axis-aligned with random center/axes
    const double cx = gen.uniform(-2, 2), cy = gen.uniform(-2, 2);
    const double ax = gen.uniform(0.3, 3), by = gen.uniform(0.3, 3);
    const double th = gen.uniform(0, 6.283185307179586);
    const Conic u(1 / (ax * ax), 0, 1 / (by * by), -2 * cx / (ax * ax), -2 * cy / (by * by),
                  cx * cx / (ax * ax) + cy * cy / (by * by) - 1);
    const Point p{cx + ax * std::cos(th), cy + by * std::sin(th)};
    EXPECT_LE(max_abs_difference(tangent_line_at(u, p), polar_line(u, p)), 1e-9);
  }
}

TEST(PolarLine, PolePolarDualityProperty) {
  proptest::Gen gen(29);
  for (int i = 0; i < 500; ++i) {
    ConicCoefficients k{};
    for (double& v : k) v = gen.uniform(-2, 2);
    const Conic u(k);
    const Point p = gen.point(-3, 3);
    const LineForm lp = polar_line(u, p);
    // a point q on the polar of p: p must then lie on the polar of q
    const Point q = lp.anchor() + gen.uniform(-3, 3) * lp.direction();
    const LineForm lq = polar_line(u, q);
    EXPECT_NEAR(lq.eval(p), 0.0, 1e-9 * std::max(1.0, norm(p)));
  }
}

TEST(ConicCenter, Examples) {
  const Point c = conic_center(kUnitCircle);
  EXPECT_DOUBLE_EQ(c.x, 0.0);
  EXPECT_DOUBLE_EQ(c.y, 0.0);
  expect_errc(Errc::NotCentral, [] { conic_center(kFrameParabola); });
  const Conic shifted(1, 0, 4, -2, -16, 1 + 16 - 4);  // (x-1)^2 + 4 (y-2)^2 = 4
  const Point s = conic_center(shifted);
  EXPECT_NEAR(s.x, 1.0, 1e-15);
  EXPECT_NEAR(s.y, 2.0, 1e-15);
  expect_errc(Errc::ZeroPolar, [&] { polar_line(shifted, s); });
}

TEST(FivePointFit, UnitCircle) {
  std::array<Point, 5> pts{};
  for (int i = 0; i < 5; ++i) {
    const double th = 0.3 + 1.1 * i;
    pts[static_cast<std::size_t>(i)] = {std::cos(th), std::sin(th)};
  }
  const Conic u = conic_from_five_points(pts);
  EXPECT_LE(coefficient_distance(u, kUnitCircle), 1e-12);
}

TEST(FivePointFit, FourCollinearIsRankDeficient) {
  const std::array<Point, 5> pts{Point{0, 0}, Point{1, 0}, Point{2, 0}, Point{3, 0}, Point{1, 1}};
  expect_errc(Errc::RankDeficient, [&] { conic_from_five_points(pts); });
}

TEST(FivePointFit, ReproducesInputsProperty) {
  proptest::Gen gen(31);
  for (int i = 0; i < 300; ++i) {
    ConicCoefficients k{};
    for (double& v : k) v = gen.uniform(-2, 2);
    const Conic u(k);
    // sample points on u by intersecting random lines through the region
    std::array<Point, 5> pts{};
    int have = 0;
    for (int tries = 0; tries < 200 && have < 5; ++tries) {
      const LineForm l = line_through(gen.point(-3, 3), gen.point(-3, 3));
      for (const Point& p : line_conic_intersections(u, l)) {
        if (have < 5 && norm(p) < 20) pts[static_cast<std::size_t>(have++)] = p;
      }
    }
    if (have < 5) continue;
    Conic fit = u;
    try {
      fit = conic_from_five_points(pts);
    } catch (const GeometryError&) {
      continue;  // nearly degenerate 5-tuples are allowed to be refused
    }
    for (const Point& p : pts) EXPECT_LE(relative_residual(fit, p), 1e-9);
  }
}

TEST(LineConic, Examples) {
  const auto hits = line_conic_intersections(kUnitCircle, LineForm::from_coefficients(0, 1, 0));
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_NEAR(std::min(hits[0].x, hits[1].x), -1.0, 1e-15);
  EXPECT_NEAR(std::max(hits[0].x, hits[1].x), 1.0, 1e-15);

  const auto zv = line_conic_intersections(kFrameParabola, line_through({0, 0.45625}, {1, 0.70625}));
  ASSERT_EQ(zv.size(), 2u);
  const Point lo = zv[0].x < zv[1].x ? zv[0] : zv[1];
  const Point hi = zv[0].x < zv[1].x ? zv[1] : zv[0];
  EXPECT_NEAR(lo.x, 0.0, 1e-14);
  EXPECT_NEAR(lo.y, 0.45625, 1e-14);
  EXPECT_NEAR(hi.x, 1.0, 1e-14);
  EXPECT_NEAR(hi.y, 0.70625, 1e-14);

  expect_errc(Errc::LineOnConic, [] {
    line_conic_intersections(Conic(0, 1, 0, 0, 0, 0), LineForm::from_coefficients(1, 0, 0));
  });
}
