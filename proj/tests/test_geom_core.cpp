#include <gtest/gtest.h>

#include <cmath>

#include "chipencil/geom_core.hpp"
#include "support.hpp"

using namespace chipencil;

namespace {

void expect_errc(Errc code, auto&& fn) {
  try {
    fn();
    FAIL() << "expected " << to_string(code);
  } catch (const GeometryError& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(CanonicalFrame, IdentityForCanonicalInput) {
  const TriangleFrame f = canonical_frame({0.3, 0.8}, {0, 0}, {1, 0});
  EXPECT_DOUBLE_EQ(f.A.x, 0.3);
  EXPECT_DOUBLE_EQ(f.A.y, 0.8);
  EXPECT_NEAR(f.b_len, std::sqrt(1.13), 1e-15);
  EXPECT_NEAR(f.c_len, std::sqrt(0.73), 1e-15);
  EXPECT_FALSE(f.transform.reflects());
}

TEST(CanonicalFrame, ReflectsApexBelowAxis) {
  const TriangleFrame f = canonical_frame({0.3, -0.8}, {0, 0}, {1, 0});
  EXPECT_TRUE(f.transform.reflects());
  EXPECT_NEAR(f.A.x, 0.3, 1e-15);
  EXPECT_NEAR(f.A.y, 0.8, 1e-15);
}

TEST(CanonicalFrame, RejectsCoincidentAndCollinear) {
  expect_errc(Errc::DegenerateTriangle, [] { canonical_frame({0, 0}, {0, 0}, {1, 0}); });
  expect_errc(Errc::DegenerateTriangle, [] { canonical_frame({2, 0}, {0, 0}, {1, 0}); });
}

TEST(CanonicalFrame, GeneralSimilarityMapsVertices) {
  const Point a{3.0, 7.0}, b{-2.0, 1.0}, c{4.0, -5.0};
  const TriangleFrame f = canonical_frame(a, b, c);
  const Point cb = f.to_canonical(b), cc = f.to_canonical(c);
  EXPECT_NEAR(cb.x, 0.0, 1e-15);
  EXPECT_NEAR(cb.y, 0.0, 1e-15);
  EXPECT_NEAR(cc.x, 1.0, 1e-15);
  EXPECT_NEAR(cc.y, 0.0, 1e-15);
  EXPECT_GT(f.A.y, 0.0);
  const double scale = distance(b, c);
  EXPECT_NEAR(f.c_len, distance(a, b) / scale, 1e-14);
  EXPECT_NEAR(f.b_len, distance(a, c) / scale, 1e-14);
}

TEST(CanonicalFrame, RoundTripProperty) {
  proptest::Gen gen(7);
  for (int trial = 0; trial < 500; ++trial) {
    const Point a = gen.point(-50, 50), b = gen.point(-50, 50), c = gen.point(-50, 50);
    if (is_degenerate_triangle(a, b, c)) continue;
    const TriangleFrame f = canonical_frame(a, b, c);
    for (int i = 0; i < 5; ++i) {
      const Point x = gen.point(-1000, 1000);
      const Point back = f.from_canonical(f.to_canonical(x));
      EXPECT_LE(distance(back, x), 1e-12 * std::max(1.0, norm(x)));
    }
  }
}

TEST(Circumcenter, Examples) {
  const Point o = circumcenter({0, 1}, {0, 0}, {1, 0});
  EXPECT_NEAR(o.x, 0.5, 1e-15);
  EXPECT_NEAR(o.y, 0.5, 1e-15);
  // exact rational (1/2, 43/160)
  const Point q = circumcenter({0.3, 0.8}, {0, 0}, {1, 0});
  EXPECT_NEAR(q.x, 0.5, 1e-15);
  EXPECT_NEAR(q.y, 43.0 / 160.0, 1e-15);
  expect_errc(Errc::DegenerateTriangle, [] { circumcenter({0, 0}, {1, 0}, {2, 0}); });
}

TEST(Circumcenter, EquidistantAndPermutationInvariant) {
  proptest::Gen gen(11);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point p1 = gen.point(-10, 10), p2 = gen.point(-10, 10), p3 = gen.point(-10, 10);
    if (is_degenerate_triangle(p1, p2, p3)) continue;
    const Point o = circumcenter(p1, p2, p3);
    const double r1 = distance(o, p1), r2 = distance(o, p2), r3 = distance(o, p3);
    EXPECT_LE(std::max({std::abs(r1 - r2), std::abs(r2 - r3)}), 1e-9 * r1);
    const Point o2 = circumcenter(p3, p1, p2);
    const Point o3 = circumcenter(p2, p1, p3);
    EXPECT_LE(distance(o, o2), 1e-9 * std::max(1.0, norm(o)));
    EXPECT_LE(distance(o, o3), 1e-9 * std::max(1.0, norm(o)));
  }
}

TEST(PerpendicularBisector, Examples) {
  const LineForm l = perpendicular_bisector({0, 0}, {1, 0});
  EXPECT_DOUBLE_EQ(l.a(), 1.0);
  EXPECT_DOUBLE_EQ(l.b(), 0.0);
  EXPECT_DOUBLE_EQ(l.c(), -0.5);

  const LineForm m = perpendicular_bisector({0, 0}, {0.3, 0.8});
  EXPECT_NEAR(m.eval({0.15, 0.4}), 0.0, 1e-15);
  EXPECT_NEAR(-m.a() / m.b(), -0.375, 1e-15);
  expect_errc(Errc::CoincidentPoints, [] { perpendicular_bisector({1, 1}, {1, 1}); });
}

TEST(PerpendicularBisector, NormalizationProperty) {
  proptest::Gen gen(5);
  for (int trial = 0; trial < 500; ++trial) {
    const Point p = gen.point(-5, 5), q = gen.point(-5, 5);
    const LineForm l = perpendicular_bisector(p, q);
    EXPECT_NEAR(l.a() * l.a() + l.b() * l.b(), 1.0, 1e-15);
    EXPECT_TRUE(l.a() > 0.0 || (l.a() == 0.0 && l.b() > 0.0));
    EXPECT_NEAR(l.eval(midpoint(p, q)), 0.0, 1e-14);
    EXPECT_NEAR(dot(l.direction(), q - p), 0.0, 1e-13);
    EXPECT_LE(max_abs_difference(l, perpendicular_bisector(q, p)), 1e-15);
  }
}

TEST(CircleLine, Examples) {
  const Circle unit{{0, 0}, 1.0};
  const auto two = circle_line_intersections(unit, LineForm::from_coefficients(0, 1, 0));
  ASSERT_EQ(two.size(), 2u);
  EXPECT_NEAR(std::min(two[0].x, two[1].x), -1.0, 1e-15);
  EXPECT_NEAR(std::max(two[0].x, two[1].x), 1.0, 1e-15);
  const auto one = circle_line_intersections(unit, LineForm::from_coefficients(0, 1, -1));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one[0].x, 0.0, 1e-15);
  EXPECT_NEAR(one[0].y, 1.0, 1e-15);
  EXPECT_TRUE(circle_line_intersections(unit, LineForm::from_coefficients(0, 1, -2)).empty());
}

TEST(CircleLine, HitsSatisfyBothEquations) {
  proptest::Gen gen(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const Circle k{gen.point(-3, 3), gen.uniform(0.1, 4)};
    const LineForm l = line_through(gen.point(-3, 3), gen.point(-3, 3));
    for (const Point& p : circle_line_intersections(k, l)) {
      EXPECT_NEAR(l.eval(p), 0.0, 1e-12);
      EXPECT_NEAR(distance(p, k.center), k.radius, 1e-8);
    }
  }
}

TEST(Reflection, Examples) {
  const Point r = reflect_point_over_point({0.2, 0}, {0.5, 0});
  EXPECT_NEAR(r.x, 0.8, 1e-15);
  const LineForm l = reflect_line_over_line(LineForm::from_coefficients(0, 1, 0),
                                            LineForm::from_coefficients(1, -1, 0));
  EXPECT_LE(max_abs_difference(l, LineForm::from_coefficients(1, 0, 0)), 1e-15);
  // M(1) reflected to M(-1), cross-checked against c^-1 / (c^-1 + b^-1)
  const double m1 = 0.44560014093190790;
  EXPECT_NEAR(reflect_point_over_point({m1, 0}, {0.5, 0}).x, 0.55439985906809210, 1e-15);
}

TEST(Reflection, InvolutionProperty) {
  proptest::Gen gen(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const Point p = gen.point(-5, 5), c = gen.point(-5, 5);
    EXPECT_LE(distance(reflect_point_over_point(reflect_point_over_point(p, c), c), p), 1e-12);
    const LineForm mirror = line_through(gen.point(-5, 5), gen.point(-5, 5));
    const LineForm l = line_through(gen.point(-5, 5), gen.point(-5, 5));
    const LineForm twice = reflect_line_over_line(reflect_line_over_line(l, mirror), mirror);
    EXPECT_LE(max_abs_difference(twice, l), 1e-12 * std::max(1.0, std::abs(l.c())));
  }
}

TEST(Reflection, ParallelMirrorTranslates) {
  const LineForm l = LineForm::from_coefficients(0, 1, -1);       // y = 1
  const LineForm mirror = LineForm::from_coefficients(0, 1, -3);  // y = 3
  const LineForm r = reflect_line_over_line(l, mirror);
  EXPECT_LE(max_abs_difference(r, LineForm::from_coefficients(0, 1, -5)), 1e-15);
}
