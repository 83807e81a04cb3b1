#pragma once

// The pencil of conics tangent to the perpendicular bisectors of AB and AC
// at Z and V: closed-form members traced by circumcenters of A and two
// cevian feet, region classification, spans and the same-member decision.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "chipencil/cevian_seq.hpp"
#include "chipencil/conic.hpp"
#include "chipencil/errors.hpp"
#include "chipencil/geom_core.hpp"
#include "chipencil/tolerances.hpp"

namespace chipencil {

template <class T>
struct BasicPencil {
  BasicTriangleFrame<T> frame;
  BasicPoint<T> Z;
  BasicPoint<T> V;
  BasicLineForm<T> side_p;  // perpendicular bisector of AB, tangent at Z
  BasicLineForm<T> side_q;  // perpendicular bisector of AC, tangent at V
  BasicPoint<T> vertex;     // side_p ∩ side_q, the circumcenter of ABC
  BasicConic<T> parabola;   // focus A, directrix BC
  BasicLineForm<T> critical_line;
  // Largest coefficient magnitude of (x - xA)^2 + (y - yA)^2 - y^2; dividing
  // by it gives the normalized parabola form with "inside" negative.
  T parabola_scale = 1;

  // Normalized parabola form: < 0 inside, 0 on, > 0 outside.
  T parabola_form(BasicPoint<T> e) const {
    const BasicPoint<T> a = frame.A;
    const T dx = e.x - a.x;
    return (dx * dx + a.y * a.y - 2 * e.y * a.y) / parabola_scale;
  }
};

using Pencil = BasicPencil<double>;

template <class T>
BasicPencil<T> build_pencil(const BasicTriangleFrame<T>& frame) {
  using F = BasicTriangleFrame<T>;
  if (frame.is_isosceles()) fail(Errc::IsoscelesExcluded, "pencil requires |AB| != |AC|");
  const BasicPoint<T> a = frame.A;
  const T c2 = frame.c2();
  const T b2 = frame.b2();
  const BasicPoint<T> z{0, c2 / (2 * a.y)};
  const BasicPoint<T> v{1, b2 / (2 * a.y)};
  const BasicConicCoefficients<T> h{1, 0, 0, -2 * a.x, -2 * a.y, c2};
  T scale = 0;
  for (T k : h) scale = std::max(scale, std::abs(k));
  return BasicPencil<T>{frame,
                        z,
                        v,
                        perpendicular_bisector(F::B, a),
                        perpendicular_bisector(a, F::C),
                        circumcenter(a, F::B, F::C),
                        BasicConic<T>(h),
                        line_through(z, v),
                        scale};
}

namespace detail {

// The closed forms, after dividing through by a common positive factor.
// With p = b^t and l = c^t the coefficient groups are (p - l)^2 -> minus2
// and (p + l)^2 -> plus2; swapping the two groups negates l.
template <class T>
BasicConicCoefficients<T> member_coefficients(const BasicTriangleFrame<T>& frame,
                                              scalar_t<T> minus2, scalar_t<T> plus2) {
  const T xa = frame.A.x;
  const T ya = frame.A.y;
  const T c2 = frame.c2();
  const T w = 2 * xa - 1;
  return {minus2 * w * w - plus2,
          ya * minus2 * (8 * xa - 4),
          4 * ya * ya * minus2,
          -2 * c2 * minus2 * w + 2 * xa * plus2,
          -2 * ya * (2 * c2 * minus2 - plus2),
          c2 * (c2 * minus2 - plus2)};
}

// ((p - l) / (p + l))^2 = tanh^2(t ln(c/b) / 2); even in t by construction.
template <class T>
T span_ratio_squared(const BasicTriangleFrame<T>& frame, scalar_t<T> t) {
  const T v = t * frame.log_ratio();
  if (!std::isfinite(v) || std::abs(v) > T(tol::kExponentLimit)) {
    fail(Errc::ExponentOutOfRange, "|t ln(c/b)| exceeds " + std::to_string(tol::kExponentLimit));
  }
  const T r = std::tanh(std::abs(v) / 2);
  return r * r;
}

}  // namespace detail

// Member traced by circumcenters of A, M(k), M(k+t) (and of A, M'(k),
// M'(k+t)). t = 0 gives the parabola with focus A and directrix BC.
template <class T>
BasicConic<T> conic_same_side(const BasicTriangleFrame<T>& frame, scalar_t<T> t) {
  if (frame.is_isosceles()) fail(Errc::IsoscelesExcluded, "pencil requires |AB| != |AC|");
  const T s = detail::span_ratio_squared(frame, t);
  return BasicConic<T>(detail::member_coefficients(frame, s, T(1)));
}

// Member traced by circumcenters of A, M'(k), M(k+t).
template <class T>
BasicConic<T> conic_mixed(const BasicTriangleFrame<T>& frame, scalar_t<T> t) {
  if (t == 0) fail(Errc::ZeroSpanMixed, "mixed members need a nonzero span");
  if (frame.is_isosceles()) fail(Errc::IsoscelesExcluded, "pencil requires |AB| != |AC|");
  const T s = detail::span_ratio_squared(frame, t);
  return BasicConic<T>(detail::member_coefficients(frame, T(1), s));
}

// lambda with lambda * ZV(E)^2 + p(E) q(E) = 0 on normalized line forms.
template <class T>
T pencil_parameter(const BasicPencil<T>& pencil, BasicPoint<T> e) {
  const T r = pencil.critical_line.eval(e);
  if (std::abs(r) <= T(tol::kBoundary)) fail(Errc::OnCriticalLine, "point lies on line ZV");
  return -(pencil.side_p.eval(e) * pencil.side_q.eval(e)) / (r * r);
}

template <class T>
BasicConic<T> member_for_parameter(const BasicPencil<T>& pencil, scalar_t<T> lambda) {
  return BasicConic<T>(combine<T>(lambda, line_product(pencil.critical_line, pencil.critical_line),
                                  1, line_product(pencil.side_p, pencil.side_q)));
}

template <class T>
BasicConic<T> conic_through(const BasicPencil<T>& pencil, BasicPoint<T> e) {
  return member_for_parameter(pencil, pencil_parameter(pencil, e));
}

enum class RegionLabel {
  U1_InsideParabola,
  OnParabola,
  U2_LeftOverhang,
  U3_RightOverhang,
  U4_Remainder,
  R3_Opposite,
  SideRegion,
  OnSide,
  OnCriticalLine,
};

constexpr const char* to_string(RegionLabel r) {
  switch (r) {
    case RegionLabel::U1_InsideParabola: return "U1_InsideParabola";
    case RegionLabel::OnParabola: return "OnParabola";
    case RegionLabel::U2_LeftOverhang: return "U2_LeftOverhang";
    case RegionLabel::U3_RightOverhang: return "U3_RightOverhang";
    case RegionLabel::U4_Remainder: return "U4_Remainder";
    case RegionLabel::R3_Opposite: return "R3_Opposite";
    case RegionLabel::SideRegion: return "SideRegion";
    case RegionLabel::OnSide: return "OnSide";
    case RegionLabel::OnCriticalLine: return "OnCriticalLine";
  }
  return "Unknown";
}

template <class T>
RegionLabel classify_region(const BasicPencil<T>& pencil, BasicPoint<T> e) {
  const T band = T(tol::kBoundary);
  const T dp = pencil.side_p.eval(e);
  const T dq = pencil.side_q.eval(e);
  if (std::abs(dp) <= band || std::abs(dq) <= band) return RegionLabel::OnSide;
  if (std::abs(pencil.critical_line.eval(e)) <= band) return RegionLabel::OnCriticalLine;
  const T pf = pencil.parabola_form(e);
  if (std::abs(pf) <= band) return RegionLabel::OnParabola;

  // The focus is strictly inside the parabola, hence inside the wedge R1.
  const BasicPoint<T> a = pencil.frame.A;
  const bool same_p = (dp > 0) == (pencil.side_p.eval(a) > 0);
  const bool same_q = (dq > 0) == (pencil.side_q.eval(a) > 0);
  if (same_p != same_q) return RegionLabel::SideRegion;
  if (!same_p) return RegionLabel::R3_Opposite;
  if (pf < 0) return RegionLabel::U1_InsideParabola;
  if (e.x < 0) return RegionLabel::U2_LeftOverhang;
  if (e.x > 1) return RegionLabel::U3_RightOverhang;
  return RegionLabel::U4_Remainder;
}

template <class T>
struct BasicCutHit {
  BasicPoint<T> location;
  FootFamily family = FootFamily::Internal;  // Internal: on the closed segment BC
  bool at_vertex = false;                    // within 1e-10 of B or C
};

template <class T>
struct BasicCutReport {
  BasicCircle<T> circle;
  std::vector<BasicCutHit<T>> hits;
  int count_m = 0;        // hits on segment BC
  int count_m_prime = 0;  // hits on line BC off the segment
  bool b_inside = false;  // |EB| < |EA|
  bool c_inside = false;  // |EC| < |EA|
};

using CutHit = BasicCutHit<double>;
using CutReport = BasicCutReport<double>;

// Circle centered at E through A, cut with line BC. The discriminant
// r^2 - yE^2 is evaluated without cancellation and equals the parabola form,
// so tangency agrees with the OnParabola band.
template <class T>
BasicCutReport<T> circle_cut(const BasicPencil<T>& pencil, BasicPoint<T> e) {
  const BasicPoint<T> a = pencil.frame.A;
  if (distance(e, a) <= T(tol::kPoint)) fail(Errc::CenterIsFocus, "circle center coincides with A");
  BasicCutReport<T> rep;
  rep.circle = {e, distance(e, a)};
  const T c2 = pencil.frame.c2();
  rep.b_inside = c2 - 2 * (e.x * a.x + e.y * a.y) > 0;
  rep.c_inside = pencil.frame.b2() - 2 * ((e.x - 1) * (a.x - 1) + e.y * a.y) > 0;

  const T pf = pencil.parabola_form(e);
  std::vector<T> xs;
  if (std::abs(pf) <= T(tol::kBoundary)) {
    xs.push_back(e.x);
  } else if (pf > 0) {
    const T h = std::sqrt(pf * pencil.parabola_scale);
    const T big = e.x + std::copysign(h, e.x);
    const T product = 2 * (e.x * a.x + e.y * a.y) - c2;  // xE^2 - (r^2 - yE^2)
    const T other = big != 0 ? product / big : -big;
    xs = {std::min(big, other), std::max(big, other)};
  }
  for (T x : xs) {
    BasicCutHit<T> hit;
    hit.location = {x, 0};
    hit.family = (x >= 0 && x <= 1) ? FootFamily::Internal : FootFamily::External;
    hit.at_vertex = std::abs(x) <= T(1e-10) || std::abs(x - 1) <= T(1e-10);
    if (hit.family == FootFamily::Internal) {
      ++rep.count_m;
    } else {
      ++rep.count_m_prime;
    }
    rep.hits.push_back(hit);
  }
  return rep;
}

enum class SpanFamily { SameSide, Mixed };

constexpr const char* to_string(SpanFamily f) {
  return f == SpanFamily::SameSide ? "SameSide" : "Mixed";
}

template <class T>
struct BasicSpanResult {
  T value = 0;
  SpanFamily family = SpanFamily::SameSide;
  T k1 = 0;
  T k2 = 0;
};

using SpanResult = BasicSpanResult<double>;

template <class T>
BasicSpanResult<T> span_of(const BasicPencil<T>& pencil, BasicPoint<T> e) {
  const BasicCutReport<T> cut = circle_cut(pencil, e);
  if (cut.hits.empty()) fail(Errc::InsideParabola, "circle misses BC: point is inside the parabola");
  if (cut.hits.size() == 1) fail(Errc::OnParabolaTangent, "circle is tangent to BC");
  for (const auto& h : cut.hits) {
    if (h.at_vertex) fail(Errc::HitAtVertex, "circle passes through B or C");
  }
  const auto [f1, k1] = exponent_of_location(pencil.frame, cut.hits[0].location.x);
  const auto [f2, k2] = exponent_of_location(pencil.frame, cut.hits[1].location.x);
  return {std::abs(k1 - k2), f1 == f2 ? SpanFamily::SameSide : SpanFamily::Mixed, k1, k2};
}

// Intersection of line(vertex, P) with the polar of P with respect to the
// parabola: the pole of the tangent at P to P's ellipse.
template <class T>
BasicPoint<T> dual_point(const BasicPencil<T>& pencil, BasicPoint<T> p) {
  const RegionLabel r = classify_region(pencil, p);
  if (r == RegionLabel::OnCriticalLine) fail(Errc::OnCriticalLine, "point lies on line ZV");
  if (r != RegionLabel::U1_InsideParabola) {
    fail(Errc::NotInsideParabola, std::string("point is in region ") + to_string(r));
  }
  const BasicLineForm<T> polar = polar_line(pencil.parabola, p);
  const BasicLineForm<T> axis = line_through(pencil.vertex, p);
  if (std::abs(cross(polar.direction(), axis.direction())) <= T(tol::kParallel)) {
    fail(Errc::ParallelPolar, "line through the vertex is parallel to the polar");
  }
  return *intersect(axis, polar);
}

template <class T>
ConicClass classify_member(const BasicPencil<T>& pencil, BasicPoint<T> w) {
  switch (classify_region(pencil, w)) {
    case RegionLabel::OnCriticalLine:
      fail(Errc::OnCriticalLine, "member through a point of ZV is not classified");
    case RegionLabel::OnParabola: return ConicClass::Parabola;
    case RegionLabel::U1_InsideParabola: return ConicClass::Ellipse;
    case RegionLabel::OnSide: return ConicClass::DegenerateLines;
    default: return ConicClass::Hyperbola;
  }
}

enum class Decision { Same, Different };

constexpr const char* to_string(Decision d) { return d == Decision::Same ? "Same" : "Different"; }

enum class DecisionCase { Identical, Parabola, Side, Straight, EllipseDual, TypeMismatch };

constexpr const char* to_string(DecisionCase c) {
  switch (c) {
    case DecisionCase::Identical: return "identical";
    case DecisionCase::Parabola: return "parabola";
    case DecisionCase::Side: return "side";
    case DecisionCase::Straight: return "straight";
    case DecisionCase::EllipseDual: return "ellipse-dual";
    case DecisionCase::TypeMismatch: return "type-mismatch";
  }
  return "unknown";
}

template <class T>
struct BasicSameConicResult {
  Decision decision = Decision::Different;
  DecisionCase route = DecisionCase::TypeMismatch;
  RegionLabel region_x = RegionLabel::U4_Remainder;
  RegionLabel region_y = RegionLabel::U4_Remainder;
  std::optional<BasicSpanResult<T>> span_x, span_y;
  // Side case: (x1/x2)(y1/y2) and (x1/x2)(y2/y1) with BX:XC ratios.
  std::optional<T> ratio_product_1, ratio_product_2;
  // Ellipse case: the points actually compared after dual mapping.
  std::optional<BasicPoint<T>> dual_x, dual_y;
  int parallel_polar_count = 0;
  std::optional<DecisionCase> dual_route;
  T lambda_x = 0;
  T lambda_y = 0;
  bool oracle_agrees = false;
};

using SameConicResult = BasicSameConicResult<double>;

namespace detail {

enum class MemberGroup { Parabola, Side, Straight, Ellipse };

inline MemberGroup group_of(RegionLabel r) {
  switch (r) {
    case RegionLabel::OnParabola: return MemberGroup::Parabola;
    case RegionLabel::SideRegion: return MemberGroup::Side;
    case RegionLabel::U1_InsideParabola: return MemberGroup::Ellipse;
    default: return MemberGroup::Straight;
  }
}

template <class T>
bool spans_equal(T a, T b) {
  return std::abs(a - b) <= T(tol::kSpanEqual) * std::max({T(1), a, b});
}

template <class T>
T bc_ratio(T x) {
  return std::abs(x) / std::abs(x - 1);
}

template <class T>
void require_admissible(const BasicPencil<T>& pencil, BasicPoint<T> e) {
  const RegionLabel r = classify_region(pencil, e);
  if (r == RegionLabel::OnSide) fail(Errc::OnSide, "point lies on a side of the pencil");
  if (r == RegionLabel::OnCriticalLine) fail(Errc::OnCriticalLine, "point lies on line ZV");
}

template <class T>
std::optional<BasicPoint<T>> try_dual(const BasicPencil<T>& pencil, BasicPoint<T> p) {
  try {
    return dual_point(pencil, p);
  } catch (const GeometryError& e) {
    if (e.code() == Errc::ParallelPolar) return std::nullopt;
    throw;
  }
}

// Case analysis without the oracle cross-check.
template <class T>
void decide(const BasicPencil<T>& pencil, BasicPoint<T> x, BasicPoint<T> y,
            BasicSameConicResult<T>& out, int depth) {
  require_admissible(pencil, x);
  require_admissible(pencil, y);
  out.region_x = classify_region(pencil, x);
  out.region_y = classify_region(pencil, y);
  if (distance(x, y) <= T(tol::kPoint) * std::max(T(1), norm(x))) {
    out.route = DecisionCase::Identical;
    out.decision = Decision::Same;
    return;
  }
  const MemberGroup gx = group_of(out.region_x);
  const MemberGroup gy = group_of(out.region_y);
  if (gx != gy) {
    out.route = DecisionCase::TypeMismatch;
    out.decision = Decision::Different;
    return;
  }
  switch (gx) {
    case MemberGroup::Parabola:
      out.route = DecisionCase::Parabola;
      out.decision = Decision::Same;
      return;
    case MemberGroup::Side: {
      out.route = DecisionCase::Side;
      const BasicCutReport<T> cx = circle_cut(pencil, x);
      const BasicCutReport<T> cy = circle_cut(pencil, y);
      const auto split = [](const BasicCutReport<T>& c) {
        // (hit on m, hit on m')
        return c.hits[0].family == FootFamily::Internal
                   ? std::pair{c.hits[0].location.x, c.hits[1].location.x}
                   : std::pair{c.hits[1].location.x, c.hits[0].location.x};
      };
      out.span_x = span_of(pencil, x);
      out.span_y = span_of(pencil, y);
      const auto [x1, x2] = split(cx);
      const auto [y1, y2] = split(cy);
      const T rx = bc_ratio(x1) / bc_ratio(x2);
      out.ratio_product_1 = rx * (bc_ratio(y1) / bc_ratio(y2));
      out.ratio_product_2 = rx * (bc_ratio(y2) / bc_ratio(y1));
      out.decision = spans_equal(out.span_x->value, out.span_y->value) ? Decision::Same
                                                                       : Decision::Different;
      return;
    }
    case MemberGroup::Straight:
      out.route = DecisionCase::Straight;
      out.span_x = span_of(pencil, x);
      out.span_y = span_of(pencil, y);
      out.decision = spans_equal(out.span_x->value, out.span_y->value) ? Decision::Same
                                                                       : Decision::Different;
      return;
    case MemberGroup::Ellipse: {
      out.route = DecisionCase::EllipseDual;
      const std::optional<BasicPoint<T>> gxp = try_dual(pencil, x);
      const std::optional<BasicPoint<T>> gyp = try_dual(pencil, y);
      out.parallel_polar_count = int(!gxp) + int(!gyp);
      if (!gxp && !gyp) {
        // Vertical-tangent points of one ellipse are symmetric about its
        // center, which lies on x = 1/2.
        out.decision = std::abs(midpoint(x, y).x - T(0.5)) <= T(tol::kBoundary)
                           ? Decision::Same
                           : Decision::Different;
        return;
      }
      // Reflecting the contact point Z through the ellipse center gives a
      // point of the same ellipse whose tangent is parallel to side p.
      const auto substitute = [&](BasicPoint<T> p) {
        const BasicPoint<T> center = conic_center(conic_through(pencil, p));
        return *try_dual(pencil, reflect_point_over_point(pencil.Z, center));
      };
      out.dual_x = gxp ? *gxp : substitute(x);
      out.dual_y = gyp ? *gyp : substitute(y);
      if (depth > 0) fail(Errc::NotInsideParabola, "dual mapping did not leave the parabola");
      BasicSameConicResult<T> inner;
      decide(pencil, *out.dual_x, *out.dual_y, inner, depth + 1);
      out.dual_route = inner.route;
      out.span_x = inner.span_x;
      out.span_y = inner.span_y;
      out.ratio_product_1 = inner.ratio_product_1;
      out.ratio_product_2 = inner.ratio_product_2;
      out.decision = inner.decision;
      return;
    }
  }
}

}  // namespace detail

template <class T>
bool lambda_oracle_same(T lx, T ly) {
  return std::abs(lx - ly) <= T(tol::kLambdaEqual) * (1 + std::max(std::abs(lx), std::abs(ly)));
}

// Do X and Y lie on the same member of the pencil? Neither point may lie on
// a side or on the critical line.
template <class T>
BasicSameConicResult<T> same_conic(const BasicPencil<T>& pencil, BasicPoint<T> x,
                                   BasicPoint<T> y) {
  BasicSameConicResult<T> out;
  detail::decide(pencil, x, y, out, 0);
  out.lambda_x = pencil_parameter(pencil, x);
  out.lambda_y = pencil_parameter(pencil, y);
  out.oracle_agrees =
      (out.decision == Decision::Same) == lambda_oracle_same(out.lambda_x, out.lambda_y);
  return out;
}

}  // namespace chipencil
