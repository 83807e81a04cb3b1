#pragma once

// Planar primitives: points, normalized line forms, circles, circumcenters,
// reflections and the canonical triangle frame (B at the origin, C at (1,0),
// A above the x-axis). Everything is templated on the scalar type; the
// unqualified names are the double instantiations.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "chipencil/errors.hpp"
#include "chipencil/tolerances.hpp"

namespace chipencil {

// Scalar arguments are not used for deduction, so integer and double
// literals work with any instantiation.
template <class T>
using scalar_t = std::type_identity_t<T>;

template <class T>
struct BasicPoint {
  T x = 0;
  T y = 0;

  friend constexpr BasicPoint operator+(BasicPoint a, BasicPoint b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr BasicPoint operator-(BasicPoint a, BasicPoint b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr BasicPoint operator*(T s, BasicPoint p) { return {s * p.x, s * p.y}; }
  friend constexpr bool operator==(BasicPoint, BasicPoint) = default;
};

template <class T = double>
constexpr T dot(BasicPoint<T> a, BasicPoint<T> b) {
  return a.x * b.x + a.y * b.y;
}
template <class T = double>
constexpr T cross(BasicPoint<T> a, BasicPoint<T> b) {
  return a.x * b.y - a.y * b.x;
}
template <class T = double>
T norm(BasicPoint<T> p) {
  return std::hypot(p.x, p.y);
}
template <class T = double>
T distance(BasicPoint<T> a, BasicPoint<T> b) {
  return norm(a - b);
}
template <class T = double>
constexpr BasicPoint<T> midpoint(BasicPoint<T> a, BasicPoint<T> b) {
  return {(a.x + b.x) / 2, (a.y + b.y) / 2};
}
template <class T = double>
bool is_finite(BasicPoint<T> p) {
  return std::isfinite(p.x) && std::isfinite(p.y);
}

template <class To, class From>
BasicPoint<To> point_cast(BasicPoint<From> p) {
  return {static_cast<To>(p.x), static_cast<To>(p.y)};
}

// a*x + b*y + c = 0 with a^2 + b^2 = 1 and the first nonzero of (a, b)
// positive, so equal lines have equal coefficients.
template <class T>
class BasicLineForm {
 public:
  static BasicLineForm from_coefficients(scalar_t<T> a, scalar_t<T> b, scalar_t<T> c) {
    const T n = std::hypot(a, b);
    if (!(n > 0) || !std::isfinite(n) || !std::isfinite(c)) {
      fail(Errc::CoincidentPoints, "line normal is zero or not finite");
    }
    a /= n;
    b /= n;
    c /= n;
    // Band keeps nearly horizontal lines from flipping sign on round-off.
    const bool flip = std::abs(a) > T(1e-12) ? a < 0 : b < 0;
    if (flip) {
      a = -a;
      b = -b;
      c = -c;
    }
    if (a == 0) a = 0;  // drop negative zero
    if (b == 0) b = 0;
    return BasicLineForm(a, b, c);
  }

  T a() const { return a_; }
  T b() const { return b_; }
  T c() const { return c_; }

  // Signed distance, because the form is normalized.
  T eval(BasicPoint<T> p) const { return a_ * p.x + b_ * p.y + c_; }
  BasicPoint<T> normal() const { return {a_, b_}; }
  BasicPoint<T> direction() const { return {-b_, a_}; }
  // Foot of the perpendicular from the origin.
  BasicPoint<T> anchor() const { return {-a_ * c_, -b_ * c_}; }

  std::array<T, 3> coefficients() const { return {a_, b_, c_}; }

 private:
  BasicLineForm(T a, T b, T c) : a_(a), b_(b), c_(c) {}
  T a_, b_, c_;
};

template <class T = double>
T max_abs_difference(const BasicLineForm<T>& l, const BasicLineForm<T>& m) {
  return std::max({std::abs(l.a() - m.a()), std::abs(l.b() - m.b()), std::abs(l.c() - m.c())});
}

template <class T>
struct BasicCircle {
  BasicPoint<T> center;
  T radius = 0;
};

// Twice the signed area of (p1, p2, p3); positive when counter-clockwise.
template <class T = double>
T signed_area2(BasicPoint<T> p1, BasicPoint<T> p2, BasicPoint<T> p3) {
  return cross(p2 - p1, p3 - p1);
}

template <class T = double>
bool is_degenerate_triangle(BasicPoint<T> p1, BasicPoint<T> p2, BasicPoint<T> p3) {
  const T d = std::max({distance(p1, p2), distance(p2, p3), distance(p1, p3)});
  if (!(d > 0)) return true;
  return std::abs(signed_area2(p1, p2, p3) / 2) < T(tol::kCollinear) * d * d;
}

template <class T = double>
BasicLineForm<T> line_through(BasicPoint<T> p, BasicPoint<T> q) {
  if (p == q) fail(Errc::CoincidentPoints, "line through identical points");
  const BasicPoint<T> d = q - p;
  return BasicLineForm<T>::from_coefficients(d.y, -d.x, cross(d, p));
}

template <class T = double>
BasicLineForm<T> perpendicular_bisector(BasicPoint<T> p1, BasicPoint<T> p2) {
  if (p1 == p2) fail(Errc::CoincidentPoints, "bisector of identical points");
  const BasicPoint<T> n = p2 - p1;
  const BasicPoint<T> m = midpoint(p1, p2);
  return BasicLineForm<T>::from_coefficients(n.x, n.y, -dot(n, m));
}

template <class T = double>
std::optional<BasicPoint<T>> intersect(const BasicLineForm<T>& l, const BasicLineForm<T>& m) {
  const T det = l.a() * m.b() - l.b() * m.a();
  if (std::abs(det) <= T(1e-14)) return std::nullopt;
  return BasicPoint<T>{(l.b() * m.c() - m.b() * l.c()) / det, (m.a() * l.c() - l.a() * m.c()) / det};
}

// Circumcenter computed relative to the vertex whose angle has the largest
// sine, which keeps the cross product away from cancellation on thin
// triangles.
template <class T = double>
BasicPoint<T> circumcenter(BasicPoint<T> p1, BasicPoint<T> p2, BasicPoint<T> p3) {
  if (is_degenerate_triangle(p1, p2, p3)) {
    fail(Errc::DegenerateTriangle, "circumcenter of collinear or coincident points");
  }
  const std::array<BasicPoint<T>, 3> pts{p1, p2, p3};
  int best = 0;
  T best_sine = -1;
  for (int i = 0; i < 3; ++i) {
    const BasicPoint<T> u = pts[(i + 1) % 3] - pts[i];
    const BasicPoint<T> v = pts[(i + 2) % 3] - pts[i];
    const T s = std::abs(cross(u, v)) / (norm(u) * norm(v));
    if (s > best_sine) {
      best_sine = s;
      best = i;
    }
  }
  const BasicPoint<T> o = pts[best];
  const BasicPoint<T> u = pts[(best + 1) % 3] - o;
  const BasicPoint<T> v = pts[(best + 2) % 3] - o;
  const T d = 2 * cross(u, v);
  const T uu = dot(u, u);
  const T vv = dot(v, v);
  return {o.x + (v.y * uu - u.y * vv) / d, o.y + (u.x * vv - v.x * uu) / d};
}

// 0, 1 or 2 points, ordered along the line direction. Distances within
// tangency_tol * max(1, r) of the radius count as tangent.
template <class T = double>
std::vector<BasicPoint<T>> circle_line_intersections(const BasicCircle<T>& k, const BasicLineForm<T>& l,
                                                     scalar_t<T> tangency_tol = T(tol::kTangency)) {
  const T d = l.eval(k.center);
  const BasicPoint<T> foot = k.center - d * l.normal();
  const T band = tangency_tol * std::max(T(1), k.radius);
  const T gap = std::abs(d) - k.radius;
  if (gap > band) return {};
  if (std::abs(gap) <= band) return {foot};
  const T h = std::sqrt((k.radius - std::abs(d)) * (k.radius + std::abs(d)));
  const BasicPoint<T> dir = l.direction();
  return {foot - h * dir, foot + h * dir};
}

template <class T = double>
constexpr BasicPoint<T> reflect_point_over_point(BasicPoint<T> p, BasicPoint<T> center) {
  return {2 * center.x - p.x, 2 * center.y - p.y};
}

template <class T = double>
BasicPoint<T> reflect_point_over_line(BasicPoint<T> p, const BasicLineForm<T>& mirror) {
  return p - (2 * mirror.eval(p)) * mirror.normal();
}

// Works for parallel mirrors too: two points of l are reflected.
template <class T = double>
BasicLineForm<T> reflect_line_over_line(const BasicLineForm<T>& l, const BasicLineForm<T>& mirror) {
  const BasicPoint<T> p = l.anchor();
  const BasicPoint<T> q = p + l.direction();
  return line_through(reflect_point_over_line(p, mirror), reflect_point_over_line(q, mirror));
}

// Similarity taking user coordinates to the canonical frame: translate B to
// the origin, rotate/scale C onto (1, 0), and reflect across the x-axis when
// A would otherwise land below it.
template <class T>
class BasicSimilarity {
 public:
  BasicSimilarity() = default;
  BasicSimilarity(BasicPoint<T> origin, BasicPoint<T> unit_end, bool reflect)
      : origin_(origin), unit_(unit_end.x - origin.x, unit_end.y - origin.y), reflect_(reflect) {}

  BasicPoint<T> to_canonical(BasicPoint<T> p) const {
    std::complex<T> w = std::complex<T>(p.x - origin_.x, p.y - origin_.y) / unit_;
    if (reflect_) w = std::conj(w);
    return {w.real(), w.imag()};
  }

  BasicPoint<T> from_canonical(BasicPoint<T> p) const {
    std::complex<T> w(p.x, p.y);
    if (reflect_) w = std::conj(w);
    w = w * unit_;
    return {w.real() + origin_.x, w.imag() + origin_.y};
  }

  bool reflects() const { return reflect_; }
  // User-space length of one canonical unit (|BC| in user units).
  T scale() const { return std::abs(unit_); }

 private:
  BasicPoint<T> origin_{};
  std::complex<T> unit_{1, 0};
  bool reflect_ = false;
};

template <class T>
struct BasicTriangleFrame {
  BasicPoint<T> A;  // canonical apex, A.y > 0
  T b_len = 0;      // |AC|
  T c_len = 0;      // |AB|
  BasicSimilarity<T> transform;

  static constexpr BasicPoint<T> B{0, 0};
  static constexpr BasicPoint<T> C{1, 0};

  T b2() const { return (A.x - 1) * (A.x - 1) + A.y * A.y; }
  T c2() const { return A.x * A.x + A.y * A.y; }
  // ln(c/b); zero for isosceles frames.
  T log_ratio() const { return std::log(c_len / b_len); }
  bool is_isosceles(scalar_t<T> margin = T(tol::kIsosceles)) const {
    return std::abs(b_len - c_len) <= margin;
  }

  BasicPoint<T> to_canonical(BasicPoint<T> p) const { return transform.to_canonical(p); }
  BasicPoint<T> from_canonical(BasicPoint<T> p) const { return transform.from_canonical(p); }
};

template <class T = double>
BasicTriangleFrame<T> canonical_frame(BasicPoint<T> a_raw, BasicPoint<T> b_raw, BasicPoint<T> c_raw) {
  if (!is_finite(a_raw) || !is_finite(b_raw) || !is_finite(c_raw)) {
    fail(Errc::DegenerateTriangle, "non-finite vertex");
  }
  if (is_degenerate_triangle(a_raw, b_raw, c_raw)) {
    fail(Errc::DegenerateTriangle, "vertices are collinear or coincident");
  }
  const bool reflect = signed_area2(b_raw, c_raw, a_raw) < 0;
  BasicTriangleFrame<T> f;
  f.transform = BasicSimilarity<T>(b_raw, c_raw, reflect);
  f.A = f.transform.to_canonical(a_raw);
  f.b_len = distance(f.A, BasicTriangleFrame<T>::C);
  f.c_len = norm(f.A);
  return f;
}

// Frame whose canonical apex is given directly.
template <class T = double>
BasicTriangleFrame<T> frame_from_apex(BasicPoint<T> apex) {
  return canonical_frame(apex, BasicTriangleFrame<T>::B, BasicTriangleFrame<T>::C);
}

using Point = BasicPoint<double>;
using LineForm = BasicLineForm<double>;
using Circle = BasicCircle<double>;
using Similarity = BasicSimilarity<double>;
using TriangleFrame = BasicTriangleFrame<double>;

}  // namespace chipencil
