#pragma once

// General second-degree curves A x^2 + B xy + C y^2 + D x + E y + F = 0:
// evaluation, affine classification, tangent and polar lines, centers,
// line intersections and a five-point fit.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "chipencil/errors.hpp"
#include "chipencil/geom_core.hpp"
#include "chipencil/tolerances.hpp"

namespace chipencil {

template <class T>
using BasicConicCoefficients = std::array<T, 6>;  // A, B, C, D, E, F

enum class ConicClass { Ellipse, Parabola, Hyperbola, DegenerateLines, DegeneratePoint, Empty };

constexpr const char* to_string(ConicClass c) {
  switch (c) {
    case ConicClass::Ellipse: return "Ellipse";
    case ConicClass::Parabola: return "Parabola";
    case ConicClass::Hyperbola: return "Hyperbola";
    case ConicClass::DegenerateLines: return "DegenerateLines";
    case ConicClass::DegeneratePoint: return "DegeneratePoint";
    case ConicClass::Empty: return "Empty";
  }
  return "Unknown";
}

constexpr bool is_degenerate(ConicClass c) {
  return c == ConicClass::DegenerateLines || c == ConicClass::DegeneratePoint ||
         c == ConicClass::Empty;
}

// Coefficients scaled so the largest magnitude is exactly +1 (the first
// such entry wins ties).
template <class T>
class BasicConic {
 public:
  explicit BasicConic(const BasicConicCoefficients<T>& raw) : k_(raw) {
    std::size_t big = 0;
    for (std::size_t i = 1; i < k_.size(); ++i) {
      if (std::abs(k_[i]) > std::abs(k_[big])) big = i;
    }
    const T m = k_[big];
    if (!(std::abs(m) > 0) || !std::isfinite(m)) {
      fail(Errc::RankDeficient, "conic coefficients are all zero or not finite");
    }
    for (T& v : k_) v /= m;
    k_[big] = 1;
    for (T& v : k_) {
      if (v == 0) v = 0;
    }
  }

  BasicConic(scalar_t<T> a, scalar_t<T> b, scalar_t<T> c, scalar_t<T> d, scalar_t<T> e,
             scalar_t<T> f)
      : BasicConic(BasicConicCoefficients<T>{a, b, c, d, e, f}) {}

  const BasicConicCoefficients<T>& coefficients() const { return k_; }
  T A() const { return k_[0]; }
  T B() const { return k_[1]; }
  T C() const { return k_[2]; }
  T D() const { return k_[3]; }
  T E() const { return k_[4]; }
  T F() const { return k_[5]; }

  T discriminant() const { return k_[1] * k_[1] - 4 * k_[0] * k_[2]; }

  // Symmetric 3x3 matrix of the form in homogeneous coordinates.
  Eigen::Matrix<T, 3, 3> matrix() const {
    Eigen::Matrix<T, 3, 3> m;
    m << A(), B() / 2, D() / 2,  //
        B() / 2, C(), E() / 2,   //
        D() / 2, E() / 2, F();
    return m;
  }

  BasicPoint<T> gradient(BasicPoint<T> p) const {
    return {2 * A() * p.x + B() * p.y + D(), B() * p.x + 2 * C() * p.y + E()};
  }

 private:
  BasicConicCoefficients<T> k_;
};

using ConicCoefficients = BasicConicCoefficients<double>;
using Conic = BasicConic<double>;

template <class T = double>
std::array<T, 6> monomials(BasicPoint<T> p) {
  return {p.x * p.x, p.x * p.y, p.y * p.y, p.x, p.y, T(1)};
}

// Value of the normalized form at p.
template <class T = double>
T conic_eval(const BasicConic<T>& u, BasicPoint<T> p) {
  const auto m = monomials(p);
  T s = 0;
  for (std::size_t i = 0; i < 6; ++i) s += u.coefficients()[i] * m[i];
  return s;
}

// |F(p)| divided by the sum of the absolute values of its terms: a
// scale-free measure that stays meaningful for far-away points.
template <class T = double>
T relative_residual(const BasicConic<T>& u, BasicPoint<T> p) {
  const auto m = monomials(p);
  T s = 0;
  T mag = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    const T term = u.coefficients()[i] * m[i];
    s += term;
    mag += std::abs(term);
  }
  return mag > 0 ? std::abs(s) / mag : T(0);
}

// Product of two line forms as a (non-normalized) quadratic.
template <class T = double>
BasicConicCoefficients<T> line_product(const BasicLineForm<T>& l, const BasicLineForm<T>& m) {
  return {l.a() * m.a(),
          l.a() * m.b() + l.b() * m.a(),
          l.b() * m.b(),
          l.a() * m.c() + l.c() * m.a(),
          l.b() * m.c() + l.c() * m.b(),
          l.c() * m.c()};
}

template <class T = double>
BasicConicCoefficients<T> combine(scalar_t<T> s, const BasicConicCoefficients<T>& u, scalar_t<T> t,
                                  const BasicConicCoefficients<T>& v) {
  BasicConicCoefficients<T> r{};
  for (std::size_t i = 0; i < 6; ++i) r[i] = s * u[i] + t * v[i];
  return r;
}

// Distance between two conics as point sets: max coefficient difference,
// minimized over the overall sign.
template <class T = double>
T coefficient_distance(const BasicConic<T>& u, const BasicConic<T>& v) {
  T plus = 0;
  T minus = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    plus = std::max(plus, std::abs(u.coefficients()[i] - v.coefficients()[i]));
    minus = std::max(minus, std::abs(u.coefficients()[i] + v.coefficients()[i]));
  }
  return std::min(plus, minus);
}

template <class T = double>
T cosine_similarity(const BasicConic<T>& u, const BasicConic<T>& v) {
  T uv = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < 6; ++i) {
    uv += u.coefficients()[i] * v.coefficients()[i];
    uu += u.coefficients()[i] * u.coefficients()[i];
    vv += v.coefficients()[i] * v.coefficients()[i];
  }
  return std::abs(uv) / std::sqrt(uu * vv);
}

// Affine classification. Degeneracy is decided by the ratio of the smallest
// to the largest eigenvalue magnitude of the 3x3 matrix; the parabolic band
// is |B^2 - 4AC| <= kDiscriminant on normalized coefficients.
template <class T = double>
ConicClass conic_classify(const BasicConic<T>& u) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<T, 3, 3>> es(u.matrix(), Eigen::EigenvaluesOnly);
  std::array<T, 3> ev{es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
  std::sort(ev.begin(), ev.end(), [](T a, T b) { return std::abs(a) < std::abs(b); });
  const T big = std::abs(ev[2]);
  const T disc = u.discriminant();
  const T rank_tol = T(tol::kRank) * big;
  const T band = T(tol::kDiscriminant);

  if (std::abs(ev[0]) <= rank_tol) {
    if (std::abs(ev[1]) <= rank_tol) return ConicClass::DegenerateLines;  // double line
    if ((ev[1] > 0) != (ev[2] > 0)) return ConicClass::DegenerateLines;
    return disc < -band ? ConicClass::DegeneratePoint : ConicClass::Empty;
  }
  if (disc > band) return ConicClass::Hyperbola;
  if (disc >= -band) return ConicClass::Parabola;
  const bool definite = (ev[0] > 0) == (ev[1] > 0) && (ev[1] > 0) == (ev[2] > 0);
  return definite ? ConicClass::Empty : ConicClass::Ellipse;
}

// Polar line of p: the line whose coefficients are M * (x, y, 1).
template <class T = double>
BasicLineForm<T> polar_line(const BasicConic<T>& u, BasicPoint<T> p) {
  const T a = u.A() * p.x + u.B() * p.y / 2 + u.D() / 2;
  const T b = u.B() * p.x / 2 + u.C() * p.y + u.E() / 2;
  const T c = u.D() * p.x / 2 + u.E() * p.y / 2 + u.F();
  if (std::hypot(a, b) <= T(1e-12) * std::max(T(1), std::abs(c))) {
    fail(Errc::ZeroPolar, "point is a center of the conic");
  }
  return BasicLineForm<T>::from_coefficients(a, b, c);
}

template <class T = double>
BasicLineForm<T> tangent_line_at(const BasicConic<T>& u, BasicPoint<T> p,
                                 scalar_t<T> on_tol = T(tol::kOnConic)) {
  if (relative_residual(u, p) > on_tol) fail(Errc::NotOnConic, "point is not on the conic");
  const BasicPoint<T> g = u.gradient(p);
  if (norm(g) <= T(1e-12) * std::max(T(1), norm(p))) {
    fail(Errc::SingularPoint, "gradient vanishes at the point");
  }
  return polar_line(u, p);
}

template <class T = double>
BasicPoint<T> conic_center(const BasicConic<T>& u) {
  const T det = 4 * u.A() * u.C() - u.B() * u.B();
  if (std::abs(det) <= T(tol::kDiscriminant)) fail(Errc::NotCentral, "conic has no unique center");
  return {(-u.D() * 2 * u.C() + u.B() * u.E()) / det, (-2 * u.A() * u.E() + u.B() * u.D()) / det};
}

// Conic through five points, from the null vector of the 5x6 incidence
// matrix. Points are centered and scaled first.
template <class T = double>
BasicConic<T> conic_from_five_points(std::span<const BasicPoint<T>, 5> pts) {
  BasicPoint<T> mean{};
  for (const auto& p : pts) mean = mean + T(0.2) * p;
  T spread = 0;
  for (const auto& p : pts) spread += T(0.2) * distance(p, mean);
  if (!(spread > 0)) fail(Errc::RankDeficient, "all points coincide");
  const T s = std::sqrt(T(2)) / spread;

  using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
  Mat m(5, 6);
  for (int i = 0; i < 5; ++i) {
    const BasicPoint<T> q = s * (pts[static_cast<std::size_t>(i)] - mean);
    const auto row = monomials(q);
    for (int j = 0; j < 6; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(4) <= T(1e-8) * sv(0)) fail(Errc::RankDeficient, "null space is not one-dimensional");
  const Eigen::Matrix<T, Eigen::Dynamic, 1> n = svd.matrixV().col(5);

  const T a = n(0), b = n(1), c = n(2), d = n(3), e = n(4), f = n(5);
  const T mx = mean.x, my = mean.y, s2 = s * s;
  return BasicConic<T>(a * s2, b * s2, c * s2,                     //
                       s2 * (-2 * a * mx - b * my) + s * d,        //
                       s2 * (-b * mx - 2 * c * my) + s * e,        //
                       s2 * (a * mx * mx + b * mx * my + c * my * my)  //
                           - s * (d * mx + e * my) + f);
}

template <class T = double>
BasicConic<T> conic_from_five_points(const std::array<BasicPoint<T>, 5>& pts) {
  return conic_from_five_points(std::span<const BasicPoint<T>, 5>(pts));
}

template <class T = double>
std::vector<BasicPoint<T>> line_conic_intersections(const BasicConic<T>& u, const BasicLineForm<T>& l) {
  const BasicPoint<T> p0 = l.anchor();
  const BasicPoint<T> d = l.direction();
  const T alpha = u.A() * d.x * d.x + u.B() * d.x * d.y + u.C() * d.y * d.y;
  const T beta = 2 * u.A() * p0.x * d.x + u.B() * (p0.x * d.y + p0.y * d.x) +
                 2 * u.C() * p0.y * d.y + u.D() * d.x + u.E() * d.y;
  const T gamma = conic_eval(u, p0);
  const T ref = std::max(T(1), dot(p0, p0));

  if (std::max({std::abs(alpha), std::abs(beta), std::abs(gamma)}) <= T(1e-12) * ref) {
    fail(Errc::LineOnConic, "line is a component of the conic");
  }
  const auto at = [&](T s) { return p0 + s * d; };
  if (std::abs(alpha) <= T(1e-14) * ref) {
    if (std::abs(beta) <= T(1e-14) * ref) return {};
    return {at(-gamma / beta)};
  }
  const T disc = beta * beta - 4 * alpha * gamma;
  const T band = T(1e-12) * (beta * beta + std::abs(4 * alpha * gamma));
  if (disc < -band) return {};
  if (disc <= band) return {at(-beta / (2 * alpha))};
  const T q = -(beta + std::copysign(std::sqrt(disc), beta)) / 2;
  T s1 = q / alpha;
  T s2 = gamma / q;
  if (s1 > s2) std::swap(s1, s2);
  return {at(s1), at(s2)};
}

}  // namespace chipencil
