#pragma once

// Generalized cevian feet on line BC: M(x) on the segment with
// BM : MC = (c/b)^x, and M'(x) on the line outside the segment with the same
// ratio. Everything is expressed in the canonical frame.

#include <cmath>
#include <string>
#include <utility>

#include "chipencil/errors.hpp"
#include "chipencil/geom_core.hpp"
#include "chipencil/tolerances.hpp"

namespace chipencil {

enum class FootFamily { Internal, External };

constexpr const char* to_string(FootFamily f) {
  return f == FootFamily::Internal ? "Internal" : "External";
}

template <class T>
struct BasicFootPoint {
  FootFamily family = FootFamily::Internal;
  T exponent = 0;
  BasicPoint<T> location;
};

using FootPoint = BasicFootPoint<double>;

namespace detail {

template <class T>
T checked_log_power(const BasicTriangleFrame<T>& frame, scalar_t<T> x) {
  const T v = x * frame.log_ratio();
  if (!std::isfinite(v) || std::abs(v) > tol::kExponentLimit) {
    fail(Errc::ExponentOutOfRange, "|x ln(c/b)| exceeds " + std::to_string(tol::kExponentLimit));
  }
  return v;
}

template <class T>
void require_scalene(const BasicTriangleFrame<T>& frame) {
  if (frame.is_isosceles()) fail(Errc::IsoscelesExcluded, "requires |AB| != |AC|");
}

}  // namespace detail

// x-coordinate c^x / (c^x + b^x), evaluated as 1 / (1 + e^{-x ln(c/b)}).
template <class T>
BasicFootPoint<T> m_point(const BasicTriangleFrame<T>& frame, scalar_t<T> x) {
  const T v = detail::checked_log_power(frame, x);
  return {FootFamily::Internal, x, {1 / (1 + std::exp(-v)), 0}};
}

// x-coordinate c^x / (c^x - b^x) = -1 / expm1(-x ln(c/b)).
template <class T>
BasicFootPoint<T> m_prime_point(const BasicTriangleFrame<T>& frame, scalar_t<T> x) {
  if (x == 0) fail(Errc::ZeroExponent, "M' is undefined for exponent 0");
  detail::require_scalene(frame);
  const T v = detail::checked_log_power(frame, x);
  return {FootFamily::External, x, {-1 / std::expm1(-v), 0}};
}

template <class T>
BasicFootPoint<T> foot_point(const BasicTriangleFrame<T>& frame, FootFamily family, scalar_t<T> x) {
  return family == FootFamily::Internal ? m_point(frame, x) : m_prime_point(frame, x);
}

// Inverse of m_point / m_prime_point: which family a point of line BC
// belongs to and its exponent.
template <class T>
std::pair<FootFamily, T> exponent_of_location(const BasicTriangleFrame<T>& frame, scalar_t<T> x_coord) {
  if (std::abs(x_coord) <= T(tol::kPoint) || std::abs(x_coord - 1) <= T(tol::kPoint)) {
    fail(Errc::AtVertex, "location coincides with B or C");
  }
  detail::require_scalene(frame);
  const T lr = frame.log_ratio();
  if (x_coord > 0 && x_coord < 1) {
    return {FootFamily::Internal, (std::log(x_coord) - std::log1p(-x_coord)) / lr};
  }
  const T log_ratio = std::log(std::abs(x_coord)) - std::log(std::abs(x_coord - 1));
  if (std::abs(log_ratio) <= T(1e-14)) {
    fail(Errc::ZeroExponentExternal, "external foot at infinity");
  }
  return {FootFamily::External, log_ratio / lr};
}

enum class ReflectionStep {
  NegateIndex,      // reflect over M(0): exponent k -> -k
  IsogonalAdvance,  // negate, then reflect the cevian over the A-bisector: k -> k + 2
};

template <class T>
BasicFootPoint<T> construct_by_reflection(const BasicTriangleFrame<T>& frame,
                                          const BasicFootPoint<T>& known, ReflectionStep step) {
  using P = BasicPoint<T>;
  using F = BasicTriangleFrame<T>;
  const P median_foot{T(0.5), 0};
  BasicFootPoint<T> negated{known.family, -known.exponent,
                            reflect_point_over_point(known.location, median_foot)};
  negated.location.y = 0;
  if (step == ReflectionStep::NegateIndex) return negated;

  const P a = frame.A;
  const P ub = (1 / norm(F::B - a)) * (F::B - a);
  const P uc = (1 / norm(F::C - a)) * (F::C - a);
  const P bis = ub + uc;
  const auto bisector = BasicLineForm<T>::from_coefficients(bis.y, -bis.x, cross(bis, a));

  const P image = reflect_point_over_line(negated.location, bisector);
  const P d = image - a;
  const T target = known.exponent + 2;
  if ((known.family == FootFamily::External && target == 0) ||
      std::abs(d.y) <= T(1e-12) * norm(d)) {
    fail(Errc::ParallelAfterReflection, "reflected cevian is parallel to BC");
  }
  const T x = a.x - a.y * d.x / d.y;
  return {known.family, target, {x, 0}};
}

}  // namespace chipencil
