#pragma once

// Exact replay of the closed-form identities over the rationals. Lengths
// enter only through b^2 and c^2, so integer exponents stay rational when
// they are even, or when the squared length is itself a rational square.

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <string>

#include "chipencil/errors.hpp"

namespace chipencil::exact {

using Q = boost::multiprecision::cpp_rational;
using Z = boost::multiprecision::cpp_int;

struct QPoint {
  Q x;
  Q y;
};

struct QFrame {
  QPoint A;  // canonical apex, A.y > 0; B = (0, 0), C = (1, 0)

  Q b2() const { return (A.x - 1) * (A.x - 1) + A.y * A.y; }
  Q c2() const { return A.x * A.x + A.y * A.y; }
};

enum class Identity {
  SameSideMembership,  // circumcenter(A, M(k), M(k+t)) on the same-side member
  ExternalMembership,  // circumcenter(A, M'(k), M'(k+t)) on the same-side member
  MixedMembership,     // circumcenter(A, M'(k), M(k+t)) on the mixed member
  ContactZ,            // Z on the same-side member
  ContactV,
  TangencyZ,  // gradient at Z normal to the bisector of AB
  TangencyV,
};

constexpr const char* to_string(Identity id) {
  switch (id) {
    case Identity::SameSideMembership: return "same-side-membership";
    case Identity::ExternalMembership: return "external-membership";
    case Identity::MixedMembership: return "mixed-membership";
    case Identity::ContactZ: return "contact-z";
    case Identity::ContactV: return "contact-v";
    case Identity::TangencyZ: return "tangency-z";
    case Identity::TangencyV: return "tangency-v";
  }
  return "unknown";
}

using QConic = std::array<Q, 6>;

namespace detail {

inline bool exact_sqrt(const Z& n, Z& root) {
  if (n < 0) return false;
  root = boost::multiprecision::sqrt(n);
  return root * root == n;
}

inline Q integer_power(Q base, long n) {
  if (n < 0) {
    if (base == 0) fail(Errc::DegenerateTriangle, "zero length raised to a negative power");
    base = 1 / base;
    n = -n;
  }
  Q r = 1;
  while (n > 0) {
    if (n & 1) r *= base;
    base *= base;
    n >>= 1;
  }
  return r;
}

}  // namespace detail

// (sqrt(sq))^n, exact or NotRationalizable.
inline Q length_power(const Q& sq, long n) {
  if (n % 2 == 0) return detail::integer_power(sq, n / 2);
  Z rn, rd;
  if (!detail::exact_sqrt(numerator(sq), rn) || !detail::exact_sqrt(denominator(sq), rd)) {
    fail(Errc::NotRationalizable, "odd power of an irrational length");
  }
  return detail::integer_power(Q(rn, rd), n);
}

// c^k / (c^k + b^k) = 1 / (1 + (b/c)^k)
inline Q m_x(const QFrame& f, long k) { return 1 / (1 + length_power(f.b2() / f.c2(), k)); }

inline Q m_prime_x(const QFrame& f, long k) {
  const Q r = length_power(f.b2() / f.c2(), k);
  if (r == 1) fail(Errc::ZeroExponent, "M' is undefined for this exponent");
  return 1 / (1 - r);
}

inline QPoint circumcenter(const QPoint& p1, const QPoint& p2, const QPoint& p3) {
  const Q ux = p2.x - p1.x, uy = p2.y - p1.y;
  const Q vx = p3.x - p1.x, vy = p3.y - p1.y;
  const Q d = 2 * (ux * vy - uy * vx);
  if (d == 0) fail(Errc::DegenerateTriangle, "collinear points");
  const Q uu = ux * ux + uy * uy;
  const Q vv = vx * vx + vy * vy;
  return {p1.x + (vy * uu - uy * vv) / d, p1.y + (ux * vv - vx * uu) / d};
}

// Unnormalized member with coefficient groups (p - l)^2 and (p + l)^2,
// p = b^t, l = c^t; the mixed member swaps the groups.
inline QConic member(const QFrame& f, long t, bool mixed) {
  if (f.b2() == f.c2()) fail(Errc::IsoscelesExcluded, "pencil requires |AB| != |AC|");
  if (mixed && t == 0) fail(Errc::ZeroSpanMixed, "mixed members need a nonzero span");
  const Q p2 = length_power(f.b2(), 2 * t);
  const Q l2 = length_power(f.c2(), 2 * t);
  const Q pl = length_power(f.b2() * f.c2(), t);
  const Q d2 = p2 - 2 * pl + l2;
  const Q s2 = p2 + 2 * pl + l2;
  const Q minus2 = mixed ? s2 : d2;
  const Q plus2 = mixed ? d2 : s2;
  const Q xa = f.A.x, ya = f.A.y, c2 = f.c2();
  const Q w = 2 * xa - 1;
  return {minus2 * w * w - plus2,
          ya * minus2 * (8 * xa - 4),
          4 * ya * ya * minus2,
          -2 * c2 * minus2 * w + 2 * xa * plus2,
          -2 * ya * (2 * c2 * minus2 - plus2),
          c2 * (c2 * minus2 - plus2)};
}

inline Q eval(const QConic& u, const QPoint& p) {
  return u[0] * p.x * p.x + u[1] * p.x * p.y + u[2] * p.y * p.y + u[3] * p.x + u[4] * p.y + u[5];
}

inline QPoint gradient(const QConic& u, const QPoint& p) {
  return {2 * u[0] * p.x + u[1] * p.y + u[3], u[1] * p.x + 2 * u[2] * p.y + u[4]};
}

inline QPoint contact_z(const QFrame& f) { return {0, f.c2() / (2 * f.A.y)}; }
inline QPoint contact_v(const QFrame& f) { return {1, f.b2() / (2 * f.A.y)}; }

// Exact truth of the named identity. k is ignored by the contact and
// tangency identities.
inline bool evaluate(Identity id, const QFrame& f, long k, long t) {
  if (f.A.y <= 0) fail(Errc::DegenerateTriangle, "apex must lie above BC");
  const QPoint a = f.A;
  switch (id) {
    case Identity::SameSideMembership: {
      const QPoint o = circumcenter(a, {m_x(f, k), 0}, {m_x(f, k + t), 0});
      return eval(member(f, t, false), o) == 0;
    }
    case Identity::ExternalMembership: {
      const QPoint o = circumcenter(a, {m_prime_x(f, k), 0}, {m_prime_x(f, k + t), 0});
      return eval(member(f, t, false), o) == 0;
    }
    case Identity::MixedMembership: {
      const QPoint o = circumcenter(a, {m_prime_x(f, k), 0}, {m_x(f, k + t), 0});
      return eval(member(f, t, true), o) == 0;
    }
    case Identity::ContactZ: return eval(member(f, t, false), contact_z(f)) == 0;
    case Identity::ContactV: return eval(member(f, t, false), contact_v(f)) == 0;
    case Identity::TangencyZ:
    case Identity::TangencyV: {
      const bool z = id == Identity::TangencyZ;
      const QPoint g = gradient(member(f, t, false), z ? contact_z(f) : contact_v(f));
      // Normal of the perpendicular bisector of AB is A - B, of AC is A - C.
      const QPoint n = z ? a : QPoint{a.x - 1, a.y};
      const bool nonzero = g.x != 0 || g.y != 0;
      return nonzero && g.x * n.y - g.y * n.x == 0;
    }
  }
  return false;
}

}  // namespace chipencil::exact
