#pragma once

// Numeric bands used across the library. The verify module reads its
// defaults from here so every threshold is auditable in one place.

namespace chipencil::tol {

// Collinearity: |signed area| < kCollinear * (max pairwise distance)^2.
inline constexpr double kCollinear = 1e-12;

// Generic closeness for points/feet expressed in canonical units.
inline constexpr double kPoint = 1e-12;

// Tangency band for circle/line intersection, relative to max(1, radius).
inline constexpr double kTangency = 1e-9;

// Exponent overflow guard on |x * ln(c/b)|.
inline constexpr double kExponentLimit = 700.0;

// |b - c| at or below this is treated as isosceles.
inline constexpr double kIsosceles = 1e-12;

// Conic classification bands (after coefficient normalization).
inline constexpr double kDiscriminant = 1e-10;
inline constexpr double kRank = 1e-10;

// Relative residual accepted as "on the conic".
inline constexpr double kOnConic = 1e-9;

// Region boundaries: |normalized line form| or |normalized parabola form|.
inline constexpr double kBoundary = 1e-9;

// Relative tolerance for span equality and the lambda oracle.
inline constexpr double kSpanEqual = 1e-7;
inline constexpr double kLambdaEqual = 1e-7;

// ParallelPolar detection: |sin| of the angle between line(vertex, P) and
// the polar of P.
inline constexpr double kParallel = 1e-9;

}  // namespace chipencil::tol
