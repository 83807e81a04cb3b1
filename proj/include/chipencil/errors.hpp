#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chipencil {

// Reason codes shared by the library and the CLI. The CLI prints these
// verbatim, so renaming one is a breaking change.
enum class Errc {
  DegenerateTriangle,
  CoincidentPoints,
  ExponentOutOfRange,
  ZeroExponent,
  AtVertex,
  ZeroExponentExternal,
  ParallelAfterReflection,
  NotOnConic,
  SingularPoint,
  ZeroPolar,
  NotCentral,
  RankDeficient,
  LineOnConic,
  IsoscelesExcluded,
  ZeroSpanMixed,
  OnCriticalLine,
  OnSide,
  CenterIsFocus,
  InsideParabola,
  OnParabolaTangent,
  HitAtVertex,
  ParallelPolar,
  NotInsideParabola,
  NotRationalizable,
  InvalidConfig,
};

constexpr std::string_view to_string(Errc e) noexcept {
  switch (e) {
    case Errc::DegenerateTriangle: return "DegenerateTriangle";
    case Errc::CoincidentPoints: return "CoincidentPoints";
    case Errc::ExponentOutOfRange: return "ExponentOutOfRange";
    case Errc::ZeroExponent: return "ZeroExponent";
    case Errc::AtVertex: return "AtVertex";
    case Errc::ZeroExponentExternal: return "ZeroExponentExternal";
    case Errc::ParallelAfterReflection: return "ParallelAfterReflection";
    case Errc::NotOnConic: return "NotOnConic";
    case Errc::SingularPoint: return "SingularPoint";
    case Errc::ZeroPolar: return "ZeroPolar";
    case Errc::NotCentral: return "NotCentral";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::LineOnConic: return "LineOnConic";
    case Errc::IsoscelesExcluded: return "IsoscelesExcluded";
    case Errc::ZeroSpanMixed: return "ZeroSpanMixed";
    case Errc::OnCriticalLine: return "OnCriticalLine";
    case Errc::OnSide: return "OnSide";
    case Errc::CenterIsFocus: return "CenterIsFocus";
    case Errc::InsideParabola: return "InsideParabola";
    case Errc::OnParabolaTangent: return "OnParabolaTangent";
    case Errc::HitAtVertex: return "HitAtVertex";
    case Errc::ParallelPolar: return "ParallelPolar";
    case Errc::NotInsideParabola: return "NotInsideParabola";
    case Errc::NotRationalizable: return "NotRationalizable";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

class GeometryError : public std::runtime_error {
 public:
  GeometryError(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw GeometryError(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace chipencil
