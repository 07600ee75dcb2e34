#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weier4 {

enum class Errc {
  NonFinite,
  InvalidArgument,
  // series
  BaseMismatch,
  DivisionByZeroConstantTerm,
  RootAtBranchPoint,
  CompositionOutsideRadius,
  NotInvertibleAtBase,
  OutsideTrustRadius,
  LogAtZero,
  // weierstrass
  ZeroF,
  FlavorMismatch,
  SuperconformalInput,
  DegenerateRecovery,
  // geometry
  DegeneratePoint,
  UmbilicLikeFrame,
  NotOrthogonal,
  GridTooSmall,
  // curvature
  InternalInconsistency,
  NotGeneralType,
  // canonize
  NotInvertible,
  NotCanonicalFirst,
  // correspond
  DegenerateG,
  NonPositiveNu,
  NotGeneralTypeField,
  PoleAtBase,
  NotUnitary,
  // gallery
  SyntaxError,
  UnknownIdentifier,
  UnsupportedProjection,
  IoError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonFinite: return "NonFinite";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::BaseMismatch: return "BaseMismatch";
    case Errc::DivisionByZeroConstantTerm: return "DivisionByZeroConstantTerm";
    case Errc::RootAtBranchPoint: return "RootAtBranchPoint";
    case Errc::CompositionOutsideRadius: return "CompositionOutsideRadius";
    case Errc::NotInvertibleAtBase: return "NotInvertibleAtBase";
    case Errc::OutsideTrustRadius: return "OutsideTrustRadius";
    case Errc::LogAtZero: return "LogAtZero";
    case Errc::ZeroF: return "ZeroF";
    case Errc::FlavorMismatch: return "FlavorMismatch";
    case Errc::SuperconformalInput: return "SuperconformalInput";
    case Errc::DegenerateRecovery: return "DegenerateRecovery";
    case Errc::DegeneratePoint: return "DegeneratePoint";
    case Errc::UmbilicLikeFrame: return "UmbilicLikeFrame";
    case Errc::NotOrthogonal: return "NotOrthogonal";
    case Errc::GridTooSmall: return "GridTooSmall";
    case Errc::InternalInconsistency: return "InternalInconsistency";
    case Errc::NotGeneralType: return "NotGeneralType";
    case Errc::NotInvertible: return "NotInvertible";
    case Errc::NotCanonicalFirst: return "NotCanonicalFirst";
    case Errc::DegenerateG: return "DegenerateG";
    case Errc::NonPositiveNu: return "NonPositiveNu";
    case Errc::NotGeneralTypeField: return "NotGeneralTypeField";
    case Errc::PoleAtBase: return "PoleAtBase";
    case Errc::NotUnitary: return "NotUnitary";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownIdentifier: return "UnknownIdentifier";
    case Errc::UnsupportedProjection: return "UnsupportedProjection";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure in the library is reported as an Error carrying an Errc.
/// Parser errors additionally carry the byte offset into the source text.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::size_t offset = npos)
      : std::runtime_error(what), code_(code), offset_(offset) {}

  Errc code() const noexcept { return code_; }
  std::size_t offset() const noexcept { return offset_; }
  bool has_offset() const noexcept { return offset_ != npos; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  Errc code_;
  std::size_t offset_;
};

}  // namespace weier4
