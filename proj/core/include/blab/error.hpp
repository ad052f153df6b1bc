#pragma once

#include <stdexcept>
#include <string>

namespace blab {

enum class Errc {
  NonPositiveSpacing,
  EmptyRasterization,
  PointOutsideDomain,
  UnsupportedSpec,
  InvalidSpec,
  BallTooCloseToBoundary,
  NoConvergence,
  PoleTooCloseToBoundary,
  UnsupportedFactor,
  EmptySublevel,
  StencilOutsideDomain,
  GramNotPD,
  BasisLargerThanQuadrature,
  NoUsableCollars,
  DivergentNorm,
  DegenerateKernel,
  Disconnected,
  TooFewLevels,
  AllInconclusive,
  FixtureUnavailable,
  DegenerateSet,
  InvalidRatios,
  DimOutOfRange,
  DidNotEscape,
  DerivativeOverflow,
  ZeroGradient,
  InsufficientEscapes,
  IoFailure,
  CorruptEntry,
  Usage,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace blab
