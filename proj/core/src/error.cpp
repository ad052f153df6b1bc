#include "blab/error.hpp"

namespace blab {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::NonPositiveSpacing: return "NonPositiveSpacing";
    case Errc::EmptyRasterization: return "EmptyRasterization";
    case Errc::PointOutsideDomain: return "PointOutsideDomain";
    case Errc::UnsupportedSpec: return "UnsupportedSpec";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::BallTooCloseToBoundary: return "BallTooCloseToBoundary";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::PoleTooCloseToBoundary: return "PoleTooCloseToBoundary";
    case Errc::UnsupportedFactor: return "UnsupportedFactor";
    case Errc::EmptySublevel: return "EmptySublevel";
    case Errc::StencilOutsideDomain: return "StencilOutsideDomain";
    case Errc::GramNotPD: return "GramNotPD";
    case Errc::BasisLargerThanQuadrature: return "BasisLargerThanQuadrature";
    case Errc::NoUsableCollars: return "NoUsableCollars";
    case Errc::DivergentNorm: return "DivergentNorm";
    case Errc::DegenerateKernel: return "DegenerateKernel";
    case Errc::Disconnected: return "Disconnected";
    case Errc::TooFewLevels: return "TooFewLevels";
    case Errc::AllInconclusive: return "AllInconclusive";
    case Errc::FixtureUnavailable: return "FixtureUnavailable";
    case Errc::DegenerateSet: return "DegenerateSet";
    case Errc::InvalidRatios: return "InvalidRatios";
    case Errc::DimOutOfRange: return "DimOutOfRange";
    case Errc::DidNotEscape: return "DidNotEscape";
    case Errc::DerivativeOverflow: return "DerivativeOverflow";
    case Errc::ZeroGradient: return "ZeroGradient";
    case Errc::InsufficientEscapes: return "InsufficientEscapes";
    case Errc::IoFailure: return "IoFailure";
    case Errc::CorruptEntry: return "CorruptEntry";
    case Errc::Usage: return "Usage";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

}  // namespace blab
