#include "survbound/error.hpp"

#include <atomic>

#include "survbound/quadrature.hpp"

namespace survbound {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NonNormalizable: return "NonNormalizable";
    case ErrorCode::NegativeDensity: return "NegativeDensity";
    case ErrorCode::CutoffOutOfSupport: return "CutoffOutOfSupport";
    case ErrorCode::MomentDivergent: return "MomentDivergent";
    case ErrorCode::OrderTooLarge: return "OrderTooLarge";
    case ErrorCode::InsufficientOrder: return "InsufficientOrder";
    case ErrorCode::NonPositiveCorrelationMoment: return "NonPositiveCorrelationMoment";
    case ErrorCode::NonPositiveEdgeMoment: return "NonPositiveEdgeMoment";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::DegenerateEdge: return "DegenerateEdge";
    case ErrorCode::RootMismatch: return "RootMismatch";
    case ErrorCode::NoPositiveRoot: return "NoPositiveRoot";
    case ErrorCode::EmptyEnvelope: return "EmptyEnvelope";
    case ErrorCode::NegativeSupport: return "NegativeSupport";
    case ErrorCode::UnknownFigure: return "UnknownFigure";
  }
  return "Unknown";
}

namespace quad {

namespace {
std::atomic<double> g_abs_tolerance{1e-11};
}

double default_abs_tolerance() { return g_abs_tolerance.load(std::memory_order_relaxed); }

void set_default_abs_tolerance(double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidInput, "quadrature tolerance must be positive");
  g_abs_tolerance.store(tol, std::memory_order_relaxed);
}

}  // namespace quad
}  // namespace survbound
