#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace survbound {

enum class ErrorCode {
  InvalidInput,
  NonNormalizable,
  NegativeDensity,
  CutoffOutOfSupport,
  MomentDivergent,
  OrderTooLarge,
  InsufficientOrder,
  NonPositiveCorrelationMoment,
  NonPositiveEdgeMoment,
  QuadratureFailure,
  DegenerateEdge,
  RootMismatch,
  NoPositiveRoot,
  EmptyEnvelope,
  NegativeSupport,
  UnknownFigure,
};

const char* to_string(ErrorCode code);

/// Library-wide exception. `index()` carries the offending moment order
/// for the per-order error kinds (MomentDivergent{k} etc.).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<int> index = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<int> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<int> index_;
};

}  // namespace survbound
