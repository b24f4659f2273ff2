#pragma once

#include <stdexcept>
#include <string>

namespace absconv {

enum class Errc {
  kNonMetric,
  kEmptyDomain,
  kDimensionMismatch,
  kBadParams,
  kImproperInput,
  kInfiniteAtPoint,
  kNoWitness,
  kImproperProblem,
  kLevelAbovePrimal,
  kNotConvexCombinable,
  kImproperObjective,
  kNotSeparable,
  kUnbalanced,
  kUndefinedArithmetic,
  kInvalidArgument,
};

const char* to_string(Errc code) noexcept;

/// Domain error raised by every module. The code identifies the contract
/// that was violated; what() carries a human-readable reason.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& reason);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace absconv
