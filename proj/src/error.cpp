#include "absconv/error.hpp"

namespace absconv {

const char* to_string(Errc code) noexcept {
  switch (code) {
    case Errc::kNonMetric: return "NonMetric";
    case Errc::kEmptyDomain: return "EmptyDomain";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kBadParams: return "BadParams";
    case Errc::kImproperInput: return "ImproperInput";
    case Errc::kInfiniteAtPoint: return "InfiniteAtPoint";
    case Errc::kNoWitness: return "NoWitness";
    case Errc::kImproperProblem: return "ImproperProblem";
    case Errc::kLevelAbovePrimal: return "LevelAbovePrimal";
    case Errc::kNotConvexCombinable: return "NotConvexCombinable";
    case Errc::kImproperObjective: return "ImproperObjective";
    case Errc::kNotSeparable: return "NotSeparable";
    case Errc::kUnbalanced: return "Unbalanced";
    case Errc::kUndefinedArithmetic: return "UndefinedArithmetic";
    case Errc::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& reason)
    : std::runtime_error(std::string(to_string(code)) + ": " + reason), code_(code) {}

}  // namespace absconv
