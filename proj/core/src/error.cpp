#include "dirquant/error.hpp"

namespace dirquant {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kCutLocus: return "CutLocus";
    case ErrorKind::kRankDeficient: return "RankDeficient";
    case ErrorKind::kConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::kQuadratureFailure: return "QuadratureFailure";
    case ErrorKind::kNormalizationFailure: return "NormalizationFailure";
    case ErrorKind::kSamplerStall: return "SamplerStall";
    case ErrorKind::kDegenerateSample: return "DegenerateSample";
    case ErrorKind::kPoleDegenerate: return "PoleDegenerate";
    case ErrorKind::kTooFewPoints: return "TooFewPoints";
    case ErrorKind::kSingularCovariance: return "SingularCovariance";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorKind kind, const std::string& message,
                           std::optional<std::size_t> index) {
  std::string out(to_string(kind));
  out += ": ";
  out += message;
  if (index) {
    out += " (point ";
    out += std::to_string(*index);
    out += ")";
  }
  return out;
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<std::size_t> index)
    : std::runtime_error(format_message(kind, message, index)),
      kind_(kind),
      index_(index),
      bare_message_(message) {}

Error Error::at_index(std::size_t index) const {
  return Error(kind_, bare_message_, index);
}

}  // namespace dirquant
