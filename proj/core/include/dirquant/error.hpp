#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dirquant {

enum class ErrorKind {
  kInvalidArgument,
  kCutLocus,
  kRankDeficient,
  kConvergenceFailure,
  kQuadratureFailure,
  kNormalizationFailure,
  kSamplerStall,
  kDegenerateSample,
  kPoleDegenerate,
  kTooFewPoints,
  kSingularCovariance,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library. `index()` identifies the offending
// observation when the failure is tied to one point of a sample.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<std::size_t> index = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  std::optional<std::size_t> index() const noexcept { return index_; }
  // Message without the kind prefix and index suffix.
  const std::string& message() const noexcept { return bare_message_; }

  // Same error, tagged with the position of the point that triggered it.
  Error at_index(std::size_t index) const;

 private:
  ErrorKind kind_;
  std::optional<std::size_t> index_;
  std::string bare_message_;
};

}  // namespace dirquant
