#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace botsentinel {

// Library error carrying a short machine-readable code alongside the message.
// The CLI prints both on a single line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

namespace errc {
inline constexpr const char* kInvalidArgument = "invalid_argument";
inline constexpr const char* kParse = "parse_error";
inline constexpr const char* kDuplicateId = "duplicate_id";
inline constexpr const char* kInsufficientData = "insufficient_data";
inline constexpr const char* kDimensionMismatch = "dimension_mismatch";
inline constexpr const char* kNotConverged = "not_converged";
inline constexpr const char* kFeatureMismatch = "feature_mismatch";
inline constexpr const char* kMissingArtifact = "missing_artifact";
inline constexpr const char* kIo = "io_error";
}  // namespace errc

}  // namespace botsentinel
