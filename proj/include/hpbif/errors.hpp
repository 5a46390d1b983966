#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hpbif {

enum class ErrorCategory {
  InvalidInput,
  Domain,
  Degeneracy,
  Singularity,
  Convergence,
  Consistency,
  NotOnSigma,
  NotFound,
  Accuracy,
  IntegrationFailure,
  Parse,
};

constexpr std::string_view category_name(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::InvalidInput: return "invalid-input";
    case ErrorCategory::Domain: return "domain";
    case ErrorCategory::Degeneracy: return "degeneracy";
    case ErrorCategory::Singularity: return "singularity";
    case ErrorCategory::Convergence: return "convergence";
    case ErrorCategory::Consistency: return "consistency";
    case ErrorCategory::NotOnSigma: return "not-on-sigma";
    case ErrorCategory::NotFound: return "not-found";
    case ErrorCategory::Accuracy: return "accuracy";
    case ErrorCategory::IntegrationFailure: return "integration-failure";
    case ErrorCategory::Parse: return "parse";
  }
  return "unknown";
}

/// Base of every exception thrown by the library. The category is stable and
/// machine readable; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace hpbif
