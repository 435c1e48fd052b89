#ifndef SIR_ERRORS_HPP
#define SIR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sir {

// Failure classes surfaced by the library. Validation failures come from bad
// inputs or configuration; numerical failures arise from degenerate data that
// passed validation.
enum class ErrorCode {
  OutOfRegion,
  InsufficientRegion,
  EmptyRegion,
  EmptyDataset,
  DegenerateDataset,
  InsufficientReplicates,
  InsufficientSizes,
  InvalidThreshold,
  InvalidSchedule,
  InvalidConfig,
  UndefinedSubspace,
  IoError,
  SingularCovariance,
  NoSignal,
};

inline const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRegion: return "OutOfRegion";
    case ErrorCode::InsufficientRegion: return "InsufficientRegion";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::DegenerateDataset: return "DegenerateDataset";
    case ErrorCode::InsufficientReplicates: return "InsufficientReplicates";
    case ErrorCode::InsufficientSizes: return "InsufficientSizes";
    case ErrorCode::InvalidThreshold: return "InvalidThreshold";
    case ErrorCode::InvalidSchedule: return "InvalidSchedule";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::UndefinedSubspace: return "UndefinedSubspace";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::SingularCovariance: return "SingularCovariance";
    case ErrorCode::NoSignal: return "NoSignal";
  }
  return "Unknown";
}

// True for failures of the numerics rather than of the inputs. The CLI maps
// validation errors to exit code 2 and numerical errors to exit code 3.
inline bool is_numerical_error(ErrorCode code) {
  return code == ErrorCode::SingularCovariance || code == ErrorCode::NoSignal;
}

class SirError : public std::runtime_error {
 public:
  SirError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_error(ErrorCode code, const std::string& message) {
  throw SirError(code, message);
}

}  // namespace sir

#endif  // SIR_ERRORS_HPP
