#pragma once

#include <stdexcept>
#include <string>

namespace bedmorph {

/// Failure categories shared by the core library, the C API and the CLI.
/// The C API maps these onto bm_status codes; the CLI maps them onto
/// process exit codes and the machine-readable error JSON it prints.
enum class ErrorCode {
  InvalidArgument,
  NonFiniteInput,
  InsufficientSnapshots,
  RankDeficient,
  ZeroEigenvalue,
  FormatVersionMismatch,
  CorruptPayload,
  InputNotFound,
  TransectOutOfRange,
  DegenerateRange,
  ExcludedMode,
  BoundaryTimeIndex,
  GridTooCoarse,
  EmptySpectrum,
  NoContributingModes,
  AllExcluded,
  ZeroVariance,
  DegenerateSamples,
  ShapeMismatch,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace bedmorph
