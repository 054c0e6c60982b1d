#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lfd {

enum class Errc {
  MissingView,
  InconsistentDimensions,
  NonSquareGrid,
  BadMagic,
  UnsupportedPfmVariant,
  TruncatedPayload,
  OutOfRange,
  NoPeriodFound,
  EmptyPreimage,
  PreconditionViolated,
  DimensionMismatch,
  SolverNotConverged,
  BadConfig,
  Io,
};

std::string_view to_string(Errc code);

/// Error type thrown across the library. `code()` identifies the failure class
/// so callers (and the CLI) can branch without parsing messages.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }
  /// The detail text without the leading error-code name.
  const std::string& message() const noexcept { return message_; }

private:
  Errc code_;
  std::string message_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

} // namespace lfd
