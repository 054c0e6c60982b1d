#include "lfd/error.hpp"

namespace lfd {

std::string_view to_string(Errc code) {
  switch (code) {
  case Errc::MissingView: return "MissingView";
  case Errc::InconsistentDimensions: return "InconsistentDimensions";
  case Errc::NonSquareGrid: return "NonSquareGrid";
  case Errc::BadMagic: return "BadMagic";
  case Errc::UnsupportedPfmVariant: return "UnsupportedPfmVariant";
  case Errc::TruncatedPayload: return "TruncatedPayload";
  case Errc::OutOfRange: return "OutOfRange";
  case Errc::NoPeriodFound: return "NoPeriodFound";
  case Errc::EmptyPreimage: return "EmptyPreimage";
  case Errc::PreconditionViolated: return "PreconditionViolated";
  case Errc::DimensionMismatch: return "DimensionMismatch";
  case Errc::SolverNotConverged: return "SolverNotConverged";
  case Errc::BadConfig: return "BadConfig";
  case Errc::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

void fail(Errc code, const std::string& what) { throw Error(code, what); }

} // namespace lfd
