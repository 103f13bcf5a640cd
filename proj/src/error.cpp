#include "infonet/error.hpp"

namespace infonet {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::MissingEntity: return "MissingEntity";
    case ErrorCode::DuplicateSample: return "DuplicateSample";
    case ErrorCode::RosterViolation: return "RosterViolation";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::InconsistentGames: return "InconsistentGames";
    case ErrorCode::EmptyEnsemble: return "EmptyEnsemble";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::SchemaMismatch: return "SchemaMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {
std::string decorate(ErrorCode code, const std::string& what, std::size_t line) {
  std::string msg(to_string(code));
  if (line > 0) msg += " (line " + std::to_string(line) + ")";
  msg += ": ";
  msg += what;
  return msg;
}
}  // namespace

Error::Error(ErrorCode code, const std::string& what, std::size_t line)
    : std::runtime_error(decorate(code, what, line)), code_(code), line_(line) {}

}  // namespace infonet
