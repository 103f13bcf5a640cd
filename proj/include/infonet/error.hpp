#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace infonet {

enum class ErrorCode {
  MalformedRow,
  MissingEntity,
  DuplicateSample,
  RosterViolation,
  InvalidConfig,
  LengthMismatch,
  SeriesTooShort,
  InconsistentGames,
  EmptyEnsemble,
  GridTooSmall,
  SchemaMismatch,
  Io,
};

std::string_view to_string(ErrorCode code);

// All user-facing failures of the library. `line` is the 1-based input line
// for parse errors and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::size_t line = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }

 private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace infonet
