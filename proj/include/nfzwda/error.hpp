#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nfzwda {

enum class ErrorCode {
  EmptyText,
  MissingRoot,
  UnreadableFile,
  EmptyCorpus,
  IoError,
  FormatError,
  DuplicateWord,
  InvalidArgument,
  MixedConfig,
  ConfigMismatch,
  SingleClass,
  EmptyTraining,
  EmptyTest,
  UnknownAuthor,
  NoSegments,
  EmptyResults,
};

const char* to_string(ErrorCode code) noexcept;

/// Library error. Every failure the library reports carries a code so that
/// callers (CLI, bindings, tests) can branch on it without string matching.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        line_(line) {}

  ErrorCode code() const noexcept { return code_; }

  /// 1-based line number for FormatError, 0 otherwise.
  std::size_t line() const noexcept { return line_; }

private:
  ErrorCode code_;
  std::size_t line_;
};

}  // namespace nfzwda
