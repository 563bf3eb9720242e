#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace deme {

enum class ErrorCode {
  // validation
  EmptyTitle,
  EmptyBody,
  EmptyHeader,
  EmptyName,
  EmptyQuestion,
  SpanOutOfRange,
  InvalidSpan,
  InvalidScript,
  LengthMismatch,
  InvalidEncoding,
  InvalidRule,
  EmptyEligibleSet,
  NotEligible,
  CrossDocumentParent,
  BadRequest,
  // lookup
  UnknownMember,
  UnknownDocument,
  UnknownVersion,
  UnknownComment,
  UnknownParent,
  UnknownPoll,
  // conflict
  PollClosed,
  NonEmptyTarget,
  // identity
  Unauthenticated,
  // storage
  StorageFailure,
  CorruptLog,
  SchemaMismatch,
};

/// Machine-readable snake_case name, as carried in API error bodies.
std::string_view error_code_name(ErrorCode code);

/// HTTP status used by the API for a given error.
int http_status(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Raised while loading a log or archive; `seq` is the first record that
/// could not be read or folded.
class CorruptLogError : public Error {
public:
  CorruptLogError(std::uint64_t seq, const std::string& detail)
    : Error(ErrorCode::CorruptLog,
            "corrupt log record at seq " + std::to_string(seq) + ": " + detail),
      seq_(seq) {}

  std::uint64_t seq() const noexcept { return seq_; }

private:
  std::uint64_t seq_;
};

}  // namespace deme
