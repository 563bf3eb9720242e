#include "deme/error.hpp"

namespace deme {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyTitle: return "empty_title";
    case ErrorCode::EmptyBody: return "empty_body";
    case ErrorCode::EmptyHeader: return "empty_header";
    case ErrorCode::EmptyName: return "empty_name";
    case ErrorCode::EmptyQuestion: return "empty_question";
    case ErrorCode::SpanOutOfRange: return "span_out_of_range";
    case ErrorCode::InvalidSpan: return "invalid_span";
    case ErrorCode::InvalidScript: return "invalid_script";
    case ErrorCode::LengthMismatch: return "length_mismatch";
    case ErrorCode::InvalidEncoding: return "invalid_encoding";
    case ErrorCode::InvalidRule: return "invalid_rule";
    case ErrorCode::EmptyEligibleSet: return "empty_eligible_set";
    case ErrorCode::NotEligible: return "not_eligible";
    case ErrorCode::CrossDocumentParent: return "cross_document_parent";
    case ErrorCode::BadRequest: return "bad_request";
    case ErrorCode::UnknownMember: return "unknown_member";
    case ErrorCode::UnknownDocument: return "unknown_document";
    case ErrorCode::UnknownVersion: return "unknown_version";
    case ErrorCode::UnknownComment: return "unknown_comment";
    case ErrorCode::UnknownParent: return "unknown_parent";
    case ErrorCode::UnknownPoll: return "unknown_poll";
    case ErrorCode::PollClosed: return "poll_closed";
    case ErrorCode::NonEmptyTarget: return "non_empty_target";
    case ErrorCode::Unauthenticated: return "unauthenticated";
    case ErrorCode::StorageFailure: return "storage_failure";
    case ErrorCode::CorruptLog: return "corrupt_log";
    case ErrorCode::SchemaMismatch: return "schema_mismatch";
  }
  return "internal";
}

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownMember:
    case ErrorCode::UnknownDocument:
    case ErrorCode::UnknownVersion:
    case ErrorCode::UnknownComment:
    case ErrorCode::UnknownParent:
    case ErrorCode::UnknownPoll:
      return 404;
    case ErrorCode::PollClosed:
    case ErrorCode::NonEmptyTarget:
      return 409;
    case ErrorCode::Unauthenticated:
      return 401;
    case ErrorCode::StorageFailure:
    case ErrorCode::CorruptLog:
    case ErrorCode::SchemaMismatch:
      return 500;
    default:
      return 400;
  }
}

}  // namespace deme
