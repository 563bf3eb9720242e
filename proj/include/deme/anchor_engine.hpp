#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Character-level edit scripts between document versions and migration of
// comment spans across them. All offsets are code point indices.
namespace deme::anchor {

/// Half-open code point range [start, end). Valid spans are non-empty.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - start; }
  friend bool operator==(const Span&, const Span&) = default;
};

/// Throws SpanOutOfRange if the span exceeds `length`, InvalidSpan if empty.
void validate_span(Span span, std::size_t length);

struct EditOp {
  enum class Kind { Insert, Delete };

  Kind kind = Kind::Insert;
  /// Offset into the old text.
  std::size_t position = 0;
  /// Inserted text (Insert only).
  std::u32string text;
  /// Deleted code point count (Delete only).
  std::size_t length = 0;

  static EditOp insert(std::size_t position, std::u32string text) {
    return {Kind::Insert, position, std::move(text), 0};
  }
  static EditOp erase(std::size_t position, std::size_t length) {
    return {Kind::Delete, position, {}, length};
  }

  friend bool operator==(const EditOp&, const EditOp&) = default;
};

struct EditScript {
  std::vector<EditOp> ops;
  std::size_t old_length = 0;
  std::size_t new_length = 0;

  /// Total inserted plus deleted code points.
  std::size_t edit_size() const noexcept;
  bool empty() const noexcept { return ops.empty(); }

  friend bool operator==(const EditScript&, const EditScript&) = default;
};

/// Checks ordering, bounds and length bookkeeping. Ops must be sorted by
/// position; deletes must not overlap each other and no insert may fall
/// strictly inside a delete. Throws InvalidScript.
void validate_script(const EditScript& script);

enum class MigrationStatus { Intact, Obsolete };
enum class ObsoleteReason { Deleted, Modified };

struct MigrationResult {
  MigrationStatus status = MigrationStatus::Intact;
  std::optional<Span> new_span;
  std::optional<ObsoleteReason> reason;

  bool intact() const noexcept { return status == MigrationStatus::Intact; }

  static MigrationResult moved_to(Span span) { return {MigrationStatus::Intact, span, std::nullopt}; }
  static MigrationResult obsolete(ObsoleteReason why) { return {MigrationStatus::Obsolete, std::nullopt, why}; }

  friend bool operator==(const MigrationResult&, const MigrationResult&) = default;
};

/// Minimal (fewest inserted + deleted code points) edit script turning `from`
/// into `to`. Deterministic: common runs are matched as early as possible, and
/// a replaced region is emitted as a delete followed by an insert at the same
/// position.
EditScript diff(std::u32string_view from, std::u32string_view to);
EditScript diff_utf8(std::string_view from, std::string_view to);

/// Throws LengthMismatch if `old` does not have script.old_length code points.
std::u32string apply_edits(std::u32string_view old, const EditScript& script);
std::string apply_edits_utf8(std::string_view old, const EditScript& script);

/// Intact iff no insert lies strictly inside the span and no delete overlaps
/// it. An intact span is shifted by the net length change of every edit at or
/// before its start.
MigrationResult migrate_span(Span span, const EditScript& script);

std::u32string_view resolve_span(std::u32string_view body, Span span);
std::string resolve_span_utf8(std::string_view body, Span span);

}  // namespace deme::anchor
