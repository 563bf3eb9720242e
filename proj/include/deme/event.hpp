#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "deme/anchor_engine.hpp"
#include "deme/decision.hpp"
#include "deme/timestamp.hpp"

namespace deme {

/// What a comment refers to: the whole document, or a span of one version.
struct Anchor {
  enum class Kind { WholeDocument, Span };

  Kind kind = Kind::WholeDocument;
  std::uint64_t version_number = 0;  // Span only
  anchor::Span span;                 // Span only

  static Anchor whole_document() { return {}; }
  static Anchor at(std::uint64_t version, anchor::Span span) { return {Kind::Span, version, span}; }
  bool is_span() const noexcept { return kind == Kind::Span; }

  friend bool operator==(const Anchor&, const Anchor&) = default;
};

namespace events {

struct MemberAdded {
  std::string member_id;
  std::string display_name;
};

struct DocumentCreated {
  std::string document_id;
  std::string title;
  std::string body;
  std::string author;
};

struct VersionAdded {
  std::string document_id;
  std::uint64_t version_number = 0;
  std::string body;
  std::string author;
};

struct CommentAdded {
  std::string comment_id;
  std::string document_id;
  Anchor anchor;
  std::string header;
  std::string body;
  std::string author;
  std::optional<std::string> parent_id;
};

/// Always current -> obsolete.
struct PertinenceChanged {
  std::string comment_id;
  std::string document_id;
  std::uint64_t at_version = 0;
  anchor::ObsoleteReason reason = anchor::ObsoleteReason::Modified;
};

struct PollOpened {
  std::string poll_id;
  std::string document_id;
  std::uint64_t version_number = 0;
  std::string question;
  decision::DecisionRule rule;
  std::vector<std::string> eligible;  // sorted, unique
  std::string opened_by;
};

struct VoteCast {
  std::string poll_id;
  std::string member_id;
  decision::Choice choice = decision::Choice::Abstain;
};

struct PollClosed {
  std::string poll_id;
  std::string closed_by;
};

}  // namespace events

using EventPayload = std::variant<events::MemberAdded, events::DocumentCreated, events::VersionAdded,
                                  events::CommentAdded, events::PertinenceChanged, events::PollOpened,
                                  events::VoteCast, events::PollClosed>;

/// One record of the append-only log. `seq` and `occurred_at` are assigned by
/// the store at append time.
struct Event {
  std::uint64_t seq = 0;
  Timestamp occurred_at;
  EventPayload payload;

  std::string_view kind() const;
};

std::string_view event_kind(const EventPayload& payload);

}  // namespace deme
