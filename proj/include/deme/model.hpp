#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deme/anchor_engine.hpp"
#include "deme/decision.hpp"
#include "deme/event.hpp"
#include "deme/timestamp.hpp"

// In-memory deliberation state. The state is a left fold of the event log:
// `plan_*` methods validate a command against the current state and return
// the event payload to record, and `apply` folds a recorded event in.
namespace deme::model {

struct Member {
  std::string member_id;
  std::string display_name;
};

struct DocumentVersion {
  std::uint64_t version_number = 0;
  std::string body;
  std::u32string text;  // body decoded to code points
  std::string author;
  Timestamp created_at;
};

struct Document {
  std::string document_id;
  std::string title;
  std::string created_by;
  Timestamp created_at;
  std::vector<DocumentVersion> versions;
  /// steps[i] turns version i+1 into version i+2.
  std::vector<anchor::EditScript> steps;
  std::vector<std::string> comment_ids;  // creation order
  std::vector<std::string> poll_ids;

  const DocumentVersion& latest() const { return versions.back(); }
  std::uint64_t latest_number() const { return versions.size(); }
  /// nullptr if the version does not exist.
  const DocumentVersion* version(std::uint64_t number) const;
};

struct Pertinence {
  bool obsolete = false;
  std::uint64_t at_version = 0;                                  // obsolete only
  anchor::ObsoleteReason reason = anchor::ObsoleteReason::Modified;  // obsolete only

  static Pertinence current() { return {}; }
  static Pertinence obsoleted(std::uint64_t version, anchor::ObsoleteReason why) { return {true, version, why}; }

  friend bool operator==(const Pertinence&, const Pertinence&) = default;
};

struct Comment {
  std::string comment_id;
  std::string document_id;
  Anchor anchor;
  std::string header;
  std::string body;
  std::string author;
  Timestamp created_at;
  std::optional<std::string> parent_id;
  std::size_t depth = 0;
  Pertinence pertinence;
  /// Where the anchored text sits in the latest version. Span anchors that
  /// are still current only.
  std::optional<anchor::Span> live_span;
};

struct ThreadNode {
  const Comment* comment = nullptr;
  std::vector<ThreadNode> replies;
};

/// Result of folding a version_added event.
struct VersionOutcome {
  std::uint64_t version_number = 0;
  /// Comments that went current -> obsolete, in creation order.
  std::vector<events::PertinenceChanged> obsoleted;
};

class State {
public:
  // -- commands: validate and build the payload, without mutating --------

  events::MemberAdded plan_add_member(std::string_view display_name) const;
  events::DocumentCreated plan_create_document(std::string_view title, std::string_view body,
                                               std::string_view author) const;
  events::VersionAdded plan_add_version(std::string_view document_id, std::string_view body,
                                        std::string_view author) const;
  events::CommentAdded plan_add_comment(std::string_view document_id, const Anchor& anchor, std::string_view header,
                                        std::string_view body, std::string_view author,
                                        const std::optional<std::string>& parent_id) const;
  events::PollOpened plan_open_poll(std::string_view document_id, std::optional<std::uint64_t> version_number,
                                    std::string_view question, const decision::DecisionRule& rule,
                                    const std::vector<std::string>& eligible, std::string_view opened_by) const;
  events::VoteCast plan_cast_vote(std::string_view poll_id, std::string_view member_id,
                                  decision::Choice choice) const;
  events::PollClosed plan_close_poll(std::string_view poll_id, std::string_view member_id) const;

  // -- fold -----------------------------------------------------------------

  /// Folds one event. Throws Error if the event does not fit the state
  /// (callers loading a log turn that into CorruptLog). Returns the
  /// migration outcome for version_added events.
  std::optional<VersionOutcome> apply(const Event& event);

  std::uint64_t last_seq() const noexcept { return last_seq_; }
  bool empty() const noexcept { return last_seq_ == 0; }

  // -- queries --------------------------------------------------------------

  const Member& member(std::string_view id) const;      // UnknownMember
  const Document& document(std::string_view id) const;  // UnknownDocument
  const Comment& comment(std::string_view id) const;    // UnknownComment
  const decision::Poll& poll(std::string_view id) const;  // UnknownPoll
  bool has_member(std::string_view id) const { return members_.contains(id); }

  const std::map<std::string, Member, std::less<>>& members() const { return members_; }
  const std::map<std::string, Document, std::less<>>& documents() const { return documents_; }

  /// Every comment of the document exactly once; replies nested under their
  /// parent; siblings by created_at then comment_id.
  std::vector<ThreadNode> thread_tree(std::string_view document_id) const;

  /// The anchored excerpt, resolved in the version the comment was made on.
  std::string excerpt(const Comment& comment) const;

  /// Migrates a span anchored in `from_version` forward to `to_version`
  /// through the stored version steps. Either the span in `to_version` or the
  /// first version at which the text stopped being intact.
  struct ChainResult {
    std::optional<anchor::Span> span;
    std::uint64_t failed_at = 0;
    anchor::ObsoleteReason reason = anchor::ObsoleteReason::Modified;
  };
  ChainResult migrate_through(const Document& doc, std::uint64_t from_version, anchor::Span span,
                              std::uint64_t to_version) const;

private:
  void fold(const events::MemberAdded& e, const Event& event);
  void fold(const events::DocumentCreated& e, const Event& event);
  VersionOutcome fold(const events::VersionAdded& e, const Event& event);
  void fold(const events::CommentAdded& e, const Event& event);
  void fold(const events::PertinenceChanged& e, const Event& event);
  void fold(const events::PollOpened& e, const Event& event);
  void fold(const events::VoteCast& e, const Event& event);
  void fold(const events::PollClosed& e, const Event& event);

  Document& document_mut(std::string_view id);

  std::map<std::string, Member, std::less<>> members_;
  std::map<std::string, Document, std::less<>> documents_;
  std::map<std::string, Comment, std::less<>> comments_;
  std::map<std::string, decision::Poll, std::less<>> polls_;
  std::uint64_t last_seq_ = 0;
};

}  // namespace deme::model
