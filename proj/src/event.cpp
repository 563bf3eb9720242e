#include "deme/event.hpp"

namespace deme {

namespace {

struct KindName {
  std::string_view operator()(const events::MemberAdded&) const { return "member_added"; }
  std::string_view operator()(const events::DocumentCreated&) const { return "document_created"; }
  std::string_view operator()(const events::VersionAdded&) const { return "version_added"; }
  std::string_view operator()(const events::CommentAdded&) const { return "comment_added"; }
  std::string_view operator()(const events::PertinenceChanged&) const { return "pertinence_changed"; }
  std::string_view operator()(const events::PollOpened&) const { return "poll_opened"; }
  std::string_view operator()(const events::VoteCast&) const { return "vote_cast"; }
  std::string_view operator()(const events::PollClosed&) const { return "poll_closed"; }
};

}  // namespace

std::string_view event_kind(const EventPayload& payload) {
  return std::visit(KindName{}, payload);
}

std::string_view Event::kind() const {
  return event_kind(payload);
}

}  // namespace deme
