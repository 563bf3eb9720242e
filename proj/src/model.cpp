#include "deme/model.hpp"

#include <algorithm>
#include <cstdio>

#include "deme/error.hpp"
#include "deme/utf8.hpp"

namespace deme::model {

namespace {

std::string make_id(std::string_view prefix, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%06zu", n);
  return std::string(prefix) + "-" + buf;
}

void require_utf8(std::string_view text, std::string_view what) {
  if (!utf8::is_valid(text)) throw Error(ErrorCode::InvalidEncoding, std::string(what) + " is not valid UTF-8");
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; });
}

template <typename Map>
auto& lookup(Map& map, std::string_view id, ErrorCode code, std::string_view what) {
  auto it = map.find(id);
  if (it == map.end()) throw Error(code, "unknown " + std::string(what) + " '" + std::string(id) + "'");
  return it->second;
}

}  // namespace

const DocumentVersion* Document::version(std::uint64_t number) const {
  if (number == 0 || number > versions.size()) return nullptr;
  return &versions[number - 1];
}

// -- commands ---------------------------------------------------------------

events::MemberAdded State::plan_add_member(std::string_view display_name) const {
  if (blank(display_name)) throw Error(ErrorCode::EmptyName, "display name must not be empty");
  require_utf8(display_name, "display name");
  return {make_id("mem", members_.size() + 1), std::string(display_name)};
}

events::DocumentCreated State::plan_create_document(std::string_view title, std::string_view body,
                                                    std::string_view author) const {
  if (blank(title)) throw Error(ErrorCode::EmptyTitle, "document title must not be empty");
  if (body.empty()) throw Error(ErrorCode::EmptyBody, "document body must not be empty");
  require_utf8(title, "title");
  require_utf8(body, "document body");
  member(author);
  return {make_id("doc", documents_.size() + 1), std::string(title), std::string(body), std::string(author)};
}

events::VersionAdded State::plan_add_version(std::string_view document_id, std::string_view body,
                                             std::string_view author) const {
  const auto& doc = document(document_id);
  if (body.empty()) throw Error(ErrorCode::EmptyBody, "document body must not be empty");
  require_utf8(body, "document body");
  member(author);
  return {doc.document_id, doc.latest_number() + 1, std::string(body), std::string(author)};
}

events::CommentAdded State::plan_add_comment(std::string_view document_id, const Anchor& anchor,
                                             std::string_view header, std::string_view body,
                                             std::string_view author,
                                             const std::optional<std::string>& parent_id) const {
  const auto& doc = document(document_id);
  member(author);
  if (blank(header)) throw Error(ErrorCode::EmptyHeader, "comment header must not be empty");
  require_utf8(header, "comment header");
  require_utf8(body, "comment body");
  if (anchor.is_span()) {
    const auto* version = doc.version(anchor.version_number);
    if (!version) {
      throw Error(ErrorCode::UnknownVersion, "document '" + doc.document_id + "' has no version " +
                                                 std::to_string(anchor.version_number));
    }
    anchor::validate_span(anchor.span, version->text.size());
  }
  if (parent_id) {
    auto it = comments_.find(*parent_id);
    if (it == comments_.end()) throw Error(ErrorCode::UnknownParent, "unknown parent comment '" + *parent_id + "'");
    if (it->second.document_id != doc.document_id) {
      throw Error(ErrorCode::CrossDocumentParent, "parent comment belongs to another document");
    }
  }
  return {make_id("cmt", comments_.size() + 1),
          doc.document_id,
          anchor,
          std::string(header),
          std::string(body),
          std::string(author),
          parent_id};
}

events::PollOpened State::plan_open_poll(std::string_view document_id, std::optional<std::uint64_t> version_number,
                                         std::string_view question, const decision::DecisionRule& rule,
                                         const std::vector<std::string>& eligible,
                                         std::string_view opened_by) const {
  const auto& doc = document(document_id);
  member(opened_by);
  const std::uint64_t version = version_number.value_or(doc.latest_number());
  if (!doc.version(version)) {
    throw Error(ErrorCode::UnknownVersion,
                "document '" + doc.document_id + "' has no version " + std::to_string(version));
  }
  if (blank(question)) throw Error(ErrorCode::EmptyQuestion, "poll question must not be empty");
  require_utf8(question, "question");
  rule.validate();
  if (eligible.empty()) throw Error(ErrorCode::EmptyEligibleSet, "eligible member set must not be empty");
  std::vector<std::string> voters = eligible;
  std::sort(voters.begin(), voters.end());
  voters.erase(std::unique(voters.begin(), voters.end()), voters.end());
  for (const auto& id : voters) member(id);
  return {make_id("poll", polls_.size() + 1), doc.document_id, version, std::string(question),
          rule, std::move(voters), std::string(opened_by)};
}

events::VoteCast State::plan_cast_vote(std::string_view poll_id, std::string_view member_id,
                                       decision::Choice choice) const {
  const auto& p = poll(poll_id);
  if (p.status == decision::PollStatus::Closed) throw Error(ErrorCode::PollClosed, "poll '" + p.poll_id + "' is closed");
  if (!p.eligible.contains(std::string(member_id))) {
    throw Error(ErrorCode::NotEligible, "member '" + std::string(member_id) + "' is not eligible in this poll");
  }
  return {p.poll_id, std::string(member_id), choice};
}

events::PollClosed State::plan_close_poll(std::string_view poll_id, std::string_view member_id) const {
  const auto& p = poll(poll_id);
  member(member_id);
  if (p.status == decision::PollStatus::Closed) {
    throw Error(ErrorCode::PollClosed, "poll '" + p.poll_id + "' is already closed");
  }
  return {p.poll_id, std::string(member_id)};
}

// -- fold -------------------------------------------------------------------

std::optional<VersionOutcome> State::apply(const Event& event) {
  if (event.seq != last_seq_ + 1) {
    throw Error(ErrorCode::CorruptLog, "expected seq " + std::to_string(last_seq_ + 1) + ", got " +
                                           std::to_string(event.seq));
  }
  std::optional<VersionOutcome> outcome;
  std::visit(
      [&](const auto& payload) {
        if constexpr (std::is_same_v<std::decay_t<decltype(payload)>, events::VersionAdded>) {
          outcome = fold(payload, event);
        } else {
          fold(payload, event);
        }
      },
      event.payload);
  last_seq_ = event.seq;
  return outcome;
}

void State::fold(const events::MemberAdded& e, const Event&) {
  if (members_.contains(e.member_id)) throw Error(ErrorCode::BadRequest, "duplicate member id " + e.member_id);
  members_.emplace(e.member_id, Member{e.member_id, e.display_name});
}

void State::fold(const events::DocumentCreated& e, const Event& event) {
  if (documents_.contains(e.document_id)) throw Error(ErrorCode::BadRequest, "duplicate document id " + e.document_id);
  member(e.author);
  Document doc;
  doc.document_id = e.document_id;
  doc.title = e.title;
  doc.created_by = e.author;
  doc.created_at = event.occurred_at;
  doc.versions.push_back({1, e.body, utf8::decode(e.body), e.author, event.occurred_at});
  documents_.emplace(e.document_id, std::move(doc));
}

VersionOutcome State::fold(const events::VersionAdded& e, const Event& event) {
  auto& doc = document_mut(e.document_id);
  if (e.version_number != doc.latest_number() + 1) {
    throw Error(ErrorCode::BadRequest, "version " + std::to_string(e.version_number) + " does not extend the chain");
  }
  member(e.author);
  DocumentVersion next{e.version_number, e.body, utf8::decode(e.body), e.author, event.occurred_at};
  auto step = anchor::diff(doc.latest().text, next.text);

  VersionOutcome outcome{e.version_number, {}};
  for (const auto& id : doc.comment_ids) {
    auto& c = comments_.at(id);
    if (!c.anchor.is_span() || c.pertinence.obsolete) continue;
    const auto moved = anchor::migrate_span(*c.live_span, step);
    if (moved.intact()) {
      c.live_span = moved.new_span;
    } else {
      c.pertinence = Pertinence::obsoleted(e.version_number, *moved.reason);
      c.live_span.reset();
      outcome.obsoleted.push_back({c.comment_id, doc.document_id, e.version_number, *moved.reason});
    }
  }
  doc.versions.push_back(std::move(next));
  doc.steps.push_back(std::move(step));
  return outcome;
}

void State::fold(const events::CommentAdded& e, const Event& event) {
  if (comments_.contains(e.comment_id)) throw Error(ErrorCode::BadRequest, "duplicate comment id " + e.comment_id);
  auto& doc = document_mut(e.document_id);
  member(e.author);
  Comment c;
  c.comment_id = e.comment_id;
  c.document_id = e.document_id;
  c.anchor = e.anchor;
  c.header = e.header;
  c.body = e.body;
  c.author = e.author;
  c.created_at = event.occurred_at;
  c.parent_id = e.parent_id;
  if (e.parent_id) {
    const auto& parent = comment(*e.parent_id);
    if (parent.document_id != e.document_id) throw Error(ErrorCode::CrossDocumentParent, "cross-document parent");
    if (parent.created_at > event.occurred_at) throw Error(ErrorCode::BadRequest, "reply predates its parent");
    c.depth = parent.depth + 1;
  }
  if (e.anchor.is_span()) {
    const auto* version = doc.version(e.anchor.version_number);
    if (!version) throw Error(ErrorCode::UnknownVersion, "comment anchored to a missing version");
    anchor::validate_span(e.anchor.span, version->text.size());
    const auto chained = migrate_through(doc, e.anchor.version_number, e.anchor.span, doc.latest_number());
    if (chained.span) {
      c.live_span = chained.span;
    } else {
      c.pertinence = Pertinence::obsoleted(chained.failed_at, chained.reason);
    }
  }
  doc.comment_ids.push_back(c.comment_id);
  comments_.emplace(c.comment_id, std::move(c));
}

void State::fold(const events::PertinenceChanged& e, const Event&) {
  // The transition itself happens when the version is folded; this record
  // must agree with it.
  const auto& c = comment(e.comment_id);
  if (c.document_id != e.document_id || c.pertinence != Pertinence::obsoleted(e.at_version, e.reason)) {
    throw Error(ErrorCode::BadRequest, "pertinence change for " + e.comment_id + " does not match the version chain");
  }
}

void State::fold(const events::PollOpened& e, const Event& event) {
  if (polls_.contains(e.poll_id)) throw Error(ErrorCode::BadRequest, "duplicate poll id " + e.poll_id);
  auto& doc = document_mut(e.document_id);
  if (!doc.version(e.version_number)) throw Error(ErrorCode::UnknownVersion, "poll on a missing version");
  if (e.eligible.empty()) throw Error(ErrorCode::EmptyEligibleSet, "poll without eligible members");
  e.rule.validate();
  decision::Poll p;
  p.poll_id = e.poll_id;
  p.document_id = e.document_id;
  p.version_number = e.version_number;
  p.question = e.question;
  p.rule = e.rule;
  p.eligible.insert(e.eligible.begin(), e.eligible.end());
  p.opened_by = e.opened_by;
  p.created_at = event.occurred_at;
  doc.poll_ids.push_back(p.poll_id);
  polls_.emplace(p.poll_id, std::move(p));
}

void State::fold(const events::VoteCast& e, const Event&) {
  auto& p = lookup(polls_, e.poll_id, ErrorCode::UnknownPoll, "poll");
  if (p.status == decision::PollStatus::Closed) throw Error(ErrorCode::PollClosed, "vote on closed poll");
  if (!p.eligible.contains(e.member_id)) throw Error(ErrorCode::NotEligible, "vote by ineligible member");
  p.votes[e.member_id] = e.choice;
}

void State::fold(const events::PollClosed& e, const Event&) {
  auto& p = lookup(polls_, e.poll_id, ErrorCode::UnknownPoll, "poll");
  if (p.status == decision::PollStatus::Closed) throw Error(ErrorCode::PollClosed, "poll closed twice");
  p.status = decision::PollStatus::Closed;
}

// -- queries ----------------------------------------------------------------

const Member& State::member(std::string_view id) const {
  return lookup(members_, id, ErrorCode::UnknownMember, "member");
}

const Document& State::document(std::string_view id) const {
  return lookup(documents_, id, ErrorCode::UnknownDocument, "document");
}

Document& State::document_mut(std::string_view id) {
  return lookup(documents_, id, ErrorCode::UnknownDocument, "document");
}

const Comment& State::comment(std::string_view id) const {
  return lookup(comments_, id, ErrorCode::UnknownComment, "comment");
}

const decision::Poll& State::poll(std::string_view id) const {
  return lookup(polls_, id, ErrorCode::UnknownPoll, "poll");
}

std::vector<ThreadNode> State::thread_tree(std::string_view document_id) const {
  const auto& doc = document(document_id);
  std::map<std::string, std::vector<const Comment*>, std::less<>> children;
  std::vector<const Comment*> roots;
  for (const auto& id : doc.comment_ids) {
    const auto& c = comments_.at(id);
    if (c.parent_id) children[*c.parent_id].push_back(&c);
    else roots.push_back(&c);
  }
  auto order = [](const Comment* a, const Comment* b) {
    if (a->created_at != b->created_at) return a->created_at < b->created_at;
    return a->comment_id < b->comment_id;
  };
  auto build = [&](auto& self, std::vector<const Comment*> level) -> std::vector<ThreadNode> {
    std::sort(level.begin(), level.end(), order);
    std::vector<ThreadNode> nodes;
    nodes.reserve(level.size());
    for (const auto* c : level) {
      ThreadNode node{c, {}};
      if (auto it = children.find(c->comment_id); it != children.end()) node.replies = self(self, it->second);
      nodes.push_back(std::move(node));
    }
    return nodes;
  };
  return build(build, std::move(roots));
}

std::string State::excerpt(const Comment& c) const {
  if (!c.anchor.is_span()) return {};
  const auto& doc = document(c.document_id);
  return utf8::encode(anchor::resolve_span(doc.version(c.anchor.version_number)->text, c.anchor.span));
}

State::ChainResult State::migrate_through(const Document& doc, std::uint64_t from_version, anchor::Span span,
                                          std::uint64_t to_version) const {
  ChainResult result;
  anchor::Span current = span;
  for (std::uint64_t v = from_version; v < to_version; ++v) {
    const auto moved = anchor::migrate_span(current, doc.steps[v - 1]);
    if (!moved.intact()) {
      result.failed_at = v + 1;
      result.reason = *moved.reason;
      return result;
    }
    current = *moved.new_span;
  }
  result.span = current;
  return result;
}

}  // namespace deme::model
