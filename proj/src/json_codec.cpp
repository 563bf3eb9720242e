#include "deme/json_codec.hpp"

#include "deme/error.hpp"

namespace deme::codec {

namespace {

[[noreturn]] void bad(const std::string& message) {
  throw Error(ErrorCode::BadRequest, message);
}

std::optional<std::string> optional_string(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) bad(std::string("field '") + name + "' must be a string");
  return it->get<std::string>();
}

Rational rational_field(const json& j, const char* name, Rational fallback) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return fallback;
  if (it->is_string()) return Rational::parse(it->get<std::string>());
  if (it->is_number_unsigned()) return {static_cast<std::int64_t>(it->get<std::uint64_t>()), 1};
  bad(std::string("field '") + name + "' must be a fraction string such as \"2/3\"");
}

anchor::ObsoleteReason reason_from_string(std::string_view s) {
  if (s == "deleted") return anchor::ObsoleteReason::Deleted;
  if (s == "modified") return anchor::ObsoleteReason::Modified;
  bad("unknown obsolete reason '" + std::string(s) + "'");
}

}  // namespace

const json& field(const json& j, const char* name) {
  if (!j.is_object()) bad("expected a JSON object");
  auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field '") + name + "'");
  return *it;
}

std::string string_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_string()) bad(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t uint_field(const json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number_unsigned()) bad(std::string("field '") + name + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

json to_json(anchor::Span span) {
  return {{"start", span.start}, {"end", span.end}};
}

anchor::Span span_from_json(const json& j) {
  return {uint_field(j, "start"), uint_field(j, "end")};
}

json to_json(const Anchor& a) {
  if (!a.is_span()) return {{"kind", "whole_document"}};
  return {{"kind", "span"}, {"version_number", a.version_number}, {"span", to_json(a.span)}};
}

Anchor anchor_from_json(const json& j) {
  const auto kind = string_field(j, "kind");
  if (kind == "whole_document") return Anchor::whole_document();
  if (kind == "span") return Anchor::at(uint_field(j, "version_number"), span_from_json(field(j, "span")));
  bad("anchor kind must be 'whole_document' or 'span'");
}

json to_json(const decision::DecisionRule& rule) {
  json j = {{"kind", decision::to_string(rule.kind)}, {"quorum", rule.quorum.to_string()}};
  if (rule.kind == decision::RuleKind::Supermajority) j["threshold"] = rule.threshold.to_string();
  return j;
}

decision::DecisionRule rule_from_json(const json& j) {
  decision::DecisionRule rule;
  rule.kind = decision::parse_rule_kind(string_field(j, "kind"));
  rule.quorum = rational_field(j, "quorum", {0, 1});
  if (rule.kind == decision::RuleKind::Supermajority) {
    if (!j.contains("threshold")) throw Error(ErrorCode::InvalidRule, "supermajority requires a threshold");
    rule.threshold = rational_field(j, "threshold", {1, 1});
  }
  return rule;
}

json to_json(const decision::Tally& t) {
  return {{"yes", t.yes}, {"no", t.no}, {"abstain", t.abstain}, {"cast", t.cast}, {"eligible_count", t.eligible_count}};
}

std::string_view to_string(anchor::ObsoleteReason reason) {
  return reason == anchor::ObsoleteReason::Deleted ? "deleted" : "modified";
}

json to_json(const model::Pertinence& p) {
  if (!p.obsolete) return {{"status", "current"}};
  return {{"status", "obsolete"}, {"at_version", p.at_version}, {"reason", to_string(p.reason)}};
}

namespace {

struct PayloadEncoder {
  json operator()(const events::MemberAdded& e) const {
    return {{"member_id", e.member_id}, {"display_name", e.display_name}};
  }
  json operator()(const events::DocumentCreated& e) const {
    return {{"document_id", e.document_id}, {"title", e.title}, {"body", e.body}, {"author", e.author}};
  }
  json operator()(const events::VersionAdded& e) const {
    return {{"document_id", e.document_id}, {"version_number", e.version_number}, {"body", e.body},
            {"author", e.author}};
  }
  json operator()(const events::CommentAdded& e) const {
    return {{"comment_id", e.comment_id}, {"document_id", e.document_id}, {"anchor", to_json(e.anchor)},
            {"header", e.header},         {"body", e.body},               {"author", e.author},
            {"parent_id", e.parent_id ? json(*e.parent_id) : json(nullptr)}};
  }
  json operator()(const events::PertinenceChanged& e) const {
    return {{"comment_id", e.comment_id}, {"document_id", e.document_id}, {"at_version", e.at_version},
            {"reason", to_string(e.reason)}};
  }
  json operator()(const events::PollOpened& e) const {
    return {{"poll_id", e.poll_id}, {"document_id", e.document_id}, {"version_number", e.version_number},
            {"question", e.question}, {"rule", to_json(e.rule)}, {"eligible", e.eligible},
            {"opened_by", e.opened_by}};
  }
  json operator()(const events::VoteCast& e) const {
    return {{"poll_id", e.poll_id}, {"member_id", e.member_id}, {"choice", decision::to_string(e.choice)}};
  }
  json operator()(const events::PollClosed& e) const {
    return {{"poll_id", e.poll_id}, {"closed_by", e.closed_by}};
  }
};

EventPayload decode_payload(std::string_view kind, const json& p) {
  if (kind == "member_added") return events::MemberAdded{string_field(p, "member_id"), string_field(p, "display_name")};
  if (kind == "document_created") {
    return events::DocumentCreated{string_field(p, "document_id"), string_field(p, "title"),
                                   string_field(p, "body"), string_field(p, "author")};
  }
  if (kind == "version_added") {
    return events::VersionAdded{string_field(p, "document_id"), uint_field(p, "version_number"),
                                string_field(p, "body"), string_field(p, "author")};
  }
  if (kind == "comment_added") {
    return events::CommentAdded{string_field(p, "comment_id"), string_field(p, "document_id"),
                                anchor_from_json(field(p, "anchor")), string_field(p, "header"),
                                string_field(p, "body"),       string_field(p, "author"),
                                optional_string(p, "parent_id")};
  }
  if (kind == "pertinence_changed") {
    return events::PertinenceChanged{string_field(p, "comment_id"), string_field(p, "document_id"),
                                     uint_field(p, "at_version"), reason_from_string(string_field(p, "reason"))};
  }
  if (kind == "poll_opened") {
    const auto& eligible = field(p, "eligible");
    if (!eligible.is_array()) bad("field 'eligible' must be an array");
    std::vector<std::string> members;
    for (const auto& m : eligible) {
      if (!m.is_string()) bad("eligible entries must be strings");
      members.push_back(m.get<std::string>());
    }
    return events::PollOpened{string_field(p, "poll_id"),   string_field(p, "document_id"),
                              uint_field(p, "version_number"), string_field(p, "question"),
                              rule_from_json(field(p, "rule")), std::move(members),
                              string_field(p, "opened_by")};
  }
  if (kind == "vote_cast") {
    return events::VoteCast{string_field(p, "poll_id"), string_field(p, "member_id"),
                            decision::parse_choice(string_field(p, "choice"))};
  }
  if (kind == "poll_closed") return events::PollClosed{string_field(p, "poll_id"), string_field(p, "closed_by")};
  bad("unknown event kind '" + std::string(kind) + "'");
}

}  // namespace

json to_json(const Event& event) {
  return {{"seq", event.seq},
          {"kind", event.kind()},
          {"occurred_at", format_timestamp(event.occurred_at)},
          {"payload", std::visit(PayloadEncoder{}, event.payload)}};
}

Event event_from_json(const json& j) {
  Event event;
  event.seq = uint_field(j, "seq");
  event.occurred_at = parse_timestamp(string_field(j, "occurred_at"));
  event.payload = decode_payload(string_field(j, "kind"), field(j, "payload"));
  return event;
}

json notice_json(const Event& event) {
  json ids = json::object();
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, events::MemberAdded>) {
          ids["member_id"] = e.member_id;
        } else if constexpr (std::is_same_v<T, events::DocumentCreated>) {
          ids["document_id"] = e.document_id;
          ids["version_number"] = 1;
        } else if constexpr (std::is_same_v<T, events::VersionAdded>) {
          ids["document_id"] = e.document_id;
          ids["version_number"] = e.version_number;
        } else if constexpr (std::is_same_v<T, events::CommentAdded>) {
          ids["document_id"] = e.document_id;
          ids["comment_id"] = e.comment_id;
          if (e.parent_id) ids["parent_id"] = *e.parent_id;
        } else if constexpr (std::is_same_v<T, events::PertinenceChanged>) {
          ids["document_id"] = e.document_id;
          ids["comment_id"] = e.comment_id;
          ids["version_number"] = e.at_version;
        } else if constexpr (std::is_same_v<T, events::PollOpened>) {
          ids["document_id"] = e.document_id;
          ids["poll_id"] = e.poll_id;
          ids["version_number"] = e.version_number;
        } else if constexpr (std::is_same_v<T, events::VoteCast>) {
          ids["poll_id"] = e.poll_id;
          ids["member_id"] = e.member_id;
        } else {
          ids["poll_id"] = e.poll_id;
        }
      },
      event.payload);
  return {{"seq", event.seq}, {"kind", event.kind()}, {"occurred_at", format_timestamp(event.occurred_at)},
          {"ids", ids}};
}

}  // namespace deme::codec
