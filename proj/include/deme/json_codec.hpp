#pragma once

#include "json.hpp"

#include "deme/anchor_engine.hpp"
#include "deme/decision.hpp"
#include "deme/event.hpp"
#include "deme/model.hpp"

// JSON encodings shared by the event log and the HTTP API. Field names are
// snake_case; timestamps are ISO-8601 UTC; ids are opaque strings. Decoders
// throw Error(BadRequest) (or a more specific code) on malformed input.
namespace deme::codec {

using nlohmann::json;

json to_json(anchor::Span span);
anchor::Span span_from_json(const json& j);

json to_json(const Anchor& anchor);
Anchor anchor_from_json(const json& j);

json to_json(const decision::DecisionRule& rule);
decision::DecisionRule rule_from_json(const json& j);

json to_json(const decision::Tally& tally);
json to_json(const model::Pertinence& pertinence);
std::string_view to_string(anchor::ObsoleteReason reason);

/// One log record. Keys are emitted in sorted order, so `dump()` of the
/// result is canonical.
json to_json(const Event& event);
Event event_from_json(const json& j);

/// Feed entry: seq, kind, occurred_at and the ids the event touched.
json notice_json(const Event& event);

// Field accessors that produce BadRequest with the field name on mismatch.
const json& field(const json& j, const char* name);
std::string string_field(const json& j, const char* name);
std::uint64_t uint_field(const json& j, const char* name);

}  // namespace deme::codec
