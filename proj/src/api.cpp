#include "deme/api.hpp"

#include <algorithm>
#include <charconv>

#include "deme/error.hpp"
#include "deme/utf8.hpp"
#include "httplib.h"

namespace deme::api {

using codec::json;

// -- payload builders -----------------------------------------------------------

namespace {

json author_json(const model::State& state, const std::string& member_id) {
  return {{"member_id", member_id}, {"display_name", state.member(member_id).display_name}};
}

json thread_node_json(const model::State& state, const model::ThreadNode& node) {
  const auto& c = *node.comment;
  json replies = json::array();
  for (const auto& r : node.replies) replies.push_back(thread_node_json(state, r));
  return {{"comment_id", c.comment_id},
          {"parent_id", c.parent_id ? json(*c.parent_id) : json(nullptr)},
          {"header", c.header},
          {"body", c.body},
          {"author", author_json(state, c.author)},
          {"created_at", format_timestamp(c.created_at)},
          {"depth", c.depth},
          {"anchor", codec::to_json(c.anchor)},
          {"excerpt", c.anchor.is_span() ? json(state.excerpt(c)) : json(nullptr)},
          {"pertinence", codec::to_json(c.pertinence)},
          {"replies", std::move(replies)}};
}

json forest_json(const model::State& state, std::string_view document_id) {
  json forest = json::array();
  for (const auto& node : state.thread_tree(document_id)) forest.push_back(thread_node_json(state, node));
  return forest;
}

}  // namespace

json poll_json(const decision::Poll& poll) {
  return {{"poll_id", poll.poll_id},
          {"document_id", poll.document_id},
          {"version_number", poll.version_number},
          {"question", poll.question},
          {"rule", codec::to_json(poll.rule)},
          {"eligible", poll.eligible},
          {"opened_by", poll.opened_by},
          {"created_at", format_timestamp(poll.created_at)},
          {"status", decision::to_string(poll.status)},
          {"tally", codec::to_json(poll.tally())},
          {"outcome", decision::to_string(poll.outcome())}};
}

json meeting_view(const model::State& state, std::string_view document_id,
                  std::optional<std::uint64_t> version_number) {
  const auto& doc = state.document(document_id);
  const std::uint64_t viewed = version_number.value_or(doc.latest_number());
  const auto* version = doc.version(viewed);
  if (!version) {
    throw Error(ErrorCode::UnknownVersion,
                "document '" + doc.document_id + "' has no version " + std::to_string(viewed));
  }

  struct Reference {
    const model::Comment* comment;
    anchor::Span span;
  };
  std::vector<Reference> refs;
  for (const auto& id : doc.comment_ids) {
    const auto& c = state.comment(id);
    if (!c.anchor.is_span() || c.anchor.version_number > viewed) continue;
    if (c.pertinence.obsolete && c.pertinence.at_version <= viewed) continue;
    if (viewed == doc.latest_number()) {
      refs.push_back({&c, *c.live_span});
    } else {
      const auto chained = state.migrate_through(doc, c.anchor.version_number, c.anchor.span, viewed);
      refs.push_back({&c, *chained.span});
    }
  }
  std::sort(refs.begin(), refs.end(), [](const Reference& a, const Reference& b) {
    if (a.span.start != b.span.start) return a.span.start < b.span.start;
    if (a.span.end != b.span.end) return a.span.end < b.span.end;
    return a.comment->comment_id < b.comment->comment_id;
  });
  json references = json::array();
  for (const auto& r : refs) {
    references.push_back({{"comment_id", r.comment->comment_id},
                          {"header", r.comment->header},
                          {"span", codec::to_json(r.span)},
                          {"pertinence", codec::to_json(r.comment->pertinence)}});
  }

  json polls = json::array();
  for (const auto& id : doc.poll_ids) polls.push_back(poll_json(state.poll(id)));

  return {{"document_id", doc.document_id},
          {"title", doc.title},
          {"version_number", viewed},
          {"latest_version", doc.latest_number()},
          {"version_author", author_json(state, version->author)},
          {"version_created_at", format_timestamp(version->created_at)},
          {"body", version->body},
          {"references", std::move(references)},
          {"threads", forest_json(state, document_id)},
          {"polls", std::move(polls)}};
}

json document_json(const model::State& state, std::string_view document_id) {
  const auto& doc = state.document(document_id);
  json versions = json::array();
  for (const auto& v : doc.versions) {
    versions.push_back({{"version_number", v.version_number},
                        {"author", v.author},
                        {"created_at", format_timestamp(v.created_at)},
                        {"length", v.text.size()}});
  }
  return {{"document_id", doc.document_id},
          {"title", doc.title},
          {"created_by", doc.created_by},
          {"created_at", format_timestamp(doc.created_at)},
          {"latest_version", doc.latest_number()},
          {"body", doc.latest().body},
          {"versions", std::move(versions)}};
}

json threads_json(const model::State& state, std::string_view document_id) {
  return {{"document_id", std::string(document_id)}, {"threads", forest_json(state, document_id)}};
}

json error_json(std::string_view code, std::string_view message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

// -- HTTP -------------------------------------------------------------------------

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn = std::move(fn)](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send(res, http_status(e.code()), error_json(error_code_name(e.code()), e.what()));
    } catch (const json::exception& e) {
      send(res, 400, error_json("bad_request", e.what()));
    } catch (const std::exception& e) {
      send(res, 500, error_json("internal", e.what()));
    }
  };
}

json parse_body(const httplib::Request& req) {
  if (!utf8::is_valid(req.body)) throw Error(ErrorCode::InvalidEncoding, "request body is not valid UTF-8");
  json body;
  try {
    body = json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::BadRequest, std::string("malformed JSON: ") + e.what());
  }
  if (!body.is_object()) throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
  return body;
}

std::optional<std::uint64_t> query_uint(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const auto text = req.get_param_value(name);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::BadRequest, std::string("query parameter '") + name + "' must be a non-negative integer");
  }
  return value;
}

std::optional<std::string> optional_string(const json& body, const char* name) {
  auto it = body.find(name);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(ErrorCode::BadRequest, std::string("field '") + name + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

Server::Server(Service& service, ServerOptions options)
  : service_(service), options_(options), http_(std::make_unique<httplib::Server>()) {
  const auto threads = options_.worker_threads;
  http_->new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  // httplib's default also sets SO_REUSEPORT, which lets a second server
  // silently share an occupied port.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });
  http_->set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return httplib::Server::HandlerResponse::Unhandled;
    const auto code = res.status == 404 ? "not_found" : "bad_request";
    send(res, res.status, error_json(code, "no route for " + req.method + " " + req.path));
    return httplib::Server::HandlerResponse::Handled;
  });
  install_routes();
}

Server::~Server() {
  stop();
}

std::optional<int> Server::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = http_->bind_to_any_port(host);
    if (bound <= 0) return std::nullopt;
    return bound;
  }
  if (!http_->bind_to_port(host, port)) return std::nullopt;
  return port;
}

void Server::listen() {
  http_->listen_after_bind();
}

void Server::stop() {
  stopping_ = true;
  if (http_) http_->stop();
}

void Server::install_routes() {
  const std::string p(kPrefix);
  auto& svc = service_;

  // The caller's member id, which must name a known member.
  auto caller = [&svc](const httplib::Request& req) {
    const std::string header(kMemberHeader);
    if (!req.has_header(header)) throw Error(ErrorCode::Unauthenticated, "missing " + header + " header");
    auto id = req.get_header_value(header);
    const bool known = svc.read([&](const model::State& s) { return s.has_member(id); });
    if (!known) throw Error(ErrorCode::Unauthenticated, "unknown member '" + id + "'");
    return id;
  };

  http_->Post(p + "/documents", guarded([&svc, caller](const httplib::Request& req, httplib::Response& res) {
    const auto author = caller(req);
    const auto body = parse_body(req);
    const auto id = svc.create_document(codec::string_field(body, "title"), codec::string_field(body, "body"), author);
    send(res, 201, {{"document_id", id}, {"version_number", 1}});
  }));

  http_->Get(p + R"(/documents/([^/]+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
    const auto id = req.matches[1].str();
    send(res, 200, svc.read([&](const model::State& s) { return document_json(s, id); }));
  }));

  http_->Post(p + R"(/documents/([^/]+)/versions)", guarded([&svc, caller](const httplib::Request& req, httplib::Response& res) {
    const auto author = caller(req);
    const auto body = parse_body(req);
    const auto outcome = svc.add_version(req.matches[1].str(), codec::string_field(body, "body"), author);
    json obsoleted = json::array();
    for (const auto& change : outcome.obsoleted) obsoleted.push_back(change.comment_id);
    send(res, 201, {{"version_number", outcome.version_number}, {"obsoleted", std::move(obsoleted)}});
  }));

  http_->Get(p + R"(/documents/([^/]+)/meeting-view)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
    const auto id = req.matches[1].str();
    const auto version = query_uint(req, "version");
    send(res, 200, svc.read([&](const model::State& s) { return meeting_view(s, id, version); }));
  }));

  http_->Post(p + R"(/documents/([^/]+)/comments)", guarded([&svc, caller](const httplib::Request& req, httplib::Response& res) {
    const auto author = caller(req);
    const auto body = parse_body(req);
    const auto anchor = body.contains("anchor") ? codec::anchor_from_json(body.at("anchor")) : Anchor::whole_document();
    const auto receipt = svc.add_comment(req.matches[1].str(), anchor, codec::string_field(body, "header"),
                                         optional_string(body, "body").value_or(""), author,
                                         optional_string(body, "parent_id"));
    send(res, 201, {{"comment_id", receipt.comment_id}, {"pertinence", codec::to_json(receipt.pertinence)}});
  }));

  http_->Get(p + R"(/documents/([^/]+)/comments)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
    const auto id = req.matches[1].str();
    send(res, 200, svc.read([&](const model::State& s) { return threads_json(s, id); }));
  }));

  http_->Post(p + R"(/documents/([^/]+)/polls)", guarded([&svc, caller](const httplib::Request& req, httplib::Response& res) {
    const auto opener = caller(req);
    const auto body = parse_body(req);
    std::optional<std::uint64_t> version;
    if (body.contains("version_number") && !body.at("version_number").is_null()) {
      version = codec::uint_field(body, "version_number");
    }
    const auto& eligible_json = codec::field(body, "eligible");
    if (!eligible_json.is_array()) throw Error(ErrorCode::BadRequest, "field 'eligible' must be an array");
    std::vector<std::string> eligible;
    for (const auto& m : eligible_json) {
      if (!m.is_string()) throw Error(ErrorCode::BadRequest, "eligible entries must be member id strings");
      eligible.push_back(m.get<std::string>());
    }
    const auto rule = codec::rule_from_json(codec::field(body, "rule"));
    const auto id = svc.open_poll(req.matches[1].str(), version, codec::string_field(body, "question"), rule,
                                  eligible, opener);
    send(res, 201, svc.read([&](const model::State& s) { return poll_json(s.poll(id)); }));
  }));

  http_->Post(p + R"(/polls/([^/]+)/votes)", guarded([&svc, caller](const httplib::Request& req, httplib::Response& res) {
    const auto voter = caller(req);
    const auto body = parse_body(req);
    const auto poll_id = req.matches[1].str();
    const auto choice = decision::parse_choice(codec::string_field(body, "choice"));
    svc.cast_vote(poll_id, voter, choice);
    send(res, 200, svc.read([&](const model::State& s) {
      const auto& poll = s.poll(poll_id);
      return json{{"poll_id", poll_id},
                  {"member_id", voter},
                  {"choice", decision::to_string(choice)},
                  {"tally", codec::to_json(poll.tally())},
                  {"outcome", decision::to_string(poll.outcome())}};
    }));
  }));

  http_->Post(p + R"(/polls/([^/]+)/close)", guarded([&svc, caller](const httplib::Request& req, httplib::Response& res) {
    const auto member = caller(req);
    const auto poll_id = req.matches[1].str();
    const auto receipt = svc.close_poll(poll_id, member);
    send(res, 200, {{"poll_id", poll_id},
                    {"status", "closed"},
                    {"tally", codec::to_json(receipt.tally)},
                    {"outcome", decision::to_string(receipt.outcome)}});
  }));

  http_->Get(p + R"(/polls/([^/]+)/tally)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
    const auto poll_id = req.matches[1].str();
    send(res, 200, svc.read([&](const model::State& s) {
      const auto& poll = s.poll(poll_id);
      return json{{"poll_id", poll.poll_id},
                  {"status", decision::to_string(poll.status)},
                  {"rule", codec::to_json(poll.rule)},
                  {"tally", codec::to_json(poll.tally())},
                  {"outcome", decision::to_string(poll.outcome())}};
    }));
  }));

  http_->Get(p + "/events", guarded([this](const httplib::Request& req, httplib::Response& res) {
    const auto since = query_uint(req, "since").value_or(0);
    const auto requested = std::chrono::milliseconds(query_uint(req, "timeout_ms").value_or(0));
    const auto deadline = std::chrono::steady_clock::now() + std::min(requested, options_.max_long_poll);
    auto& store = service_.store();
    // Wait in short slices so that stop() is not held up by idle waiters.
    auto found = store.events_since(since);
    while (found.empty() && !stopping_) {
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) break;
      found = store.wait_for_events(since, std::min(left, std::chrono::milliseconds(200)));
    }
    json notices = json::array();
    for (const auto& e : found) notices.push_back(codec::notice_json(e));
    const auto next = found.empty() ? since : found.back().seq;
    send(res, 200, {{"events", std::move(notices)}, {"next_since", next}});
  }));
}

}  // namespace deme::api
