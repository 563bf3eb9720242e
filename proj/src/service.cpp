#include "deme/service.hpp"

#include <mutex>

namespace deme {

Service::Service(const std::filesystem::path& data_dir, Store::Clock clock)
  : store_(data_dir, std::move(clock)), state_(store_.load()) {}

Event Service::record(EventPayload payload) {
  auto event = store_.append(std::move(payload));
  state_.apply(event);
  return event;
}

std::string Service::add_member(std::string_view display_name) {
  std::unique_lock lock(mu_);
  auto payload = state_.plan_add_member(display_name);
  auto id = payload.member_id;
  record(std::move(payload));
  return id;
}

std::string Service::create_document(std::string_view title, std::string_view body, std::string_view author) {
  std::unique_lock lock(mu_);
  auto payload = state_.plan_create_document(title, body, author);
  auto id = payload.document_id;
  record(std::move(payload));
  return id;
}

model::VersionOutcome Service::add_version(std::string_view document_id, std::string_view body,
                                           std::string_view author) {
  std::unique_lock lock(mu_);
  auto event = store_.append(state_.plan_add_version(document_id, body, author));
  auto outcome = *state_.apply(event);
  for (const auto& change : outcome.obsoleted) record(change);
  return outcome;
}

CommentReceipt Service::add_comment(std::string_view document_id, const Anchor& anchor, std::string_view header,
                                    std::string_view body, std::string_view author,
                                    const std::optional<std::string>& parent_id) {
  std::unique_lock lock(mu_);
  auto payload = state_.plan_add_comment(document_id, anchor, header, body, author, parent_id);
  auto id = payload.comment_id;
  record(std::move(payload));
  return {id, state_.comment(id).pertinence};
}

std::string Service::open_poll(std::string_view document_id, std::optional<std::uint64_t> version_number,
                               std::string_view question, const decision::DecisionRule& rule,
                               const std::vector<std::string>& eligible, std::string_view opened_by) {
  std::unique_lock lock(mu_);
  auto payload = state_.plan_open_poll(document_id, version_number, question, rule, eligible, opened_by);
  auto id = payload.poll_id;
  record(std::move(payload));
  return id;
}

void Service::cast_vote(std::string_view poll_id, std::string_view member_id, decision::Choice choice) {
  std::unique_lock lock(mu_);
  record(state_.plan_cast_vote(poll_id, member_id, choice));
}

CloseReceipt Service::close_poll(std::string_view poll_id, std::string_view member_id) {
  std::unique_lock lock(mu_);
  record(state_.plan_close_poll(poll_id, member_id));
  const auto& poll = state_.poll(poll_id);
  return {poll.tally(), poll.outcome()};
}

void Service::import_archive(const std::filesystem::path& path) {
  std::unique_lock lock(mu_);
  state_ = store_.import_archive(path);
}

}  // namespace deme
