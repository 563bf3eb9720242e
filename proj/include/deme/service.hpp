#pragma once

#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "deme/decision.hpp"
#include "deme/model.hpp"
#include "deme/store.hpp"

namespace deme {

struct CommentReceipt {
  std::string comment_id;
  model::Pertinence pertinence;
};

struct CloseReceipt {
  decision::Tally tally;
  decision::Outcome outcome;
};

/// The write path: every command is validated against the current state,
/// recorded in the store, then folded. Commands are serialized; reads take a
/// shared lock and may run concurrently.
class Service {
public:
  /// Opens the store in `data_dir` and replays its log.
  explicit Service(const std::filesystem::path& data_dir, Store::Clock clock = now_utc);

  std::string add_member(std::string_view display_name);
  std::string create_document(std::string_view title, std::string_view body, std::string_view author);
  /// Returns the new version number and the comments it made obsolete.
  model::VersionOutcome add_version(std::string_view document_id, std::string_view body, std::string_view author);
  CommentReceipt add_comment(std::string_view document_id, const Anchor& anchor, std::string_view header,
                             std::string_view body, std::string_view author,
                             const std::optional<std::string>& parent_id = std::nullopt);
  std::string open_poll(std::string_view document_id, std::optional<std::uint64_t> version_number,
                        std::string_view question, const decision::DecisionRule& rule,
                        const std::vector<std::string>& eligible, std::string_view opened_by);
  void cast_vote(std::string_view poll_id, std::string_view member_id, decision::Choice choice);
  CloseReceipt close_poll(std::string_view poll_id, std::string_view member_id);

  /// Runs `fn(const model::State&)` under the read lock.
  template <typename Fn>
  decltype(auto) read(Fn&& fn) const {
    std::shared_lock lock(mu_);
    return fn(static_cast<const model::State&>(state_));
  }

  void export_archive(const std::filesystem::path& path) const { store_.export_archive(path); }
  /// Only into an empty deployment.
  void import_archive(const std::filesystem::path& path);

  Store& store() { return store_; }
  const Store& store() const { return store_; }

private:
  Event record(EventPayload payload);

  mutable std::shared_mutex mu_;
  Store store_;
  model::State state_;
};

}  // namespace deme
