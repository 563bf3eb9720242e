#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "deme/event.hpp"
#include "deme/model.hpp"
#include "deme/timestamp.hpp"

namespace deme {

inline constexpr std::string_view kLogFileName = "events.log";
inline constexpr std::string_view kArchiveHeaderPrefix = "deme-archive v";
inline constexpr int kSchemaVersion = 1;

/// Append-only event log in `<data_dir>/events.log`, one JSON record per
/// line. The store owns the log exclusively (flock) while open, stamps each
/// appended event with its seq and a non-decreasing UTC time, and wakes feed
/// waiters on every append.
class Store {
public:
  using Clock = std::function<Timestamp()>;

  /// Creates the directory if needed and locks the log. Throws
  /// Error(StorageFailure) if the directory is unusable or already in use.
  explicit Store(std::filesystem::path data_dir, Clock clock = now_utc);
  ~Store();

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  /// Reads and folds the whole log. Throws CorruptLogError naming the first
  /// record that cannot be parsed or folded.
  model::State load();

  /// Durable (fsync'd) before returning.
  Event append(EventPayload payload);

  std::uint64_t last_seq() const;
  std::vector<Event> events_since(std::uint64_t since) const;

  /// Events with seq > since; blocks up to `timeout` while there are none.
  std::vector<Event> wait_for_events(std::uint64_t since, std::chrono::milliseconds timeout) const;

  /// Header line followed by the log records. Throws Error(StorageFailure).
  void export_archive(const std::filesystem::path& path) const;

  /// Replaces an empty log with the archive's records and returns the folded
  /// state. Throws NonEmptyTarget, SchemaMismatch or CorruptLogError.
  model::State import_archive(const std::filesystem::path& path);

  const std::filesystem::path& data_dir() const { return data_dir_; }

  /// Canonical single-line encoding of a record.
  static std::string encode_line(const Event& event);

private:
  void write_all(const std::string& bytes);

  std::filesystem::path data_dir_;
  std::filesystem::path log_path_;
  Clock clock_;
  int fd_ = -1;

  mutable std::mutex mu_;
  mutable std::condition_variable appended_;
  std::vector<Event> events_;
  Timestamp last_time_{};
};

}  // namespace deme
