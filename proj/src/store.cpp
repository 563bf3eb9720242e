#include "deme/store.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

#include "deme/error.hpp"
#include "deme/json_codec.hpp"

namespace deme {

namespace {

[[noreturn]] void storage_failure(const std::string& what) {
  throw Error(ErrorCode::StorageFailure, what + ": " + std::strerror(errno));
}

// Parses and folds `lines` in order into a fresh state.
model::State replay(const std::vector<std::string>& lines, std::vector<Event>& out) {
  model::State state;
  out.clear();
  out.reserve(lines.size());
  std::uint64_t expected = 1;
  for (const auto& line : lines) {
    try {
      auto j = codec::json::parse(line);
      auto event = codec::event_from_json(j);
      if (event.seq != expected) throw Error(ErrorCode::CorruptLog, "out-of-order seq " + std::to_string(event.seq));
      if (!out.empty() && event.occurred_at < out.back().occurred_at) {
        throw Error(ErrorCode::CorruptLog, "timestamp goes backwards");
      }
      state.apply(event);
      out.push_back(std::move(event));
    } catch (const std::exception& e) {
      throw CorruptLogError(expected, e.what());
    }
    ++expected;
  }
  return state;
}

// Splits on '\n'. A final line without its newline is a torn write and is
// kept so that it is reported as corrupt.
std::vector<std::string> split_lines(const std::string& data) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < data.size()) {
    auto nl = data.find('\n', pos);
    if (nl == std::string::npos) {
      lines.push_back(data.substr(pos) + "\x01");  // guaranteed unparsable
      break;
    }
    lines.push_back(data.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return lines;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) storage_failure("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Store::Store(std::filesystem::path data_dir, Clock clock)
  : data_dir_(std::move(data_dir)), log_path_(data_dir_ / kLogFileName), clock_(std::move(clock)) {
  std::error_code ec;
  std::filesystem::create_directories(data_dir_, ec);
  if (ec) throw Error(ErrorCode::StorageFailure, "cannot create " + data_dir_.string() + ": " + ec.message());
  fd_ = ::open(log_path_.c_str(), O_RDWR | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) storage_failure("cannot open " + log_path_.string());
  if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
    ::close(fd_);
    fd_ = -1;
    throw Error(ErrorCode::StorageFailure, "data directory " + data_dir_.string() + " is in use by another process");
  }
}

Store::~Store() {
  if (fd_ >= 0) ::close(fd_);
}

model::State Store::load() {
  std::lock_guard lock(mu_);
  auto state = replay(split_lines(read_file(log_path_)), events_);
  last_time_ = events_.empty() ? Timestamp{} : events_.back().occurred_at;
  return state;
}

std::string Store::encode_line(const Event& event) {
  return codec::to_json(event).dump() + "\n";
}

void Store::write_all(const std::string& bytes) {
  std::size_t done = 0;
  while (done < bytes.size()) {
    const auto n = ::write(fd_, bytes.data() + done, bytes.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      storage_failure("write to " + log_path_.string() + " failed");
    }
    done += static_cast<std::size_t>(n);
  }
  if (::fsync(fd_) != 0) storage_failure("fsync of " + log_path_.string() + " failed");
}

Event Store::append(EventPayload payload) {
  std::unique_lock lock(mu_);
  Event event;
  event.seq = events_.size() + 1;
  event.occurred_at = std::max(clock_(), last_time_);
  event.payload = std::move(payload);
  write_all(encode_line(event));
  last_time_ = event.occurred_at;
  events_.push_back(event);
  lock.unlock();
  appended_.notify_all();
  return event;
}

std::uint64_t Store::last_seq() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

std::vector<Event> Store::events_since(std::uint64_t since) const {
  std::lock_guard lock(mu_);
  if (since >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(since), events_.end()};
}

std::vector<Event> Store::wait_for_events(std::uint64_t since, std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mu_);
  appended_.wait_for(lock, timeout, [&] { return events_.size() > since; });
  if (since >= events_.size()) return {};
  return {events_.begin() + static_cast<std::ptrdiff_t>(since), events_.end()};
}

void Store::export_archive(const std::filesystem::path& path) const {
  std::string out = std::string(kArchiveHeaderPrefix) + std::to_string(kSchemaVersion) + "\n";
  {
    std::lock_guard lock(mu_);
    for (const auto& e : events_) out += encode_line(e);
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) storage_failure("cannot write archive " + path.string());
  file << out;
  file.flush();
  if (!file) storage_failure("cannot write archive " + path.string());
}

model::State Store::import_archive(const std::filesystem::path& path) {
  std::lock_guard lock(mu_);
  if (!events_.empty() || std::filesystem::file_size(log_path_) != 0) {
    throw Error(ErrorCode::NonEmptyTarget, "target not empty: " + data_dir_.string() + " already holds events");
  }
  auto data = read_file(path);
  const auto nl = data.find('\n');
  const auto header = data.substr(0, nl);
  if (!header.starts_with(kArchiveHeaderPrefix)) {
    throw Error(ErrorCode::SchemaMismatch, "not a deme archive: " + path.string());
  }
  const auto version = header.substr(kArchiveHeaderPrefix.size());
  if (version != std::to_string(kSchemaVersion)) {
    throw Error(ErrorCode::SchemaMismatch, "archive schema version " + version + " is not supported (expected " +
                                               std::to_string(kSchemaVersion) + ")");
  }
  const std::string body = nl == std::string::npos ? std::string() : data.substr(nl + 1);
  std::vector<Event> imported;
  auto state = replay(split_lines(body), imported);
  std::string bytes;
  for (const auto& e : imported) bytes += encode_line(e);
  write_all(bytes);
  events_ = std::move(imported);
  last_time_ = events_.empty() ? Timestamp{} : events_.back().occurred_at;
  appended_.notify_all();
  return state;
}

}  // namespace deme
