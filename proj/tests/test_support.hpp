#pragma once

#include <stdlib.h>

#include <atomic>
#include <filesystem>
#include <memory>
#include <string>

#include "deme/store.hpp"
#include "deme/timestamp.hpp"

namespace testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  TempDir() {
    auto pattern = (std::filesystem::temp_directory_path() / "deme-test-XXXXXX").string();
    if (!mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
    path_ = pattern;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

/// Deterministic clock starting at 2026-01-01T00:00:00Z, one second per read.
inline deme::Store::Clock stepping_clock() {
  auto ticks = std::make_shared<std::atomic<long long>>(0);
  return [ticks] {
    const long long base = 1767225600000LL;
    return deme::Timestamp(std::chrono::milliseconds(base + 1000 * ticks->fetch_add(1)));
  };
}

}  // namespace testing
