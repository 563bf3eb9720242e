#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace deme {

/// Exact non-negative fraction, always stored in lowest terms.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den);

  /// Accepts "p/q", integers and finite decimals ("0.5", "0.667").
  static Rational parse(std::string_view text);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  /// "p/q", or just "p" when q == 1.
  std::string to_string() const;

  friend bool operator==(const Rational&, const Rational&) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    return static_cast<__int128>(a.num_) * b.den_ <=> static_cast<__int128>(b.num_) * a.den_;
  }

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace deme
