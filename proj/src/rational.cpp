#include "deme/rational.hpp"

#include <charconv>
#include <numeric>

#include "deme/error.hpp"

namespace deme {

namespace {

std::int64_t parse_digits(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || value < 0) {
    throw Error(ErrorCode::BadRequest, "not a fraction: '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den <= 0 || num < 0) throw Error(ErrorCode::BadRequest, "fraction must be non-negative with positive denominator");
  const auto g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

Rational Rational::parse(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return {parse_digits(text.substr(0, slash), text), parse_digits(text.substr(slash + 1), text)};
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto frac = text.substr(dot + 1);
    if (frac.size() > 12) throw Error(ErrorCode::BadRequest, "too many decimal places: '" + std::string(text) + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const auto int_part = text.substr(0, dot);
    const std::int64_t whole = int_part.empty() ? 0 : parse_digits(int_part, text);
    return {whole * den + parse_digits(frac, text), den};
  }
  return {parse_digits(text, text), 1};
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace deme
