#pragma once

#include <optional>
#include <string>
#include <string_view>

// Document text is stored as UTF-8 and addressed by code point. These helpers
// convert between the two; every offset in the system is a code point index.
namespace deme::utf8 {

/// Decodes strict UTF-8 (no overlongs, no surrogates, max U+10FFFF).
/// Returns nullopt on any malformed sequence.
std::optional<std::u32string> try_decode(std::string_view bytes);

/// As try_decode, but throws Error(InvalidEncoding).
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);

bool is_valid(std::string_view bytes);

/// Number of code points; throws Error(InvalidEncoding) on malformed input.
std::size_t length(std::string_view bytes);

}  // namespace deme::utf8
