#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace flexlex::text {

// Returns the byte offset of the first invalid sequence, or nullopt if `s` is well-formed UTF-8.
// Overlong encodings, surrogates and code points above U+10FFFF are rejected.
std::optional<std::size_t> find_invalid_utf8(std::string_view s);

inline bool is_valid_utf8(std::string_view s) { return !find_invalid_utf8(s).has_value(); }

// Unicode simple lowercase mapping applied code point by code point. Input must be valid UTF-8.
std::string fold_case(std::string_view s);

// True when `s` is non-empty and every code point is punctuation, a symbol or a decimal digit.
bool is_punct_or_digit(std::string_view s);

}  // namespace flexlex::text
