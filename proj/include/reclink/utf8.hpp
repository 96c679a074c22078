#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace reclink::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

// Decodes the codepoint starting at s[pos] and advances pos past it.
// Malformed sequences consume one byte and yield kReplacement.
char32_t next_codepoint(std::string_view s, std::size_t& pos);

// ASCII base-letter expansion for a Latin codepoint ("É" -> "E",
// "ß" -> "SS", "Æ" -> "AE"). Covers Latin-1 Supplement, Latin Extended-A
// and the Latin Extended Additional vowel blocks (Vietnamese). Returns an
// empty view when the codepoint has no Latin base letter.
std::string_view fold_to_ascii(char32_t cp);

// Transcodes ISO-8859-1 bytes to UTF-8.
std::string latin1_to_utf8(std::string_view bytes);

}  // namespace reclink::utf8
