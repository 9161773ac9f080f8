#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pieces::uni {

// Decodes the codepoint starting at `pos` and advances `pos` past it.
// Throws Utf8Error (offset = pos) on malformed input, including overlong
// encodings, surrogates and truncated sequences.
char32_t decode_at(std::string_view s, size_t& pos);

// Byte offsets of every codepoint start, plus a final s.size() sentinel.
std::vector<uint32_t> codepoint_offsets(std::string_view s);

void append_utf8(std::string& out, char32_t c);

// True when s is valid UTF-8; otherwise stores the failing byte offset.
bool valid_utf8(std::string_view s, size_t* bad_offset = nullptr);

size_t count_codepoints(std::string_view s);

bool is_whitespace(char32_t c);       // Unicode White_Space
bool is_punct_or_symbol(char32_t c);  // general categories P* and S*
bool is_nonspacing_mark(char32_t c);  // general category Mn

}  // namespace pieces::uni
