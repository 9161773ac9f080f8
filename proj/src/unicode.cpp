#include "pieces/unicode.hpp"

#include <unicode/uchar.h>

#include "pieces/error.hpp"

namespace pieces::uni {

char32_t decode_at(std::string_view s, size_t& pos) {
  const size_t start = pos;
  const auto fail = [start] {
    throw Utf8Error("invalid UTF-8 at byte offset " + std::to_string(start), start);
  };
  const auto byte = [&](size_t i) { return static_cast<unsigned char>(s[i]); };

  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }

  int len;
  char32_t c;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    c = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    c = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    c = b0 & 0x07;
  } else {
    fail();
    return 0;
  }
  if (pos + len > s.size()) fail();
  for (int i = 1; i < len; ++i) {
    const unsigned char b = byte(pos + i);
    if ((b & 0xC0) != 0x80) fail();
    c = (c << 6) | (b & 0x3F);
  }
  static constexpr char32_t kMinByLen[5] = {0, 0, 0x80, 0x800, 0x10000};
  if (c < kMinByLen[len]) fail();                 // overlong
  if (c >= 0xD800 && c <= 0xDFFF) fail();         // surrogate
  if (c > 0x10FFFF) fail();
  pos += len;
  return c;
}

std::vector<uint32_t> codepoint_offsets(std::string_view s) {
  std::vector<uint32_t> offsets;
  offsets.reserve(s.size() + 1);
  size_t pos = 0;
  while (pos < s.size()) {
    offsets.push_back(static_cast<uint32_t>(pos));
    decode_at(s, pos);
  }
  offsets.push_back(static_cast<uint32_t>(s.size()));
  return offsets;
}

void append_utf8(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

bool valid_utf8(std::string_view s, size_t* bad_offset) {
  size_t pos = 0;
  try {
    while (pos < s.size()) decode_at(s, pos);
  } catch (const Utf8Error& e) {
    if (bad_offset) *bad_offset = e.byte_offset;
    return false;
  }
  return true;
}

size_t count_codepoints(std::string_view s) {
  size_t pos = 0;
  size_t n = 0;
  while (pos < s.size()) {
    decode_at(s, pos);
    ++n;
  }
  return n;
}

bool is_whitespace(char32_t c) { return u_isUWhiteSpace(static_cast<UChar32>(c)); }

bool is_punct_or_symbol(char32_t c) {
  const uint32_t mask = U_GET_GC_MASK(static_cast<UChar32>(c));
  return (mask & (U_GC_P_MASK | U_GC_S_MASK)) != 0;
}

bool is_nonspacing_mark(char32_t c) {
  return u_charType(static_cast<UChar32>(c)) == U_NON_SPACING_MARK;
}

}  // namespace pieces::uni
