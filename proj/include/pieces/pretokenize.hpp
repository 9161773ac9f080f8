#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pieces {

// One raw token of a pre-tokenized line. A surface is either a maximal run
// of non-space, non-punctuation codepoints, or a single punctuation/symbol
// codepoint; it never mixes the two classes.
struct PreToken {
  std::string surface;
  uint32_t byte_offset = 0;  // position of the first byte in the source line

  friend bool operator==(const PreToken&, const PreToken&) = default;
};

// Splits a normalized line on Unicode whitespace and isolates every
// punctuation or symbol codepoint (categories P* and S*) as its own token.
// Concatenating the surfaces in order recovers the non-whitespace codepoints
// of the line. Throws Utf8Error on invalid input.
std::vector<PreToken> pretokenize(std::string_view line);

}  // namespace pieces
