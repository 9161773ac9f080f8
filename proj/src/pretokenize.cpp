#include "pieces/pretokenize.hpp"

#include "pieces/unicode.hpp"

namespace pieces {

std::vector<PreToken> pretokenize(std::string_view line) {
  std::vector<PreToken> tokens;
  std::string word;
  uint32_t word_start = 0;

  const auto flush_word = [&] {
    if (!word.empty()) {
      tokens.push_back(PreToken{std::move(word), word_start});
      word.clear();
    }
  };

  size_t pos = 0;
  while (pos < line.size()) {
    const size_t start = pos;
    const char32_t c = uni::decode_at(line, pos);
    if (uni::is_whitespace(c)) {
      flush_word();
    } else if (uni::is_punct_or_symbol(c)) {
      flush_word();
      tokens.push_back(
          PreToken{std::string(line.substr(start, pos - start)), static_cast<uint32_t>(start)});
    } else {
      if (word.empty()) word_start = static_cast<uint32_t>(start);
      word.append(line.substr(start, pos - start));
    }
  }
  flush_word();
  return tokens;
}

}  // namespace pieces
