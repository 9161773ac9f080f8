#pragma once

#include <string>
#include <string_view>

namespace pieces {

struct NormalizeConfig {
  // Remove nonspacing marks (Unicode Mn), e.g. Hebrew niqqud. Off by default
  // so that normalization is the identity beyond NFC composition.
  bool strip_marks = false;
};

// NFC-normalizes valid UTF-8 text. With strip_marks the text is decomposed,
// Mn codepoints are dropped, and the remainder is recomposed, so the result
// is still NFC. Never case-folds. Throws Utf8Error on invalid input.
std::string normalize(std::string_view text, const NormalizeConfig& config = {});

}  // namespace pieces
