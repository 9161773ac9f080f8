#include "pieces/normalize.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "pieces/error.hpp"
#include "pieces/unicode.hpp"

namespace pieces {

namespace {

struct Normalizers {
  const icu::Normalizer2* nfc;
  const icu::Normalizer2* nfd;
};

const Normalizers& normalizers() {
  static const Normalizers n = [] {
    UErrorCode ec = U_ZERO_ERROR;
    Normalizers r;
    r.nfc = icu::Normalizer2::getNFCInstance(ec);
    r.nfd = icu::Normalizer2::getNFDInstance(ec);
    if (U_FAILURE(ec)) throw IoError("ICU normalizer initialization failed");
    return r;
  }();
  return n;
}

}  // namespace

std::string normalize(std::string_view text, const NormalizeConfig& config) {
  size_t bad = 0;
  if (!uni::valid_utf8(text, &bad))
    throw Utf8Error("invalid UTF-8 at byte offset " + std::to_string(bad), bad);

  const auto& norm = normalizers();
  UErrorCode ec = U_ZERO_ERROR;
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));

  icu::UnicodeString result;
  if (config.strip_marks) {
    icu::UnicodeString decomposed = norm.nfd->normalize(u, ec);
    icu::UnicodeString kept;
    for (int32_t i = 0; i < decomposed.length();) {
      const UChar32 c = decomposed.char32At(i);
      if (!uni::is_nonspacing_mark(static_cast<char32_t>(c))) kept.append(c);
      i += U16_LENGTH(c);
    }
    result = norm.nfc->normalize(kept, ec);
  } else {
    result = norm.nfc->normalize(u, ec);
  }
  if (U_FAILURE(ec)) throw IoError("ICU normalization failed");

  std::string out;
  result.toUTF8String(out);
  return out;
}

}  // namespace pieces
