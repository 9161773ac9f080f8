#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pieces {

// One morphological analysis item. pos and feats hold "_" when absent;
// feats is canonical: "key=value" pairs sorted and joined by "|".
struct MorphItem {
  std::string segment;
  std::string pos = "_";
  std::string feats = "_";
  bool operator==(const MorphItem&) const = default;
};

struct MorphToken {
  int64_t token_index = 0;
  std::string surface;
  std::vector<MorphItem> items;  // multiset, duplicates preserved
};

using MorphSentence = std::vector<MorphToken>;

// Sorts "key=value" pairs and rejects duplicate keys. "_" and "" map to "_".
std::string canonical_feats(std::string_view feats);

// Rows: token_index<TAB>surface<TAB>segment<TAB>pos<TAB>feats, blank line
// between sentences. Rows sharing token_index aggregate into one token.
// A row with segment "_" declares a token with zero items.
std::vector<MorphSentence> read_morph_file(const std::string& path);

struct NerLabel {
  enum class Kind { O, B, I, E, S };
  Kind kind = Kind::O;
  std::string type;  // empty iff kind == O
  bool operator==(const NerLabel&) const = default;
};

NerLabel parse_ner_label(std::string_view text);
std::string ner_label_string(const NerLabel& label);

struct NerMention {
  int32_t sentence_id = 0;
  int32_t start = 0;  // inclusive unit index
  int32_t end = 0;    // inclusive unit index
  std::string entity_type;
  auto operator<=>(const NerMention&) const = default;
};

// Total decode with deterministic repair: a leading I/E opens a span, a type
// change closes the old span at the previous unit, an unclosed span closes
// at the last in-span unit.
std::vector<NerMention> decode_bioes(const std::vector<NerLabel>& labels, int32_t sentence_id);

// Inverse for well-formed data; mentions must lie in [0, n_units) and must
// not overlap.
std::vector<NerLabel> encode_bioes(const std::vector<NerMention>& mentions, size_t n_units);

enum class BioesLevel { Token, Morpheme };

struct BioesSentence {
  std::vector<std::string> units;  // one surface per labeled unit
  std::vector<NerLabel> labels;
  std::vector<int32_t> unit_token;           // raw-token index behind each unit
  std::vector<std::string> token_surfaces;   // one surface per raw token
};

// Token level rows: surface<TAB>label. Morpheme level rows carry the
// morpheme-to-token mapping: token_index<TAB>token_surface<TAB>segment<TAB>label.
std::vector<BioesSentence> read_bioes_file(const std::string& path, BioesLevel level);

enum class Sentiment { Positive, Negative, Neutral };

Sentiment parse_sentiment(std::string_view text);
std::string_view sentiment_name(Sentiment s);

struct SentimentExample {
  Sentiment label = Sentiment::Neutral;
  std::string sentence;
};

// Rows: label<TAB>sentence.
std::vector<SentimentExample> read_sentiment_file(const std::string& path);

}  // namespace pieces
