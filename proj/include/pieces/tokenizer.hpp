#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pieces/normalize.hpp"
#include "pieces/pretokenize.hpp"
#include "pieces/vocab.hpp"

namespace pieces {

// One raw token's pieces. For unknown results piece_ids is exactly {kUnkId};
// otherwise stripping continuation prefixes and concatenating reconstructs
// the source word byte for byte.
struct PieceSequence {
  std::vector<int32_t> piece_ids;
  bool is_unknown = false;

  size_t n_pieces() const { return piece_ids.size(); }
  bool operator==(const PieceSequence&) const = default;
};

enum class SplitGroup { One, Two, ThreePlus };

// Group labels as they appear in figure CSVs.
std::string_view split_group_name(SplitGroup g);

// ONE covers unknowns too; callers that care track is_unknown separately.
SplitGroup split_group(const PieceSequence& seq);

class WordpieceTokenizer {
 public:
  explicit WordpieceTokenizer(Vocabulary vocabulary, size_t max_chars = 100);

  // Greedy longest-match-first. Any position with no match, or a word
  // longer than max_chars codepoints, maps the whole word to [UNK].
  PieceSequence tokenize(std::string_view word) const;

  const Vocabulary& vocabulary() const { return vocab_; }
  size_t max_chars() const { return max_chars_; }

  const std::string& piece(int32_t id) const { return vocab_.pieces()[id]; }
  std::string joined_pieces(const PieceSequence& seq) const;

 private:
  struct Hash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };
  using Index = std::unordered_map<std::string, int32_t, Hash, std::equal_to<>>;

  Vocabulary vocab_;
  size_t max_chars_;
  Index initial_;       // keyed by piece text
  Index continuation_;  // keyed by piece text minus the "##" prefix
  size_t initial_max_bytes_ = 0;
  size_t continuation_max_bytes_ = 0;
};

struct TokenPieces {
  PreToken token;
  PieceSequence pieces;
};

// Normalize, pretokenize and tokenize one line of raw text.
std::vector<TokenPieces> tokenize_line(const WordpieceTokenizer& tokenizer, std::string_view line,
                                       const NormalizeConfig& normalize_config);

}  // namespace pieces
