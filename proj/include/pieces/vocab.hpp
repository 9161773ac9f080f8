#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pieces/frequency.hpp"
#include "pieces/rational.hpp"

namespace pieces {

inline constexpr std::string_view kContinuationPrefix = "##";
inline constexpr std::array<std::string_view, 5> kSpecialPieces = {"[PAD]", "[UNK]", "[CLS]",
                                                                   "[SEP]", "[MASK]"};
inline constexpr int32_t kUnkId = 1;

enum class TrainMode { WordpieceScore, BpeFrequency };

std::string_view train_mode_name(TrainMode mode);
TrainMode parse_train_mode(std::string_view name);  // "wordpiece" | "bpe"

// Non-special piece shape rule: non-empty, free of Unicode whitespace, and
// either word-initial or carrying exactly one continuation prefix.
bool valid_piece_shape(std::string_view piece);

// Ordered piece list with contiguous ids. Ids 0..4 are the special pieces;
// every other piece is either word-initial or carries exactly one "##"
// continuation prefix. Immutable once built; equality is piece-list equality.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Validates the piece list (specials at 0..4, no duplicates, prefix rule).
  // Throws FormatError on violation; ConfigError if target_size < 5 or
  // pieces.size() > target_size.
  static Vocabulary with_pieces(std::vector<std::string> pieces, size_t target_size,
                                TrainMode mode = TrainMode::WordpieceScore);

  const std::vector<std::string>& pieces() const { return pieces_; }
  size_t size() const { return pieces_.size(); }
  size_t target_size() const { return target_size_; }
  TrainMode mode() const { return mode_; }

  // Id of a piece, or -1 when absent.
  int32_t id_of(std::string_view piece) const;
  bool contains(std::string_view piece) const { return id_of(piece) >= 0; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.pieces_ == b.pieces_;
  }

 private:
  struct Hash {
    using is_transparent = void;
    size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
  };

  std::vector<std::string> pieces_;
  std::unordered_map<std::string, int32_t, Hash, std::equal_to<>> ids_;
  size_t target_size_ = 0;
  TrainMode mode_ = TrainMode::WordpieceScore;
};

// One vocabulary-growing merge. `merged` is `left` followed by `right`
// stripped of its continuation prefix; `step` indexes the training log.
struct MergeEvent {
  std::string left;
  std::string right;
  std::string merged;
  Rational score;
  int64_t step = 0;

  friend bool operator==(const MergeEvent&, const MergeEvent&) = default;
};

// Specials, then word-initial forms of the alphabet, then continuation
// forms, each block sorted by codepoint. When the alphabet does not fit the
// target, characters are admitted by descending corpus frequency (ties by
// ascending codepoint). Throws ConfigError if target_size < 5.
Vocabulary seed_alphabet(const FrequencyTable& table, size_t target_size,
                         TrainMode mode = TrainMode::WordpieceScore);

struct TrainConfig {
  size_t target_size = 0;
  int64_t min_pair_frequency = 2;
  TrainMode mode = TrainMode::WordpieceScore;
};

struct TrainResult {
  Vocabulary vocabulary;
  std::vector<MergeEvent> merges;
  size_t seed_size = 0;  // piece count before the first merge
};

// Merge-based trainer over word types. Deterministic: identical inputs give
// identical results; the merge sequence does not depend on target_size, so
// training at a larger target extends the smaller target's piece list.
TrainResult train_vocabulary(const FrequencyTable& table, const TrainConfig& config);

// One piece per line, line index = id, UTF-8, LF. Load validates the
// invariants and reports offending line numbers.
void save_vocabulary(const Vocabulary& v, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);

// TSV merge log: step, left, right, merged, score as an exact fraction.
void save_merge_log(const std::vector<MergeEvent>& merges, const std::string& path);

}  // namespace pieces
