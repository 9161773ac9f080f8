#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "pieces/frequency.hpp"
#include "pieces/metrics.hpp"
#include "pieces/tokenizer.hpp"

namespace pieces {

struct SplitHistogram {
  int64_t one = 0;
  int64_t two = 0;
  int64_t three_plus = 0;
  std::map<int64_t, int64_t> by_exact;  // n_pieces -> count
  int64_t unk_count = 0;                // subset of the n_pieces==1 bucket
  int64_t total = 0;

  void add(const PieceSequence& seq, int64_t weight = 1);
  void merge(const SplitHistogram& other);
  int64_t group_count(SplitGroup g) const;
};

// Tokenizes each distinct surface once. by_type counts types; otherwise
// every occurrence counts via the table's frequencies.
SplitHistogram histogram_from_table(const FrequencyTable& table,
                                    const WordpieceTokenizer& tokenizer, bool by_type);

// Memoizes n_pieces per surface; surfaces are normalized before tokenizing
// so annotation files need not be pre-normalized.
class SplitCache {
 public:
  SplitCache(const WordpieceTokenizer& tokenizer, NormalizeConfig normalize_config)
      : tokenizer_(tokenizer), normalize_config_(normalize_config) {}

  const PieceSequence& pieces_of(const std::string& surface);

 private:
  const WordpieceTokenizer& tokenizer_;
  NormalizeConfig normalize_config_;
  std::unordered_map<std::string, PieceSequence> cache_;
};

struct StratifiedReport {
  // Fixed group order: "1","2","3+" for mset, "split","not_split" for NER.
  std::vector<std::pair<std::string, EvalReport>> per_group;
  EvalReport overall;

  const EvalReport* group(std::string_view name) const;
};

// Each aligned token pair lands in the group of the gold surface's piece
// count; overall is the unstratified score over the same data.
StratifiedReport stratified_mset(const std::vector<MorphSentence>& gold,
                                 const std::vector<MorphSentence>& pred, MsetItemKind kind,
                                 const WordpieceTokenizer& tokenizer,
                                 const NormalizeConfig& normalize_config);

// True iff any raw token overlapping the mention splits into 2+ pieces.
bool mention_split_flag(const BioesSentence& sentence, const NerMention& mention,
                        SplitCache& cache);

StratifiedReport stratified_ner(const std::vector<BioesSentence>& gold,
                                const std::vector<BioesSentence>& pred,
                                const WordpieceTokenizer& tokenizer,
                                const NormalizeConfig& normalize_config);

struct MentionSplitCounts {
  int64_t split = 0;
  int64_t not_split = 0;
};

MentionSplitCounts mention_split_histogram(const std::vector<BioesSentence>& gold,
                                           const WordpieceTokenizer& tokenizer,
                                           const NormalizeConfig& normalize_config);

// Mentions of every sentence in file order, with sentence ids assigned by
// position.
std::vector<NerMention> decode_all_mentions(const std::vector<BioesSentence>& sentences);

}  // namespace pieces
