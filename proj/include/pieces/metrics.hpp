#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "pieces/annotation.hpp"
#include "pieces/rational.hpp"

namespace pieces {

// Micro-averaged counts with derived scores. Vacuous conventions: an empty
// denominator yields 1 so that identical empty inputs score perfectly.
struct EvalReport {
  int64_t tp = 0;
  int64_t pred_total = 0;
  int64_t gold_total = 0;

  Rational precision() const;
  Rational recall() const;
  Rational f1() const;  // equals 2*tp/(pred_total+gold_total) when defined

  void add(const EvalReport& other);
  bool empty() const { return tp == 0 && pred_total == 0 && gold_total == 0; }
  bool operator==(const EvalReport&) const = default;
};

enum class MsetItemKind { Seg, SegPos, SegFeats };

std::string_view mset_kind_name(MsetItemKind kind);

// Multiset intersection of one aligned token pair under the kind projection.
EvalReport token_mset_counts(const MorphToken& gold, const MorphToken& pred, MsetItemKind kind);

// Alignment is strictly positional: sentence i to sentence i, token j to
// token j. Mismatched counts raise a format error naming the sentence.
EvalReport mset_score(const std::vector<MorphSentence>& gold,
                      const std::vector<MorphSentence>& pred, MsetItemKind kind);

// Exact (sentence, start, end, type) matching. Duplicates within either
// side raise a format error.
EvalReport span_f1(const std::vector<NerMention>& gold, const std::vector<NerMention>& pred);

EvalReport sentence_accuracy_report(const std::vector<Sentiment>& gold,
                                    const std::vector<Sentiment>& pred);

// Fraction of positions with equal labels; 1 for empty input.
Rational sentence_accuracy(const std::vector<Sentiment>& gold, const std::vector<Sentiment>& pred);

}  // namespace pieces
