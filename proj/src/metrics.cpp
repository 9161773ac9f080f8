#include "pieces/metrics.hpp"

#include <algorithm>
#include <string>

#include "pieces/error.hpp"

namespace pieces {

Rational EvalReport::precision() const {
  if (pred_total == 0) return Rational::ratio(1, 1);
  return Rational::ratio(tp, pred_total);
}

Rational EvalReport::recall() const {
  if (gold_total == 0) return Rational::ratio(1, 1);
  return Rational::ratio(tp, gold_total);
}

Rational EvalReport::f1() const {
  if (pred_total + gold_total == 0) return Rational::ratio(1, 1);
  return Rational::ratio(2 * tp, pred_total + gold_total);
}

void EvalReport::add(const EvalReport& other) {
  tp += other.tp;
  pred_total += other.pred_total;
  gold_total += other.gold_total;
}

std::string_view mset_kind_name(MsetItemKind kind) {
  switch (kind) {
    case MsetItemKind::Seg:
      return "seg";
    case MsetItemKind::SegPos:
      return "seg-pos";
    case MsetItemKind::SegFeats:
      return "seg-feats";
  }
  return "seg";
}

namespace {

// Projected items as strings; '\t' cannot occur inside column values.
std::vector<std::string> project_items(const MorphToken& token, MsetItemKind kind) {
  std::vector<std::string> out;
  out.reserve(token.items.size());
  for (const MorphItem& item : token.items) {
    switch (kind) {
      case MsetItemKind::Seg:
        out.push_back(item.segment);
        break;
      case MsetItemKind::SegPos:
        out.push_back(item.segment + "\t" + item.pos);
        break;
      case MsetItemKind::SegFeats:
        out.push_back(item.segment + "\t" + item.feats);
        break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int64_t sorted_multiset_intersection(const std::vector<std::string>& a,
                                     const std::vector<std::string>& b) {
  int64_t shared = 0;
  size_t i = 0;
  size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] == b[j]) {
      ++shared;
      ++i;
      ++j;
    } else if (a[i] < b[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return shared;
}

}  // namespace

EvalReport token_mset_counts(const MorphToken& gold, const MorphToken& pred, MsetItemKind kind) {
  const auto gold_items = project_items(gold, kind);
  const auto pred_items = project_items(pred, kind);
  EvalReport report;
  report.tp = sorted_multiset_intersection(gold_items, pred_items);
  report.pred_total = static_cast<int64_t>(pred_items.size());
  report.gold_total = static_cast<int64_t>(gold_items.size());
  return report;
}

EvalReport mset_score(const std::vector<MorphSentence>& gold,
                      const std::vector<MorphSentence>& pred, MsetItemKind kind) {
  if (gold.size() != pred.size())
    throw FormatError("sentence count mismatch: gold " + std::to_string(gold.size()) +
                      ", pred " + std::to_string(pred.size()));
  EvalReport report;
  for (size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != pred[s].size())
      throw FormatError("sentence " + std::to_string(s) + ": token count mismatch: gold " +
                        std::to_string(gold[s].size()) + ", pred " +
                        std::to_string(pred[s].size()));
    for (size_t t = 0; t < gold[s].size(); ++t)
      report.add(token_mset_counts(gold[s][t], pred[s][t], kind));
  }
  return report;
}

namespace {

std::vector<NerMention> sorted_unique_mentions(const std::vector<NerMention>& mentions,
                                               std::string_view side) {
  std::vector<NerMention> sorted = mentions;
  std::sort(sorted.begin(), sorted.end());
  const auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end())
    throw FormatError(std::string(side) + " contains a duplicate mention (sentence " +
                      std::to_string(dup->sentence_id) + ", units " + std::to_string(dup->start) +
                      ".." + std::to_string(dup->end) + ", " + dup->entity_type + ")");
  return sorted;
}

}  // namespace

EvalReport span_f1(const std::vector<NerMention>& gold, const std::vector<NerMention>& pred) {
  const auto gold_sorted = sorted_unique_mentions(gold, "gold");
  const auto pred_sorted = sorted_unique_mentions(pred, "pred");
  EvalReport report;
  report.gold_total = static_cast<int64_t>(gold_sorted.size());
  report.pred_total = static_cast<int64_t>(pred_sorted.size());
  size_t i = 0;
  size_t j = 0;
  while (i < gold_sorted.size() && j < pred_sorted.size()) {
    if (gold_sorted[i] == pred_sorted[j]) {
      ++report.tp;
      ++i;
      ++j;
    } else if (gold_sorted[i] < pred_sorted[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return report;
}

EvalReport sentence_accuracy_report(const std::vector<Sentiment>& gold,
                                    const std::vector<Sentiment>& pred) {
  if (gold.size() != pred.size())
    throw FormatError("label count mismatch: gold " + std::to_string(gold.size()) + ", pred " +
                      std::to_string(pred.size()));
  EvalReport report;
  report.gold_total = static_cast<int64_t>(gold.size());
  report.pred_total = static_cast<int64_t>(pred.size());
  for (size_t i = 0; i < gold.size(); ++i)
    if (gold[i] == pred[i]) ++report.tp;
  return report;
}

Rational sentence_accuracy(const std::vector<Sentiment>& gold,
                           const std::vector<Sentiment>& pred) {
  return sentence_accuracy_report(gold, pred).recall();
}

}  // namespace pieces
