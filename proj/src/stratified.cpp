#include "pieces/stratified.hpp"

#include <algorithm>

#include "pieces/error.hpp"

namespace pieces {

void SplitHistogram::add(const PieceSequence& seq, int64_t weight) {
  const auto n = static_cast<int64_t>(seq.n_pieces());
  switch (split_group(seq)) {
    case SplitGroup::One:
      one += weight;
      break;
    case SplitGroup::Two:
      two += weight;
      break;
    case SplitGroup::ThreePlus:
      three_plus += weight;
      break;
  }
  by_exact[n] += weight;
  if (seq.is_unknown) unk_count += weight;
  total += weight;
}

void SplitHistogram::merge(const SplitHistogram& other) {
  one += other.one;
  two += other.two;
  three_plus += other.three_plus;
  for (const auto& [n, count] : other.by_exact) by_exact[n] += count;
  unk_count += other.unk_count;
  total += other.total;
}

int64_t SplitHistogram::group_count(SplitGroup g) const {
  switch (g) {
    case SplitGroup::One:
      return one;
    case SplitGroup::Two:
      return two;
    case SplitGroup::ThreePlus:
      return three_plus;
  }
  return 0;
}

SplitHistogram histogram_from_table(const FrequencyTable& table,
                                    const WordpieceTokenizer& tokenizer, bool by_type) {
  SplitHistogram histogram;
  for (const auto& [surface, count] : table.sorted_entries())
    histogram.add(tokenizer.tokenize(surface), by_type ? 1 : count);
  return histogram;
}

const PieceSequence& SplitCache::pieces_of(const std::string& surface) {
  const auto it = cache_.find(surface);
  if (it != cache_.end()) return it->second;
  const std::string normalized = normalize(surface, normalize_config_);
  return cache_.emplace(surface, tokenizer_.tokenize(normalized)).first->second;
}

const EvalReport* StratifiedReport::group(std::string_view name) const {
  for (const auto& [group_name, report] : per_group)
    if (group_name == name) return &report;
  return nullptr;
}

StratifiedReport stratified_mset(const std::vector<MorphSentence>& gold,
                                 const std::vector<MorphSentence>& pred, MsetItemKind kind,
                                 const WordpieceTokenizer& tokenizer,
                                 const NormalizeConfig& normalize_config) {
  StratifiedReport report;
  report.overall = mset_score(gold, pred, kind);

  SplitCache cache(tokenizer, normalize_config);
  EvalReport groups[3];
  for (size_t s = 0; s < gold.size(); ++s) {
    for (size_t t = 0; t < gold[s].size(); ++t) {
      const SplitGroup g = split_group(cache.pieces_of(gold[s][t].surface));
      groups[static_cast<size_t>(g)].add(token_mset_counts(gold[s][t], pred[s][t], kind));
    }
  }
  report.per_group.emplace_back("1", groups[0]);
  report.per_group.emplace_back("2", groups[1]);
  report.per_group.emplace_back("3+", groups[2]);
  return report;
}

bool mention_split_flag(const BioesSentence& sentence, const NerMention& mention,
                        SplitCache& cache) {
  int32_t last_token = -1;
  for (int32_t unit = mention.start; unit <= mention.end; ++unit) {
    const int32_t token = sentence.unit_token[unit];
    if (token == last_token) continue;
    last_token = token;
    if (cache.pieces_of(sentence.token_surfaces[token]).n_pieces() >= 2) return true;
  }
  return false;
}

std::vector<NerMention> decode_all_mentions(const std::vector<BioesSentence>& sentences) {
  std::vector<NerMention> mentions;
  for (size_t s = 0; s < sentences.size(); ++s) {
    auto decoded = decode_bioes(sentences[s].labels, static_cast<int32_t>(s));
    mentions.insert(mentions.end(), std::make_move_iterator(decoded.begin()),
                    std::make_move_iterator(decoded.end()));
  }
  return mentions;
}

namespace {

// Splits mentions into {split, not_split} by each mention's own sentence.
std::pair<std::vector<NerMention>, std::vector<NerMention>> partition_mentions(
    const std::vector<BioesSentence>& sentences, const std::vector<NerMention>& mentions,
    SplitCache& cache) {
  std::pair<std::vector<NerMention>, std::vector<NerMention>> out;
  for (const NerMention& mention : mentions) {
    const BioesSentence& sentence = sentences[mention.sentence_id];
    if (mention_split_flag(sentence, mention, cache))
      out.first.push_back(mention);
    else
      out.second.push_back(mention);
  }
  return out;
}

}  // namespace

StratifiedReport stratified_ner(const std::vector<BioesSentence>& gold,
                                const std::vector<BioesSentence>& pred,
                                const WordpieceTokenizer& tokenizer,
                                const NormalizeConfig& normalize_config) {
  if (gold.size() != pred.size())
    throw FormatError("sentence count mismatch: gold " + std::to_string(gold.size()) +
                      ", pred " + std::to_string(pred.size()));
  const auto gold_mentions = decode_all_mentions(gold);
  const auto pred_mentions = decode_all_mentions(pred);

  StratifiedReport report;
  report.overall = span_f1(gold_mentions, pred_mentions);

  SplitCache cache(tokenizer, normalize_config);
  const auto [gold_split, gold_whole] = partition_mentions(gold, gold_mentions, cache);
  const auto [pred_split, pred_whole] = partition_mentions(pred, pred_mentions, cache);
  report.per_group.emplace_back("split", span_f1(gold_split, pred_split));
  report.per_group.emplace_back("not_split", span_f1(gold_whole, pred_whole));
  return report;
}

MentionSplitCounts mention_split_histogram(const std::vector<BioesSentence>& gold,
                                           const WordpieceTokenizer& tokenizer,
                                           const NormalizeConfig& normalize_config) {
  SplitCache cache(tokenizer, normalize_config);
  MentionSplitCounts counts;
  for (size_t s = 0; s < gold.size(); ++s) {
    for (const NerMention& mention :
         decode_bioes(gold[s].labels, static_cast<int32_t>(s))) {
      if (mention_split_flag(gold[s], mention, cache))
        ++counts.split;
      else
        ++counts.not_split;
    }
  }
  return counts;
}

}  // namespace pieces
