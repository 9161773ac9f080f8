#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pieces/annotation.hpp"
#include "pieces/frequency.hpp"
#include "pieces/vocab.hpp"

namespace pieces::testing {

// Quadratic longest-match-first tokenizer over a plain piece set. Returns
// {"[UNK]"} when any position has no match or the word exceeds max_chars.
std::vector<std::string> naive_wordpiece(std::string_view word,
                                         const std::set<std::string>& pieces,
                                         size_t max_chars = 100);

// Multiset intersection by linear search and removal.
int64_t naive_multiset_intersection(std::vector<std::string> a, std::vector<std::string> b);

// Shared-mention count by enumerating every (sentence, start, end, type)
// combination present on either side.
int64_t enumerated_span_tp(const std::vector<NerMention>& gold,
                           const std::vector<NerMention>& pred);

// Reference trainer that recounts every pair statistic from scratch at each
// step. Same selection contract as train_vocabulary, none of its caching.
std::vector<std::string> naive_train(const FrequencyTable& table, const TrainConfig& config);

}  // namespace pieces::testing
