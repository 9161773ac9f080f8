#pragma once

#include <iosfwd>
#include <string>

#include "pieces/metrics.hpp"
#include "pieces/stratified.hpp"

namespace pieces {

// group,count,fraction rows for 1 / 2 / 3+; fractions to 6 decimals.
void write_histogram_csv(std::ostream& out, const SplitHistogram& histogram);

// n_pieces,count,fraction rows in increasing n_pieces order.
void write_exact_histogram_csv(std::ostream& out, const SplitHistogram& histogram);

// group,count,fraction rows for split / not_split mentions.
void write_mention_csv(std::ostream& out, const MentionSplitCounts& counts);

// One row per group plus an "overall" row; scores both as 6-decimal
// strings and exact fractions, with an empty flag for zero-count groups.
void write_stratified_csv(std::ostream& out, const StratifiedReport& report);

// Structured report for one evaluation run, JSON-encoded.
std::string eval_report_json(std::string_view task, std::string_view kind,
                             const EvalReport& overall, const StratifiedReport* stratified);

// task<TAB>metric<TAB>score summary line.
std::string summary_tsv_row(std::string_view task, std::string_view metric,
                            const Rational& score);

}  // namespace pieces
