#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pieces/normalize.hpp"

namespace pieces {

// Word-frequency table over pre-tokenized surfaces. Shard tables merge
// commutatively, so counting is deterministic under any line partition.
class FrequencyTable {
 public:
  void add(std::string_view surface, int64_t count = 1);
  void merge(const FrequencyTable& other);

  const std::unordered_map<std::string, int64_t>& entries() const { return entries_; }
  int64_t total_tokens() const { return total_tokens_; }
  const std::set<char32_t>& alphabet() const { return alphabet_; }

  int64_t count_of(std::string_view surface) const;

  // Entries sorted by descending count, then ascending surface: the order of
  // the TSV export and the canonical word order used by vocabulary training.
  std::vector<std::pair<std::string_view, int64_t>> sorted_entries() const;

  // TSV export: `surface<TAB>count`, UTF-8, LF.
  void write_tsv(std::ostream& out) const;
  void write_tsv_file(const std::string& path) const;

 private:
  std::unordered_map<std::string, int64_t> entries_;
  int64_t total_tokens_ = 0;
  std::set<char32_t> alphabet_;
};

// Counts PreToken surfaces over normalized lines. `source` names the input
// in error messages. Lines must not contain the line terminator.
FrequencyTable count_lines(const std::vector<std::string>& lines, const NormalizeConfig& config,
                           std::string_view source = "<memory>", size_t first_line_number = 1);

// Streams one or more text files; `workers` shards batches of lines without
// affecting the result. I/O failures raise IoError naming the path; invalid
// UTF-8 raises FormatError naming path, line and byte offset.
FrequencyTable count_frequency_files(const std::vector<std::string>& paths,
                                     const NormalizeConfig& config, int workers = 1);

}  // namespace pieces
