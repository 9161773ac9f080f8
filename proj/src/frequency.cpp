#include "pieces/frequency.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <ostream>

#include "pieces/error.hpp"
#include "pieces/pretokenize.hpp"
#include "pieces/unicode.hpp"

namespace pieces {

void FrequencyTable::add(std::string_view surface, int64_t count) {
  auto [it, inserted] = entries_.try_emplace(std::string(surface), 0);
  it->second += count;
  total_tokens_ += count;
  if (inserted) {
    size_t pos = 0;
    while (pos < surface.size()) alphabet_.insert(uni::decode_at(surface, pos));
  }
}

void FrequencyTable::merge(const FrequencyTable& other) {
  for (const auto& [surface, count] : other.entries_) add(surface, count);
}

int64_t FrequencyTable::count_of(std::string_view surface) const {
  auto it = entries_.find(std::string(surface));
  return it == entries_.end() ? 0 : it->second;
}

std::vector<std::pair<std::string_view, int64_t>> FrequencyTable::sorted_entries() const {
  std::vector<std::pair<std::string_view, int64_t>> rows;
  rows.reserve(entries_.size());
  for (const auto& [surface, count] : entries_) rows.emplace_back(surface, count);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return rows;
}

void FrequencyTable::write_tsv(std::ostream& out) const {
  for (const auto& [surface, count] : sorted_entries())
    out << surface << '\t' << count << '\n';
}

void FrequencyTable::write_tsv_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  write_tsv(out);
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

FrequencyTable count_lines(const std::vector<std::string>& lines, const NormalizeConfig& config,
                           std::string_view source, size_t first_line_number) {
  FrequencyTable table;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    size_t bad = 0;
    if (!uni::valid_utf8(line, &bad)) {
      throw FormatError(std::string(source) + ":" + std::to_string(first_line_number + i) +
                        ": invalid UTF-8 at byte offset " + std::to_string(bad));
    }
    for (const PreToken& token : pretokenize(normalize(line, config))) table.add(token.surface);
  }
  return table;
}

namespace {

// Counts one batch across `workers` slices and merges in slice order.
FrequencyTable count_batch(const std::vector<std::string>& batch, const NormalizeConfig& config,
                           std::string_view source, size_t first_line_number, int workers) {
  if (workers <= 1 || batch.size() < 2) {
    return count_lines(batch, config, source, first_line_number);
  }
  const size_t slices = std::min<size_t>(workers, batch.size());
  std::vector<std::future<FrequencyTable>> futures;
  futures.reserve(slices);
  const size_t per_slice = (batch.size() + slices - 1) / slices;
  for (size_t s = 0; s < slices; ++s) {
    const size_t begin = s * per_slice;
    const size_t end = std::min(batch.size(), begin + per_slice);
    if (begin >= end) break;
    futures.push_back(std::async(std::launch::async, [&, begin, end] {
      std::vector<std::string> slice(batch.begin() + begin, batch.begin() + end);
      return count_lines(slice, config, source, first_line_number + begin);
    }));
  }
  FrequencyTable table;
  for (auto& f : futures) table.merge(f.get());
  return table;
}

}  // namespace

FrequencyTable count_frequency_files(const std::vector<std::string>& paths,
                                     const NormalizeConfig& config, int workers) {
  constexpr size_t kBatchLines = 65536;
  FrequencyTable table;
  for (const std::string& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::vector<std::string> batch;
    batch.reserve(kBatchLines);
    size_t line_number = 1;
    std::string line;
    while (std::getline(in, line)) {
      batch.push_back(std::move(line));
      if (batch.size() >= kBatchLines) {
        table.merge(count_batch(batch, config, path, line_number, workers));
        line_number += batch.size();
        batch.clear();
      }
    }
    if (in.bad()) throw IoError("read failed: " + path);
    if (!batch.empty()) table.merge(count_batch(batch, config, path, line_number, workers));
  }
  return table;
}

}  // namespace pieces
