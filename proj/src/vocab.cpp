#include "pieces/vocab.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "pieces/error.hpp"
#include "pieces/unicode.hpp"

namespace pieces {

std::string_view train_mode_name(TrainMode mode) {
  return mode == TrainMode::WordpieceScore ? "wordpiece" : "bpe";
}

TrainMode parse_train_mode(std::string_view name) {
  if (name == "wordpiece") return TrainMode::WordpieceScore;
  if (name == "bpe") return TrainMode::BpeFrequency;
  throw ConfigError("unknown training mode: " + std::string(name));
}

namespace {

bool is_special(std::string_view piece) {
  return std::find(kSpecialPieces.begin(), kSpecialPieces.end(), piece) != kSpecialPieces.end();
}

}  // namespace

bool valid_piece_shape(std::string_view piece) {
  if (piece.empty()) return false;
  size_t pos = 0;
  while (pos < piece.size()) {
    char32_t cp;
    try {
      cp = uni::decode_at(piece, pos);
    } catch (const Utf8Error&) {
      return false;
    }
    if (uni::is_whitespace(cp)) return false;
  }
  if (!piece.starts_with(kContinuationPrefix)) return true;
  const std::string_view rest = piece.substr(kContinuationPrefix.size());
  return !rest.empty() && !rest.starts_with(kContinuationPrefix);
}

Vocabulary Vocabulary::with_pieces(std::vector<std::string> pieces, size_t target_size,
                                   TrainMode mode) {
  if (target_size < kSpecialPieces.size())
    throw ConfigError("target_size must be at least " + std::to_string(kSpecialPieces.size()));
  if (pieces.size() > target_size)
    throw ConfigError("piece count " + std::to_string(pieces.size()) + " exceeds target_size " +
                      std::to_string(target_size));
  if (pieces.size() < kSpecialPieces.size())
    throw FormatError("vocabulary must start with the 5 special pieces");

  Vocabulary v;
  v.pieces_ = std::move(pieces);
  v.target_size_ = target_size;
  v.mode_ = mode;
  v.ids_.reserve(v.pieces_.size());
  for (size_t i = 0; i < v.pieces_.size(); ++i) {
    const std::string& piece = v.pieces_[i];
    if (i < kSpecialPieces.size()) {
      if (piece != kSpecialPieces[i])
        throw FormatError("piece at id " + std::to_string(i) + " must be " +
                          std::string(kSpecialPieces[i]) + ", got \"" + piece + "\"");
    } else {
      if (is_special(piece))
        throw FormatError("special piece \"" + piece + "\" repeated at id " + std::to_string(i));
      if (!valid_piece_shape(piece))
        throw FormatError("malformed piece at id " + std::to_string(i) + ": \"" + piece + "\"");
    }
    auto [it, inserted] = v.ids_.emplace(piece, static_cast<int32_t>(i));
    if (!inserted)
      throw FormatError("duplicate piece \"" + piece + "\" at line " + std::to_string(i + 1));
  }
  return v;
}

int32_t Vocabulary::id_of(std::string_view piece) const {
  auto it = ids_.find(piece);
  return it == ids_.end() ? -1 : it->second;
}

Vocabulary seed_alphabet(const FrequencyTable& table, size_t target_size, TrainMode mode) {
  if (target_size < kSpecialPieces.size())
    throw ConfigError("target_size must be at least " + std::to_string(kSpecialPieces.size()));

  const size_t avail = target_size - kSpecialPieces.size();
  const auto& alphabet = table.alphabet();

  std::vector<char32_t> admitted_full;    // both forms
  std::vector<char32_t> admitted_extra;   // word-initial form only
  if (avail >= 2 * alphabet.size()) {
    admitted_full.assign(alphabet.begin(), alphabet.end());
  } else {
    // Overfull alphabet: admit by descending corpus frequency.
    std::map<char32_t, int64_t> freq;
    for (const auto& [surface, count] : table.entries()) {
      size_t pos = 0;
      while (pos < surface.size()) freq[uni::decode_at(surface, pos)] += count;
    }
    std::vector<char32_t> order(alphabet.begin(), alphabet.end());
    std::sort(order.begin(), order.end(), [&](char32_t a, char32_t b) {
      if (freq[a] != freq[b]) return freq[a] > freq[b];
      return a < b;
    });
    const size_t full = std::min(order.size(), avail / 2);
    admitted_full.assign(order.begin(), order.begin() + full);
    if (avail % 2 == 1 && full < order.size()) admitted_extra.push_back(order[full]);
  }

  std::vector<char32_t> initial_chars = admitted_full;
  initial_chars.insert(initial_chars.end(), admitted_extra.begin(), admitted_extra.end());
  std::sort(initial_chars.begin(), initial_chars.end());
  std::vector<char32_t> continuation_chars = admitted_full;
  std::sort(continuation_chars.begin(), continuation_chars.end());

  std::vector<std::string> pieces;
  pieces.reserve(kSpecialPieces.size() + initial_chars.size() + continuation_chars.size());
  for (std::string_view s : kSpecialPieces) pieces.emplace_back(s);
  for (char32_t c : initial_chars) {
    std::string piece;
    uni::append_utf8(piece, c);
    pieces.push_back(std::move(piece));
  }
  for (char32_t c : continuation_chars) {
    std::string piece(kContinuationPrefix);
    uni::append_utf8(piece, c);
    pieces.push_back(std::move(piece));
  }
  return Vocabulary::with_pieces(std::move(pieces), target_size, mode);
}

void save_vocabulary(const Vocabulary& v, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const std::string& piece : v.pieces()) out << piece << '\n';
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

Vocabulary load_vocabulary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<std::string> pieces;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    size_t bad = 0;
    if (!uni::valid_utf8(line, &bad))
      throw FormatError(path + ":" + std::to_string(line_number) +
                        ": invalid UTF-8 at byte offset " + std::to_string(bad));
    if (line.empty())
      throw FormatError(path + ":" + std::to_string(line_number) + ": empty piece");
    pieces.push_back(line);
  }
  if (in.bad()) throw IoError("read failed: " + path);
  try {
    return Vocabulary::with_pieces(std::move(pieces), std::max<size_t>(line_number, 5));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void save_merge_log(const std::vector<MergeEvent>& merges, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (const MergeEvent& m : merges) {
    out << m.step << '\t' << m.left << '\t' << m.right << '\t' << m.merged << '\t'
        << m.score.fraction_str() << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace pieces
