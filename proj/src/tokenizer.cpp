#include "pieces/tokenizer.hpp"

#include <algorithm>

#include "pieces/unicode.hpp"

namespace pieces {

std::string_view split_group_name(SplitGroup g) {
  switch (g) {
    case SplitGroup::One:
      return "1";
    case SplitGroup::Two:
      return "2";
    case SplitGroup::ThreePlus:
      return "3+";
  }
  return "?";
}

SplitGroup split_group(const PieceSequence& seq) {
  if (seq.n_pieces() <= 1) return SplitGroup::One;
  if (seq.n_pieces() == 2) return SplitGroup::Two;
  return SplitGroup::ThreePlus;
}

WordpieceTokenizer::WordpieceTokenizer(Vocabulary vocabulary, size_t max_chars)
    : vocab_(std::move(vocabulary)), max_chars_(max_chars) {
  const auto& pieces = vocab_.pieces();
  for (size_t id = 0; id < pieces.size(); ++id) {
    std::string_view piece = pieces[id];
    if (piece.starts_with(kContinuationPrefix)) {
      piece.remove_prefix(kContinuationPrefix.size());
      continuation_.emplace(piece, static_cast<int32_t>(id));
      continuation_max_bytes_ = std::max(continuation_max_bytes_, piece.size());
    } else {
      initial_.emplace(piece, static_cast<int32_t>(id));
      initial_max_bytes_ = std::max(initial_max_bytes_, piece.size());
    }
  }
}

PieceSequence WordpieceTokenizer::tokenize(std::string_view word) const {
  PieceSequence unk;
  unk.piece_ids.push_back(kUnkId);
  unk.is_unknown = true;
  if (word.empty()) return unk;

  const std::vector<uint32_t> offs = uni::codepoint_offsets(word);
  const size_t n_cps = offs.size() - 1;
  if (n_cps > max_chars_) return unk;

  PieceSequence out;
  size_t pos = 0;
  while (pos < n_cps) {
    const Index& index = (pos == 0) ? initial_ : continuation_;
    const size_t max_bytes = (pos == 0) ? initial_max_bytes_ : continuation_max_bytes_;
    int32_t best = -1;
    size_t best_end = pos;
    for (size_t end = n_cps; end > pos; --end) {
      const size_t len = offs[end] - offs[pos];
      if (len > max_bytes) continue;
      const auto it = index.find(word.substr(offs[pos], len));
      if (it != index.end()) {
        best = it->second;
        best_end = end;
        break;
      }
    }
    if (best < 0) return unk;
    out.piece_ids.push_back(best);
    pos = best_end;
  }
  return out;
}

std::string WordpieceTokenizer::joined_pieces(const PieceSequence& seq) const {
  std::string out;
  for (size_t i = 0; i < seq.piece_ids.size(); ++i) {
    if (i) out.push_back(' ');
    out.append(piece(seq.piece_ids[i]));
  }
  return out;
}

std::vector<TokenPieces> tokenize_line(const WordpieceTokenizer& tokenizer, std::string_view line,
                                       const NormalizeConfig& normalize_config) {
  const std::string normalized = normalize(line, normalize_config);
  std::vector<TokenPieces> out;
  for (PreToken& token : pretokenize(normalized)) {
    PieceSequence pieces = tokenizer.tokenize(token.surface);
    out.push_back(TokenPieces{std::move(token), std::move(pieces)});
  }
  return out;
}

}  // namespace pieces
