#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pieces/error.hpp"
#include "pieces/unicode.hpp"
#include "pieces/vocab.hpp"

namespace pieces {

namespace {

using PairKey = uint64_t;

constexpr PairKey pair_key(uint32_t l, uint32_t r) {
  return (static_cast<uint64_t>(l) << 32) | r;
}
constexpr uint32_t pair_left(PairKey k) { return static_cast<uint32_t>(k >> 32); }
constexpr uint32_t pair_right(PairKey k) { return static_cast<uint32_t>(k); }

struct PairStat {
  int64_t count = 0;
  int64_t rank = 0;  // first-ever-occurrence order
  std::string merged;
  std::vector<uint32_t> where;  // candidate word ids, lazily deduplicated
};

struct HeapEntry {
  int64_t count;
  int64_t lcount;
  int64_t rcount;
  int64_t rank;
  uint32_t left;
  uint32_t right;
  std::string merged;
};

// Selection order: maximal score, then lexicographically smaller merged
// string, then earlier first occurrence. Returns true when a ranks below b.
struct EntryWorse {
  TrainMode mode;
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    if (mode == TrainMode::WordpieceScore) {
      const auto lhs = static_cast<unsigned __int128>(a.count) *
                       (static_cast<unsigned __int128>(b.lcount) * b.rcount);
      const auto rhs = static_cast<unsigned __int128>(b.count) *
                       (static_cast<unsigned __int128>(a.lcount) * a.rcount);
      if (lhs != rhs) return lhs < rhs;
    } else {
      if (a.count != b.count) return a.count < b.count;
    }
    if (a.merged != b.merged) return a.merged > b.merged;
    return a.rank > b.rank;
  }
};

struct TransparentHash {
  using is_transparent = void;
  size_t operator()(std::string_view s) const { return std::hash<std::string_view>{}(s); }
};

Rational pair_score(TrainMode mode, int64_t count, int64_t lcount, int64_t rcount) {
  if (mode == TrainMode::BpeFrequency) return Rational::ratio(count, 1);
  const __int128 den = static_cast<__int128>(lcount) * rcount;
  if (den > INT64_MAX) throw ConfigError("corpus too large for exact score arithmetic");
  return Rational::ratio(count, static_cast<int64_t>(den));
}

class Trainer {
 public:
  Trainer(const FrequencyTable& table, const TrainConfig& config,
          std::vector<std::string>& pieces, std::vector<MergeEvent>& merges)
      : cfg_(config), pieces_(pieces), merges_(merges), heap_(EntryWorse{config.mode}) {
    piece_set_.insert(pieces_.begin(), pieces_.end());
    register_alphabet(table);
    spell_words(table);
    initial_scan();
    for (const auto& [key, stat] : stats_) push_current(key, stat);
  }

  void run() {
    while (pieces_.size() < cfg_.target_size) {
      HeapEntry top;
      if (!pop_best(top)) break;
      merge_pair(top);
      maybe_compact_heap();
    }
  }

 private:
  void register_alphabet(const FrequencyTable& table) {
    for (char32_t c : table.alphabet()) {
      std::string s;
      uni::append_utf8(s, c);
      add_symbol(std::move(s));
    }
    for (char32_t c : table.alphabet()) {
      std::string s(kContinuationPrefix);
      uni::append_utf8(s, c);
      add_symbol(std::move(s));
    }
  }

  uint32_t add_symbol(std::string s) {
    const uint32_t id = static_cast<uint32_t>(sym_strings_.size());
    sym_ids_.emplace(s, id);
    sym_strings_.push_back(std::move(s));
    sym_counts_.push_back(0);
    pairs_with_symbol_.emplace_back();
    return id;
  }

  void spell_words(const FrequencyTable& table) {
    const auto rows = table.sorted_entries();
    words_.reserve(rows.size());
    for (const auto& [surface, count] : rows) {
      Word word;
      word.count = count;
      size_t pos = 0;
      bool initial = true;
      while (pos < surface.size()) {
        const size_t start = pos;
        uni::decode_at(surface, pos);
        std::string sym;
        if (!initial) sym = kContinuationPrefix;
        sym.append(surface.substr(start, pos - start));
        const auto it = sym_ids_.find(sym);
        word.syms.push_back(it->second);
        initial = false;
      }
      for (uint32_t s : word.syms) sym_counts_[s] += count;
      words_.push_back(std::move(word));
    }
    word_stamp_.assign(words_.size(), 0);
  }

  void initial_scan() {
    for (uint32_t w = 0; w < words_.size(); ++w) {
      const Word& word = words_[w];
      for (size_t i = 0; i + 1 < word.syms.size(); ++i)
        bump_pair(pair_key(word.syms[i], word.syms[i + 1]), word.count, w);
    }
  }

  std::string merged_string(PairKey key) const {
    const std::string& left = sym_strings_[pair_left(key)];
    std::string_view right = sym_strings_[pair_right(key)];
    if (right.starts_with(kContinuationPrefix)) right.remove_prefix(kContinuationPrefix.size());
    std::string merged;
    merged.reserve(left.size() + right.size());
    merged.append(left);
    merged.append(right);
    return merged;
  }

  void bump_pair(PairKey key, int64_t delta, uint32_t w) {
    auto it = stats_.find(key);
    if (it == stats_.end()) {
      PairStat stat;
      stat.count = delta;
      stat.merged = merged_string(key);
      const auto [rit, fresh] = first_rank_.try_emplace(key, next_rank_);
      if (fresh) ++next_rank_;
      stat.rank = rit->second;
      stat.where.push_back(w);
      if (cfg_.mode == TrainMode::WordpieceScore) {
        pairs_with_symbol_[pair_left(key)].insert(key);
        pairs_with_symbol_[pair_right(key)].insert(key);
      }
      stats_.emplace(key, std::move(stat));
    } else {
      it->second.count += delta;
      auto& where = it->second.where;
      if (delta > 0 && (where.empty() || where.back() != w)) where.push_back(w);
    }
    changed_.insert(key);
  }

  void push_current(PairKey key, const PairStat& stat) {
    heap_.push(HeapEntry{stat.count, sym_counts_[pair_left(key)], sym_counts_[pair_right(key)],
                         stat.rank, pair_left(key), pair_right(key), stat.merged});
  }

  bool pop_best(HeapEntry& out) {
    while (!heap_.empty()) {
      HeapEntry top = heap_.top();
      heap_.pop();
      const auto it = stats_.find(pair_key(top.left, top.right));
      if (it == stats_.end()) continue;
      const PairStat& stat = it->second;
      if (stat.count != top.count) continue;
      if (cfg_.mode == TrainMode::WordpieceScore &&
          (sym_counts_[top.left] != top.lcount || sym_counts_[top.right] != top.rcount))
        continue;
      if (stat.count < cfg_.min_pair_frequency) continue;
      // Degenerate merged strings (possible only with surfaces that bypass
      // pretokenization) can never become pieces; skip them.
      if (!valid_piece_shape(top.merged)) continue;
      out = std::move(top);
      return true;
    }
    return false;
  }

  void merge_pair(const HeapEntry& top) {
    const PairKey key = pair_key(top.left, top.right);
    const uint32_t l = top.left;
    const uint32_t r = top.right;

    uint32_t m;
    const auto mit = sym_ids_.find(top.merged);
    if (mit == sym_ids_.end()) {
      m = add_symbol(top.merged);
    } else {
      m = mit->second;
    }

    // A merged string that is already a piece updates spellings without
    // growing the vocabulary or the log.
    if (!piece_set_.contains(top.merged)) {
      piece_set_.insert(top.merged);
      pieces_.push_back(top.merged);
      merges_.push_back(MergeEvent{sym_strings_[l], sym_strings_[r], top.merged,
                                   pair_score(cfg_.mode, top.count, top.lcount, top.rcount),
                                   static_cast<int64_t>(merges_.size())});
    }

    std::vector<uint32_t> where;
    where.swap(stats_.find(key)->second.where);
    // Ascending word order makes first-occurrence ranks of pairs created in
    // this step follow the canonical corpus scan, matching a full recount.
    std::sort(where.begin(), where.end());
    changed_.clear();
    ++stamp_;

    for (uint32_t w : where) {
      if (word_stamp_[w] == stamp_) continue;
      word_stamp_[w] = stamp_;
      Word& word = words_[w];
      auto& syms = word.syms;
      const size_t n = syms.size();

      bool hit = false;
      for (size_t i = 0; i + 1 < n; ++i) {
        if (syms[i] == l && syms[i + 1] == r) {
          hit = true;
          break;
        }
      }
      if (!hit) continue;

      for (size_t i = 0; i + 1 < n; ++i) bump_pair(pair_key(syms[i], syms[i + 1]), -word.count, w);

      respelled_.clear();
      int64_t replacements = 0;
      for (size_t i = 0; i < n;) {
        if (i + 1 < n && syms[i] == l && syms[i + 1] == r) {
          respelled_.push_back(m);
          ++replacements;
          i += 2;
        } else {
          respelled_.push_back(syms[i]);
          ++i;
        }
      }
      syms.assign(respelled_.begin(), respelled_.end());

      for (size_t i = 0; i + 1 < syms.size(); ++i)
        bump_pair(pair_key(syms[i], syms[i + 1]), word.count, w);

      const int64_t consumed = replacements * word.count;
      sym_counts_[l] -= consumed;
      sym_counts_[r] -= consumed;
      sym_counts_[m] += consumed;
    }

    // Drop dead pairs, then refresh heap keys for everything whose score
    // may have moved: changed counts plus denominators of l, r and m.
    for (PairKey k : changed_) {
      const auto it = stats_.find(k);
      if (it != stats_.end() && it->second.count == 0) {
        if (cfg_.mode == TrainMode::WordpieceScore) {
          pairs_with_symbol_[pair_left(k)].erase(k);
          pairs_with_symbol_[pair_right(k)].erase(k);
        }
        stats_.erase(it);
      }
    }
    for (PairKey k : changed_) {
      const auto it = stats_.find(k);
      if (it != stats_.end()) push_current(k, it->second);
    }
    if (cfg_.mode == TrainMode::WordpieceScore) {
      uint32_t denoms[3] = {l, r, m};
      const size_t ndenoms = (l == r) ? 2 : 3;
      if (l == r) denoms[1] = m;
      for (size_t i = 0; i < ndenoms; ++i) {
        for (PairKey k : pairs_with_symbol_[denoms[i]]) {
          const auto it = stats_.find(k);
          if (it != stats_.end() && !changed_.contains(k)) push_current(k, it->second);
        }
      }
    }
  }

  void maybe_compact_heap() {
    const size_t active = stats_.size();
    if (heap_.size() < 1'000'000 || heap_.size() < 8 * active) return;
    std::vector<HeapEntry> fresh;
    fresh.reserve(active);
    for (const auto& [key, stat] : stats_) {
      fresh.push_back(HeapEntry{stat.count, sym_counts_[pair_left(key)],
                                sym_counts_[pair_right(key)], stat.rank, pair_left(key),
                                pair_right(key), stat.merged});
    }
    heap_ = decltype(heap_)(EntryWorse{cfg_.mode}, std::move(fresh));
  }

  struct Word {
    std::vector<uint32_t> syms;
    int64_t count = 0;
  };

  TrainConfig cfg_;
  std::vector<std::string>& pieces_;
  std::vector<MergeEvent>& merges_;

  std::vector<std::string> sym_strings_;
  std::unordered_map<std::string, uint32_t, TransparentHash, std::equal_to<>> sym_ids_;
  std::vector<int64_t> sym_counts_;
  std::vector<std::unordered_set<PairKey>> pairs_with_symbol_;
  std::vector<Word> words_;
  std::vector<uint32_t> word_stamp_;
  uint32_t stamp_ = 0;

  std::unordered_map<PairKey, PairStat> stats_;
  std::unordered_map<PairKey, int64_t> first_rank_;
  int64_t next_rank_ = 0;
  std::unordered_set<PairKey> changed_;
  std::vector<uint32_t> respelled_;
  std::unordered_set<std::string> piece_set_;

  std::priority_queue<HeapEntry, std::vector<HeapEntry>, EntryWorse> heap_;
};

}  // namespace

TrainResult train_vocabulary(const FrequencyTable& table, const TrainConfig& config) {
  if (config.target_size < kSpecialPieces.size())
    throw ConfigError("target_size must be at least " + std::to_string(kSpecialPieces.size()));
  if (config.min_pair_frequency < 1) throw ConfigError("min_pair_frequency must be at least 1");

  const Vocabulary seed = seed_alphabet(table, config.target_size, config.mode);
  std::vector<std::string> pieces = seed.pieces();
  std::vector<MergeEvent> merges;

  if (pieces.size() < config.target_size && !table.entries().empty()) {
    Trainer trainer(table, config, pieces, merges);
    trainer.run();
  }

  TrainResult result;
  result.seed_size = seed.size();
  result.vocabulary = Vocabulary::with_pieces(std::move(pieces), config.target_size, config.mode);
  result.merges = std::move(merges);
  return result;
}

}  // namespace pieces
