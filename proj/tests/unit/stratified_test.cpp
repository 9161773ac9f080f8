#include <doctest.h>

#include <string>
#include <vector>

#include "corpusgen.hpp"
#include "pieces/error.hpp"
#include "pieces/stratified.hpp"

using pieces::BioesSentence;
using pieces::EvalReport;
using pieces::MorphItem;
using pieces::MorphSentence;
using pieces::MorphToken;
using pieces::MsetItemKind;
using pieces::NerLabel;
using pieces::NormalizeConfig;
using pieces::parse_ner_label;
using pieces::Rational;
using pieces::SplitGroup;
using pieces::SplitHistogram;
using pieces::StratifiedReport;
using pieces::Vocabulary;
using pieces::WordpieceTokenizer;

namespace {

Vocabulary vocab_of(std::vector<std::string> rest) {
  std::vector<std::string> pieces{"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};
  pieces.insert(pieces.end(), rest.begin(), rest.end());
  const size_t size = pieces.size();
  return Vocabulary::with_pieces(std::move(pieces), size);
}

MorphToken token_of(std::string surface, std::vector<std::string> segments) {
  MorphToken t;
  t.surface = std::move(surface);
  for (auto& s : segments) {
    MorphItem item;
    item.segment = std::move(s);
    t.items.push_back(std::move(item));
  }
  return t;
}

// Token-level sentence: units are the raw tokens themselves.
BioesSentence sentence_of(std::vector<std::string> tokens, std::vector<std::string> labels) {
  BioesSentence s;
  s.units = tokens;
  s.token_surfaces = tokens;
  for (size_t i = 0; i < tokens.size(); ++i) s.unit_token.push_back(static_cast<int32_t>(i));
  for (const auto& l : labels) s.labels.push_back(parse_ner_label(l));
  return s;
}

}  // namespace

TEST_CASE("split histogram buckets") {
  const WordpieceTokenizer t(vocab_of({"a", "##a"}));
  SplitHistogram h;
  h.add(t.tokenize("a"));
  h.add(t.tokenize("aa"));
  h.add(t.tokenize("aaa"), 2);
  h.add(t.tokenize("z"));  // UNK
  CHECK(h.one == 2);
  CHECK(h.two == 1);
  CHECK(h.three_plus == 2);
  CHECK(h.unk_count == 1);
  CHECK(h.total == 5);
  CHECK(h.by_exact == std::map<int64_t, int64_t>{{1, 2}, {2, 1}, {3, 2}});
  CHECK(h.group_count(SplitGroup::One) == 2);

  SplitHistogram other;
  other.add(t.tokenize("aa"), 3);
  h.merge(other);
  CHECK(h.two == 4);
  CHECK(h.total == 8);
}

TEST_CASE("histogram from table with and without type weighting") {
  const WordpieceTokenizer t(vocab_of({"a", "##a"}));
  pieces::FrequencyTable table;
  table.add("a", 3);
  table.add("aa", 2);
  const SplitHistogram by_count = pieces::histogram_from_table(table, t, false);
  CHECK(by_count.one == 3);
  CHECK(by_count.two == 2);
  CHECK(by_count.total == 5);
  const SplitHistogram by_type = pieces::histogram_from_table(table, t, true);
  CHECK(by_type.one == 1);
  CHECK(by_type.two == 1);
  CHECK(by_type.total == 2);
}

TEST_CASE("split cache normalizes before tokenizing") {
  const WordpieceTokenizer t(vocab_of({"\xC3\xA9"}));  // precomposed é
  pieces::SplitCache cache(t, NormalizeConfig{});
  const auto& seq = cache.pieces_of("e\xCC\x81");  // decomposed
  CHECK_FALSE(seq.is_unknown);
  CHECK(seq.n_pieces() == 1);
  CHECK(cache.pieces_of("e\xCC\x81").piece_ids == seq.piece_ids);
}

TEST_CASE("stratified mset groups by the gold surface") {
  const WordpieceTokenizer t(vocab_of({"a", "##a"}));
  const MorphSentence gold{token_of("a", {"x"}), token_of("aa", {"y"})};
  const MorphSentence pred{token_of("a", {"x"}), token_of("aa", {"z"})};

  const StratifiedReport r =
      pieces::stratified_mset({gold}, {pred}, MsetItemKind::Seg, t, NormalizeConfig{});
  REQUIRE(r.per_group.size() == 3);
  CHECK(r.per_group[0].first == "1");
  CHECK(r.per_group[1].first == "2");
  CHECK(r.per_group[2].first == "3+");
  CHECK(*r.group("1") == EvalReport{1, 1, 1});
  CHECK(*r.group("2") == EvalReport{0, 1, 1});
  CHECK(r.group("3+")->empty());
  CHECK(r.group("nope") == nullptr);
  CHECK(r.overall == EvalReport{1, 2, 2});
  CHECK(r.overall.f1() == Rational::ratio(1, 2));
}

TEST_CASE("mention split flag looks at every overlapped token") {
  const WordpieceTokenizer t(vocab_of({"a", "##a", "b"}));
  pieces::SplitCache cache(t, NormalizeConfig{});
  const BioesSentence s = sentence_of({"b", "aa", "b"}, {"O", "O", "O"});

  pieces::NerMention m;
  m.start = 0;
  m.end = 0;
  CHECK_FALSE(pieces::mention_split_flag(s, m, cache));
  m.end = 1;  // now touches the splitting token
  CHECK(pieces::mention_split_flag(s, m, cache));
  m.start = 2;
  m.end = 2;
  CHECK_FALSE(pieces::mention_split_flag(s, m, cache));
}

TEST_CASE("morpheme units map back to their raw token") {
  // Units belong to one raw token that splits; the mention over a single
  // unit still carries the whole token's flag.
  const WordpieceTokenizer t(vocab_of({"a", "##a", "b"}));
  pieces::SplitCache cache(t, NormalizeConfig{});
  BioesSentence s;
  s.units = {"x", "y"};
  s.unit_token = {0, 0};
  s.token_surfaces = {"aa"};
  s.labels = {parse_ner_label("S-PER"), parse_ner_label("O")};
  pieces::NerMention m;
  m.start = 0;
  m.end = 0;
  CHECK(pieces::mention_split_flag(s, m, cache));
}

TEST_CASE("stratified ner on a two-sentence toy") {
  const WordpieceTokenizer t(vocab_of({"a", "##a", "b"}));
  const std::vector<BioesSentence> gold{
      sentence_of({"aa", "b"}, {"B-PER", "E-PER"}),
      sentence_of({"b", "b"}, {"S-LOC", "O"}),
  };
  const std::vector<BioesSentence> pred{
      sentence_of({"aa", "b"}, {"B-PER", "E-PER"}),
      sentence_of({"b", "b"}, {"O", "S-LOC"}),
  };

  const StratifiedReport r = pieces::stratified_ner(gold, pred, t, NormalizeConfig{});
  REQUIRE(r.per_group.size() == 2);
  CHECK(r.per_group[0].first == "split");
  CHECK(r.per_group[1].first == "not_split");
  CHECK(*r.group("split") == EvalReport{1, 1, 1});
  CHECK(*r.group("not_split") == EvalReport{0, 1, 1});
  CHECK(r.overall == EvalReport{1, 2, 2});

  const auto counts = pieces::mention_split_histogram(gold, t, NormalizeConfig{});
  CHECK(counts.split == 1);
  CHECK(counts.not_split == 1);

  CHECK_THROWS_AS(pieces::stratified_ner(gold, {pred[0]}, t, NormalizeConfig{}),
                  pieces::FormatError);
}

TEST_CASE("mset groups partition the overall counts") {
  const WordpieceTokenizer t(vocab_of({"a", "##a"}));
  pieces::testing::Rng rng(0x57a7);
  const char* surfaces[] = {"a", "aa", "aaa", "aaaa", "z"};
  const char* segments[] = {"p", "q", "r"};

  for (int round = 0; round < 200; ++round) {
    const auto make_side = [&](const MorphSentence& shape) {
      MorphSentence s;
      for (const auto& token : shape) {
        std::vector<std::string> segs;
        const size_t n = rng.below(3);
        for (size_t i = 0; i < n; ++i) segs.emplace_back(segments[rng.below(3)]);
        s.push_back(token_of(token.surface, segs));
      }
      return s;
    };
    MorphSentence shape;
    const size_t n_tokens = 1 + rng.below(5);
    for (size_t i = 0; i < n_tokens; ++i) shape.push_back(token_of(surfaces[rng.below(5)], {}));

    const std::vector<MorphSentence> gold{make_side(shape)};
    const std::vector<MorphSentence> pred{make_side(shape)};
    const StratifiedReport r =
        pieces::stratified_mset(gold, pred, MsetItemKind::Seg, t, NormalizeConfig{});

    EvalReport sum;
    for (const auto& [name, report] : r.per_group) sum.add(report);
    CHECK(sum == r.overall);
  }
}

TEST_CASE("ner groups partition the overall counts") {
  const WordpieceTokenizer t(vocab_of({"a", "##a", "b"}));
  pieces::testing::Rng rng(0x9e77);
  const char* tokens[] = {"a", "aa", "b", "aaa"};
  const char* labels[] = {"O", "B-PER", "I-PER", "E-PER", "S-PER", "S-LOC", "B-LOC", "E-LOC"};

  for (int round = 0; round < 200; ++round) {
    std::vector<std::string> token_row;
    const size_t n = 1 + rng.below(6);
    for (size_t i = 0; i < n; ++i) token_row.emplace_back(tokens[rng.below(4)]);
    const auto random_labels = [&] {
      std::vector<std::string> out;
      for (size_t i = 0; i < n; ++i) out.emplace_back(labels[rng.below(8)]);
      return out;
    };
    const std::vector<BioesSentence> gold{sentence_of(token_row, random_labels())};
    const std::vector<BioesSentence> pred{sentence_of(token_row, random_labels())};

    const StratifiedReport r = pieces::stratified_ner(gold, pred, t, NormalizeConfig{});
    EvalReport sum;
    for (const auto& [name, report] : r.per_group) sum.add(report);
    CHECK(sum == r.overall);
  }
}
