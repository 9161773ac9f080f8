#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "corpusgen.hpp"
#include "oracles.hpp"
#include "pieces/frequency.hpp"
#include "pieces/tokenizer.hpp"
#include "pieces/vocab.hpp"

using pieces::PieceSequence;
using pieces::SplitGroup;
using pieces::Vocabulary;
using pieces::WordpieceTokenizer;

namespace {

Vocabulary vocab_of(std::vector<std::string> rest, size_t target = 0) {
  std::vector<std::string> pieces{"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"};
  pieces.insert(pieces.end(), rest.begin(), rest.end());
  const size_t size = pieces.size();
  return Vocabulary::with_pieces(std::move(pieces), target == 0 ? size : target);
}

std::vector<std::string> tokenize_strings(const WordpieceTokenizer& t, std::string_view word) {
  std::vector<std::string> out;
  for (int32_t id : t.tokenize(word).piece_ids) out.push_back(t.piece(id));
  return out;
}

}  // namespace

TEST_CASE("greedy longest match first") {
  const WordpieceTokenizer t(vocab_of({"un", "##able", "##a", "##b", "##l", "##e", "u", "##n"}));
  CHECK(tokenize_strings(t, "unable") == std::vector<std::string>{"un", "##able"});
  CHECK(tokenize_strings(t, "un") == std::vector<std::string>{"un"});
  CHECK(tokenize_strings(t, "unban") == std::vector<std::string>{"un", "##b", "##a", "##n"});
  CHECK(tokenize_strings(t, "unbar") == std::vector<std::string>{"[UNK]"});
}

TEST_CASE("no backtracking after a greedy dead end") {
  // Greedy takes "ab", leaving "c" unreachable even though a+##bc covers it.
  const WordpieceTokenizer t(vocab_of({"a", "ab", "##b", "##bc"}));
  CHECK(tokenize_strings(t, "abc") == std::vector<std::string>{"[UNK]"});
  CHECK(t.tokenize("abc").is_unknown);
  CHECK(t.tokenize("abc").piece_ids == std::vector<int32_t>{pieces::kUnkId});
  CHECK(tokenize_strings(t, "ab") == std::vector<std::string>{"ab"});
  CHECK(tokenize_strings(t, "abb") == std::vector<std::string>{"ab", "##b"});
}

TEST_CASE("out-of-alphabet characters produce UNK") {
  const WordpieceTokenizer t(vocab_of({"a", "##a"}));
  CHECK(t.tokenize("az").is_unknown);
  CHECK(t.tokenize("z").is_unknown);
  CHECK(t.tokenize("ā").is_unknown);
  CHECK_FALSE(t.tokenize("aa").is_unknown);
}

TEST_CASE("words beyond max_chars codepoints become UNK") {
  const WordpieceTokenizer t(vocab_of({"a", "##a"}), 4);
  CHECK_FALSE(t.tokenize("aaaa").is_unknown);
  CHECK(t.tokenize("aaaaa").is_unknown);
}

TEST_CASE("multibyte pieces match whole codepoints") {
  const WordpieceTokenizer t(vocab_of({"בי", "ב", "##י", "##ת"}));
  CHECK(tokenize_strings(t, "בית") == std::vector<std::string>{"בי", "##ת"});
}

TEST_CASE("joined pieces reconstruct the word") {
  const WordpieceTokenizer t(vocab_of({"un", "##able"}));
  CHECK(t.joined_pieces(t.tokenize("unable")) == "un ##able");
}

TEST_CASE("split groups") {
  using pieces::split_group;
  using pieces::split_group_name;
  const WordpieceTokenizer t(vocab_of({"a", "##a"}));
  CHECK(split_group(t.tokenize("a")) == SplitGroup::One);
  CHECK(split_group(t.tokenize("aa")) == SplitGroup::Two);
  CHECK(split_group(t.tokenize("aaa")) == SplitGroup::ThreePlus);
  CHECK(split_group(t.tokenize("aaaaaa")) == SplitGroup::ThreePlus);
  CHECK(split_group(t.tokenize("z")) == SplitGroup::One);  // UNK counts as one piece
  CHECK(split_group_name(SplitGroup::One) == "1");
  CHECK(split_group_name(SplitGroup::Two) == "2");
  CHECK(split_group_name(SplitGroup::ThreePlus) == "3+");
}

TEST_CASE("round trip over a trained vocabulary") {
  const auto lines = pieces::testing::synth_corpus(300, 17);
  const auto table = pieces::count_lines(lines, pieces::NormalizeConfig{});
  pieces::TrainConfig cfg;
  cfg.target_size = 400;
  const auto trained = pieces::train_vocabulary(table, cfg);
  const WordpieceTokenizer t(trained.vocabulary);

  size_t unknowns = 0;
  for (const auto& [surface, count] : table.entries()) {
    const PieceSequence seq = t.tokenize(surface);
    if (seq.is_unknown) {
      ++unknowns;
      continue;
    }
    std::string rebuilt;
    for (int32_t id : seq.piece_ids) {
      std::string_view piece = t.piece(id);
      if (piece.starts_with("##")) piece.remove_prefix(2);
      rebuilt += piece;
    }
    CHECK(rebuilt == surface);
  }
  // The seed alphabet covers the corpus, so nothing falls out.
  CHECK(unknowns == 0);
}

TEST_CASE("matches the quadratic reference tokenizer") {
  const auto lines = pieces::testing::synth_corpus(120, 23);
  const auto table = pieces::count_lines(lines, pieces::NormalizeConfig{});
  pieces::TrainConfig cfg;
  cfg.target_size = 260;
  const auto trained = pieces::train_vocabulary(table, cfg);
  const WordpieceTokenizer t(trained.vocabulary);
  const std::set<std::string> piece_set(trained.vocabulary.pieces().begin(),
                                        trained.vocabulary.pieces().end());

  pieces::testing::Rng rng(0x70ce);
  for (int i = 0; i < 400; ++i) {
    const std::string word = pieces::testing::synth_word(rng);
    CHECK(tokenize_strings(t, word) == pieces::testing::naive_wordpiece(word, piece_set));
  }
  // Also cover words the corpus generator cannot produce.
  for (const char* word : {"", "x", "latin", "abcabc"})
    CHECK(tokenize_strings(t, word) == pieces::testing::naive_wordpiece(word, piece_set));
}

TEST_CASE("nested vocabularies keep the UNK set and whole words") {
  // Greedy piece counts are not monotone per word (a longer first match can
  // force a finer tail), but once both sizes admit the full alphabet the UNK
  // set is fixed and single-piece words stay single-piece.
  const auto lines = pieces::testing::synth_corpus(200, 31);
  const auto table = pieces::count_lines(lines, pieces::NormalizeConfig{});
  pieces::TrainConfig cfg;
  cfg.target_size = 500;
  const auto trained = pieces::train_vocabulary(table, cfg);
  REQUIRE(trained.seed_size <= 300);

  const auto& all = trained.vocabulary.pieces();
  std::vector<std::string> head(all.begin(), all.begin() + 300);
  const WordpieceTokenizer small(Vocabulary::with_pieces(head, 300));
  const WordpieceTokenizer large(trained.vocabulary);

  pieces::testing::Rng rng(0x9a9a);
  for (int i = 0; i < 300; ++i) {
    const std::string word = pieces::testing::synth_word(rng);
    const PieceSequence a = small.tokenize(word);
    const PieceSequence b = large.tokenize(word);
    CHECK(a.is_unknown == b.is_unknown);
    if (a.n_pieces() == 1 && !a.is_unknown) CHECK(b.n_pieces() == 1);
  }
}

TEST_CASE("tokenize_line pairs tokens with their pieces") {
  const WordpieceTokenizer t(vocab_of({"a", "b", "##b", ","}));
  const auto rows = pieces::tokenize_line(t, "ab, a", pieces::NormalizeConfig{});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].token.surface == "ab");
  CHECK(t.joined_pieces(rows[0].pieces) == "a ##b");
  CHECK(rows[1].token.surface == ",");
  CHECK(rows[2].token.surface == "a");
}
