#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "pieces/annotation.hpp"
#include "pieces/error.hpp"
#include "pieces/frequency.hpp"
#include "pieces/metrics.hpp"
#include "pieces/normalize.hpp"
#include "pieces/pretokenize.hpp"
#include "pieces/tokenizer.hpp"
#include "pieces/vocab.hpp"

namespace py = pybind11;

namespace {

using namespace pieces;

std::vector<std::string> tokenize_to_strings(const WordpieceTokenizer& tokenizer,
                                             std::string_view word) {
  const PieceSequence seq = tokenizer.tokenize(word);
  std::vector<std::string> out;
  out.reserve(seq.piece_ids.size());
  for (const int32_t id : seq.piece_ids) out.push_back(tokenizer.piece(id));
  return out;
}

std::vector<MorphSentence> sentences_from_segments(
    const std::vector<std::vector<std::vector<std::string>>>& sentences) {
  std::vector<MorphSentence> out;
  for (const auto& sentence : sentences) {
    MorphSentence converted;
    for (size_t t = 0; t < sentence.size(); ++t) {
      MorphToken token;
      token.token_index = static_cast<int64_t>(t);
      token.surface = "token" + std::to_string(t);
      for (const std::string& segment : sentence[t]) token.items.push_back(MorphItem{segment});
      converted.push_back(std::move(token));
    }
    out.push_back(std::move(converted));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_pieces, m) {
  m.doc() = "deterministic wordpiece vocabulary laboratory";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "normalize",
      [](std::string_view text, bool strip_marks) {
        return normalize(text, NormalizeConfig{strip_marks});
      },
      py::arg("text"), py::arg("strip_marks") = false);

  m.def(
      "pretokenize",
      [](std::string_view line) {
        std::vector<std::string> out;
        for (PreToken& token : pretokenize(line)) out.push_back(std::move(token.surface));
        return out;
      },
      py::arg("line"));

  m.def(
      "count_words",
      [](const std::vector<std::string>& lines, bool strip_marks) {
        const FrequencyTable table = count_lines(lines, NormalizeConfig{strip_marks});
        return std::map<std::string, int64_t>(table.entries().begin(), table.entries().end());
      },
      py::arg("lines"), py::arg("strip_marks") = false);

  m.def(
      "train_vocab",
      [](const std::map<std::string, int64_t>& counts, size_t size, const std::string& mode,
         int64_t min_freq) {
        FrequencyTable table;
        for (const auto& [word, count] : counts) table.add(word, count);
        TrainConfig config;
        config.target_size = size;
        config.min_pair_frequency = min_freq;
        config.mode = parse_train_mode(mode);
        return train_vocabulary(table, config).vocabulary.pieces();
      },
      py::arg("counts"), py::arg("size"), py::arg("mode") = "wordpiece",
      py::arg("min_freq") = 2);

  m.def(
      "load_vocab", [](const std::string& path) { return load_vocabulary(path).pieces(); },
      py::arg("path"));

  py::class_<WordpieceTokenizer>(m, "Tokenizer")
      .def(py::init([](const std::vector<std::string>& pieces, size_t max_chars) {
             const size_t target = std::max(pieces.size(), kSpecialPieces.size());
             return WordpieceTokenizer(
                 Vocabulary::with_pieces(pieces, target, TrainMode::WordpieceScore), max_chars);
           }),
           py::arg("pieces"), py::arg("max_chars") = 100)
      .def_static(
          "from_file",
          [](const std::string& path, size_t max_chars) {
            return WordpieceTokenizer(load_vocabulary(path), max_chars);
          },
          py::arg("path"), py::arg("max_chars") = 100)
      .def(
          "tokenize",
          [](const WordpieceTokenizer& tokenizer, std::string_view word) {
            return tokenize_to_strings(tokenizer, word);
          },
          py::arg("word"))
      .def(
          "n_pieces",
          [](const WordpieceTokenizer& tokenizer, std::string_view word) {
            return tokenizer.tokenize(word).n_pieces();
          },
          py::arg("word"))
      .def(
          "is_unknown",
          [](const WordpieceTokenizer& tokenizer, std::string_view word) {
            return tokenizer.tokenize(word).is_unknown;
          },
          py::arg("word"))
      .def_property_readonly(
          "pieces", [](const WordpieceTokenizer& tokenizer) {
            return tokenizer.vocabulary().pieces();
          });

  m.def(
      "decode_bioes",
      [](const std::vector<std::string>& labels) {
        std::vector<NerLabel> parsed;
        parsed.reserve(labels.size());
        for (const std::string& label : labels) parsed.push_back(parse_ner_label(label));
        std::vector<std::tuple<int32_t, int32_t, std::string>> out;
        for (NerMention& mention : decode_bioes(parsed, 0))
          out.emplace_back(mention.start, mention.end, std::move(mention.entity_type));
        return out;
      },
      py::arg("labels"));

  m.def(
      "seg_f1",
      [](const std::vector<std::vector<std::vector<std::string>>>& gold,
         const std::vector<std::vector<std::vector<std::string>>>& pred) {
        const auto report =
            mset_score(sentences_from_segments(gold), sentences_from_segments(pred),
                       MsetItemKind::Seg);
        return report.f1().to_double();
      },
      py::arg("gold"), py::arg("pred"));
}
