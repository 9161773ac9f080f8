#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pieces/annotation.hpp"
#include "pieces/error.hpp"
#include "pieces/frequency.hpp"
#include "pieces/metrics.hpp"
#include "pieces/report.hpp"
#include "pieces/stratified.hpp"
#include "pieces/tokenizer.hpp"
#include "pieces/vocab.hpp"

namespace {

using namespace pieces;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  return out;
}

void finish_output(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write failure on " + path);
}

int clamp_workers(int workers) {
  if (workers < 1) throw ConfigError("--workers must be at least 1");
  return std::min(workers, 64);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct TrainArgs {
  std::vector<std::string> corpus;
  std::vector<int64_t> sizes;
  std::string out_dir;
  std::string mode = "wordpiece";
  int64_t min_freq = 2;
  bool strip_marks = false;
  int workers = 1;
};

void run_train(const TrainArgs& args) {
  if (args.sizes.empty()) throw ConfigError("--size requires at least one value");
  for (size_t i = 1; i < args.sizes.size(); ++i)
    if (args.sizes[i] <= args.sizes[i - 1])
      throw ConfigError("--size values must be strictly increasing");
  const int64_t max_size = args.sizes.back();

  NormalizeConfig normalize_config{args.strip_marks};
  const auto started = std::chrono::steady_clock::now();
  const FrequencyTable table =
      count_frequency_files(args.corpus, normalize_config, clamp_workers(args.workers));
  std::cerr << "counted " << table.total_tokens() << " tokens, " << table.entries().size()
            << " types in " << seconds_since(started) << "s\n";

  TrainConfig config;
  config.target_size = static_cast<size_t>(max_size);
  config.min_pair_frequency = args.min_freq;
  config.mode = parse_train_mode(args.mode);
  const TrainResult result = train_vocabulary(table, config);
  std::cerr << "trained " << result.vocabulary.size() << " pieces (" << result.merges.size()
            << " merges) in " << seconds_since(started) << "s\n";

  if (args.sizes.size() > 1 && static_cast<size_t>(args.sizes.front()) < result.seed_size)
    throw ConfigError("sweep sizes must be at least the seed size (" +
                      std::to_string(result.seed_size) + " pieces)");

  std::filesystem::create_directories(args.out_dir);
  const auto& pieces = result.vocabulary.pieces();
  for (const int64_t size : args.sizes) {
    const size_t kept = std::min(pieces.size(), static_cast<size_t>(size));
    const std::vector<std::string> head(pieces.begin(), pieces.begin() + kept);
    const Vocabulary vocab =
        Vocabulary::with_pieces(head, static_cast<size_t>(size), config.mode);
    const std::string vocab_path =
        args.out_dir + "/vocab-" + std::to_string(size) + ".txt";
    save_vocabulary(vocab, vocab_path);

    const size_t n_merges = kept > result.seed_size ? kept - result.seed_size : 0;
    const std::vector<MergeEvent> head_merges(result.merges.begin(),
                                              result.merges.begin() + n_merges);
    save_merge_log(head_merges, args.out_dir + "/merges-" + std::to_string(size) + ".tsv");
    std::cerr << "wrote " << vocab_path << " (" << kept << " pieces)\n";
  }
}

struct CountArgs {
  std::vector<std::string> corpus;
  std::string out_path;
  bool strip_marks = false;
  int workers = 1;
};

void run_count(const CountArgs& args) {
  NormalizeConfig normalize_config{args.strip_marks};
  const FrequencyTable table =
      count_frequency_files(args.corpus, normalize_config, clamp_workers(args.workers));
  table.write_tsv_file(args.out_path);
  std::cerr << "counted " << table.total_tokens() << " tokens, " << table.entries().size()
            << " types\n";
}

struct TokenizeArgs {
  std::string vocab_path;
  std::string input_path;
  std::string out_path;
  bool strip_marks = false;
  int workers = 1;
};

std::string tokenize_lines_tsv(const WordpieceTokenizer& tokenizer,
                               const std::vector<std::string>& lines,
                               const NormalizeConfig& normalize_config) {
  std::string out;
  for (const std::string& line : lines) {
    for (const TokenPieces& tp : tokenize_line(tokenizer, line, normalize_config)) {
      out.append(tp.token.surface);
      out.push_back('\t');
      out.append(std::to_string(tp.pieces.n_pieces()));
      out.push_back('\t');
      out.append(tokenizer.joined_pieces(tp.pieces));
      out.push_back('\n');
    }
  }
  return out;
}

void run_tokenize(const TokenizeArgs& args) {
  const Vocabulary vocab = load_vocabulary(args.vocab_path);
  const WordpieceTokenizer tokenizer(vocab);
  const NormalizeConfig normalize_config{args.strip_marks};
  const int workers = clamp_workers(args.workers);

  std::ifstream in(args.input_path, std::ios::binary);
  if (!in) throw IoError("cannot open " + args.input_path);
  std::ofstream out = open_output(args.out_path);

  std::vector<std::string> batch;
  std::string line;
  bool more = true;
  while (more) {
    batch.clear();
    while (batch.size() < 65536 && (more = static_cast<bool>(std::getline(in, line))))
      batch.push_back(line);
    if (batch.empty()) break;

    if (workers == 1 || batch.size() < 256) {
      out << tokenize_lines_tsv(tokenizer, batch, normalize_config);
      continue;
    }
    // Shard the batch; concatenating shard outputs in order keeps the
    // result identical to the single-worker run.
    std::vector<std::future<std::string>> parts;
    const size_t shard = (batch.size() + workers - 1) / workers;
    for (size_t begin = 0; begin < batch.size(); begin += shard) {
      const size_t end = std::min(batch.size(), begin + shard);
      parts.push_back(std::async(std::launch::async, [&, begin, end] {
        const std::vector<std::string> slice(batch.begin() + begin, batch.begin() + end);
        return tokenize_lines_tsv(tokenizer, slice, normalize_config);
      }));
    }
    for (auto& part : parts) out << part.get();
  }
  if (in.bad()) throw IoError("read failure on " + args.input_path);
  finish_output(out, args.out_path);
}

struct SplitStatsArgs {
  std::string vocab_path;
  std::vector<std::string> corpus;
  std::string out_path;
  std::string exact_out_path;
  bool by_type = false;
  bool strip_marks = false;
  int workers = 1;
};

void run_split_stats(const SplitStatsArgs& args) {
  const Vocabulary vocab = load_vocabulary(args.vocab_path);
  const WordpieceTokenizer tokenizer(vocab);
  const NormalizeConfig normalize_config{args.strip_marks};
  const FrequencyTable table =
      count_frequency_files(args.corpus, normalize_config, clamp_workers(args.workers));
  const SplitHistogram histogram = histogram_from_table(table, tokenizer, args.by_type);

  std::ofstream out = open_output(args.out_path);
  write_histogram_csv(out, histogram);
  finish_output(out, args.out_path);
  if (!args.exact_out_path.empty()) {
    std::ofstream exact = open_output(args.exact_out_path);
    write_exact_histogram_csv(exact, histogram);
    finish_output(exact, args.exact_out_path);
  }
  std::cerr << "tokens " << histogram.total << ", unk " << histogram.unk_count << "\n";
}

struct EvalArgs {
  std::string task;
  std::string gold_path;
  std::string pred_path;
  std::string out_path;
  std::string vocab_path;
  std::string figure_csv;
  bool stratify = false;
  bool strip_marks = false;
};

MsetItemKind mset_kind_of(const std::string& task) {
  if (task == "seg") return MsetItemKind::Seg;
  if (task == "seg-pos") return MsetItemKind::SegPos;
  return MsetItemKind::SegFeats;
}

void run_eval(const EvalArgs& args) {
  const bool is_mset = args.task == "seg" || args.task == "seg-pos" || args.task == "seg-feats";
  const bool is_ner = args.task == "ner-token" || args.task == "ner-morph";
  if (!is_mset && !is_ner && args.task != "sentiment")
    throw ConfigError("unknown task " + args.task);
  if (args.stratify && args.task == "sentiment")
    throw ConfigError("sentiment evaluation has no stratified form");
  if (args.stratify && args.vocab_path.empty())
    throw ConfigError("--stratify requires --vocab");
  if (!args.figure_csv.empty() && !args.stratify)
    throw ConfigError("--figure-csv requires --stratify");

  std::optional<WordpieceTokenizer> tokenizer;
  if (args.stratify) tokenizer.emplace(load_vocabulary(args.vocab_path));
  const NormalizeConfig normalize_config{args.strip_marks};

  EvalReport overall;
  StratifiedReport stratified;
  std::string kind;
  std::string metric;
  Rational score;

  if (is_mset) {
    const auto gold = read_morph_file(args.gold_path);
    const auto pred = read_morph_file(args.pred_path);
    const MsetItemKind item_kind = mset_kind_of(args.task);
    kind = "mset";
    metric = "mset-f1";
    if (args.stratify) {
      stratified = stratified_mset(gold, pred, item_kind, *tokenizer, normalize_config);
      overall = stratified.overall;
    } else {
      overall = mset_score(gold, pred, item_kind);
    }
    score = overall.f1();
  } else if (is_ner) {
    const BioesLevel level =
        args.task == "ner-token" ? BioesLevel::Token : BioesLevel::Morpheme;
    const auto gold = read_bioes_file(args.gold_path, level);
    const auto pred = read_bioes_file(args.pred_path, level);
    kind = "span-f1";
    metric = "span-f1";
    if (args.stratify) {
      stratified = stratified_ner(gold, pred, *tokenizer, normalize_config);
      overall = stratified.overall;
    } else {
      overall = span_f1(decode_all_mentions(gold), decode_all_mentions(pred));
    }
    score = overall.f1();
  } else {
    const auto gold = read_sentiment_file(args.gold_path);
    const auto pred = read_sentiment_file(args.pred_path);
    std::vector<Sentiment> gold_labels;
    std::vector<Sentiment> pred_labels;
    for (const auto& example : gold) gold_labels.push_back(example.label);
    for (const auto& example : pred) pred_labels.push_back(example.label);
    overall = sentence_accuracy_report(gold_labels, pred_labels);
    kind = "accuracy";
    metric = "accuracy";
    score = overall.recall();
  }

  std::ofstream out = open_output(args.out_path);
  out << eval_report_json(args.task, kind, overall,
                          args.stratify ? &stratified : nullptr);
  finish_output(out, args.out_path);

  if (!args.figure_csv.empty()) {
    std::ofstream csv = open_output(args.figure_csv);
    write_stratified_csv(csv, stratified);
    finish_output(csv, args.figure_csv);
  }
  std::cout << summary_tsv_row(args.task, metric, score);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic wordpiece vocabulary laboratory"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train = app.add_subcommand("train-vocab", "train a vocabulary (or a nested sweep)");
  train->add_option("--corpus", train_args.corpus, "input text files")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--size", train_args.sizes, "target sizes, ascending")
      ->required()
      ->delimiter(',');
  train->add_option("--out", train_args.out_dir, "output directory")->required();
  train->add_option("--mode", train_args.mode, "wordpiece or bpe")
      ->check(CLI::IsMember({"wordpiece", "bpe"}));
  train->add_option("--min-freq", train_args.min_freq, "minimum pair frequency");
  train->add_flag("--strip-marks", train_args.strip_marks, "drop nonspacing marks");
  train->add_option("--workers", train_args.workers, "counting workers");

  CountArgs count_args;
  auto* count = app.add_subcommand("count-freq", "count token frequencies");
  count->add_option("--corpus", count_args.corpus, "input text files")
      ->required()
      ->check(CLI::ExistingFile);
  count->add_option("--out", count_args.out_path, "output TSV")->required();
  count->add_flag("--strip-marks", count_args.strip_marks, "drop nonspacing marks");
  count->add_option("--workers", count_args.workers, "counting workers");

  TokenizeArgs tokenize_args;
  auto* tok = app.add_subcommand("tokenize", "tokenize text into pieces");
  tok->add_option("--vocab", tokenize_args.vocab_path, "vocabulary file")
      ->required()
      ->check(CLI::ExistingFile);
  tok->add_option("--input", tokenize_args.input_path, "input text file")
      ->required()
      ->check(CLI::ExistingFile);
  tok->add_option("--out", tokenize_args.out_path, "output TSV")->required();
  tok->add_flag("--strip-marks", tokenize_args.strip_marks, "drop nonspacing marks");
  tok->add_option("--workers", tokenize_args.workers, "tokenization workers");

  SplitStatsArgs stats_args;
  auto* stats = app.add_subcommand("split-stats", "piece-count distribution");
  stats->add_option("--vocab", stats_args.vocab_path, "vocabulary file")
      ->required()
      ->check(CLI::ExistingFile);
  stats->add_option("--corpus", stats_args.corpus, "input text files")
      ->required()
      ->check(CLI::ExistingFile);
  stats->add_option("--out", stats_args.out_path, "output CSV")->required();
  stats->add_option("--exact-out", stats_args.exact_out_path, "per-n_pieces CSV");
  stats->add_flag("--by-type", stats_args.by_type, "count types instead of occurrences");
  stats->add_flag("--strip-marks", stats_args.strip_marks, "drop nonspacing marks");
  stats->add_option("--workers", stats_args.workers, "counting workers");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate predictions against gold");
  eval->add_option("--task", eval_args.task, "seg|seg-pos|seg-feats|ner-token|ner-morph|sentiment")
      ->required()
      ->check(CLI::IsMember({"seg", "seg-pos", "seg-feats", "ner-token", "ner-morph",
                             "sentiment"}));
  eval->add_option("--gold", eval_args.gold_path, "gold file")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--pred", eval_args.pred_path, "prediction file")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--out", eval_args.out_path, "JSON report path")->required();
  eval->add_flag("--stratify", eval_args.stratify, "report per split group");
  eval->add_option("--vocab", eval_args.vocab_path, "vocabulary for --stratify");
  eval->add_option("--figure-csv", eval_args.figure_csv, "stratified CSV path");
  eval->add_flag("--strip-marks", eval_args.strip_marks, "drop nonspacing marks");

  train->callback([&] { run_train(train_args); });
  count->callback([&] { run_count(count_args); });
  tok->callback([&] { run_tokenize(tokenize_args); });
  stats->callback([&] { run_split_stats(stats_args); });
  eval->callback([&] { run_eval(eval_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
