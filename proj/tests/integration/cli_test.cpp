#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "corpusgen.hpp"

namespace fs = std::filesystem;

namespace {

const std::string& cli() {
  static const std::string path = [] {
    const char* env = std::getenv("PIECES_CLI");
    REQUIRE_MESSAGE(env != nullptr, "PIECES_CLI must point at the CLI binary");
    return std::string(env);
  }();
  return path;
}

const fs::path& workdir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / "pieces_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args, const fs::path& stdout_path = {}) {
  std::string cmd = cli() + " " + args;
  if (!stdout_path.empty()) cmd += " > " + stdout_path.string();
  cmd += " 2> " + (workdir() / "stderr.log").string();
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing file: ", path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

size_t line_count(const std::string& text) {
  size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

const fs::path& corpus_path() {
  static const fs::path path = [] {
    const fs::path p = workdir() / "corpus.txt";
    std::ofstream out(p, std::ios::binary);
    for (const auto& line : pieces::testing::synth_corpus(400, 0xc11)) out << line << '\n';
    return p;
  }();
  return path;
}

}  // namespace

TEST_CASE("train-vocab writes a nested sweep") {
  const fs::path dir = workdir() / "sweep";
  const int code = run("train-vocab --corpus " + corpus_path().string() +
                       " --size 60,80,100 --min-freq 2 --out " + dir.string());
  CHECK(code == 0);

  const std::string v60 = slurp(dir / "vocab-60.txt");
  const std::string v80 = slurp(dir / "vocab-80.txt");
  const std::string v100 = slurp(dir / "vocab-100.txt");
  CHECK(line_count(v60) == 60);
  CHECK(line_count(v80) == 80);
  CHECK(line_count(v100) == 100);
  CHECK(v80.substr(0, v60.size()) == v60);
  CHECK(v100.substr(0, v80.size()) == v80);

  // 51 seed pieces (21 letters both forms plus , . and the specials), so the
  // merge logs carry size - 51 events.
  CHECK(line_count(slurp(dir / "merges-60.tsv")) == 9);
  CHECK(line_count(slurp(dir / "merges-100.tsv")) == 49);
}

TEST_CASE("train-vocab runs are byte-identical") {
  const fs::path again = workdir() / "sweep-again";
  const int code = run("train-vocab --corpus " + corpus_path().string() +
                       " --size 60,80,100 --min-freq 2 --out " + again.string());
  CHECK(code == 0);
  for (const char* name : {"vocab-60.txt", "vocab-80.txt", "vocab-100.txt", "merges-100.tsv"})
    CHECK(slurp(workdir() / "sweep" / name) == slurp(again / name));
}

TEST_CASE("count-freq is deterministic across workers") {
  const fs::path one = workdir() / "freq1.tsv";
  const fs::path eight = workdir() / "freq8.tsv";
  CHECK(run("count-freq --corpus " + corpus_path().string() + " --workers 1 --out " +
            one.string()) == 0);
  CHECK(run("count-freq --corpus " + corpus_path().string() + " --workers 8 --out " +
            eight.string()) == 0);
  const std::string tsv = slurp(one);
  CHECK(tsv == slurp(eight));
  CHECK(tsv.find('\t') != std::string::npos);
}

TEST_CASE("tokenize output is worker-independent and well-formed") {
  const fs::path vocab = workdir() / "sweep" / "vocab-100.txt";
  const fs::path one = workdir() / "tok1.tsv";
  const fs::path eight = workdir() / "tok8.tsv";
  CHECK(run("tokenize --vocab " + vocab.string() + " --input " + corpus_path().string() +
            " --workers 1 --out " + one.string()) == 0);
  CHECK(run("tokenize --vocab " + vocab.string() + " --input " + corpus_path().string() +
            " --workers 8 --out " + eight.string()) == 0);
  const std::string rows = slurp(one);
  CHECK(rows == slurp(eight));

  // surface, n_pieces, space-joined pieces
  std::istringstream in(rows);
  std::string row;
  size_t checked = 0;
  while (std::getline(in, row) && checked < 50) {
    const size_t t1 = row.find('\t');
    const size_t t2 = row.find('\t', t1 + 1);
    REQUIRE(t1 != std::string::npos);
    REQUIRE(t2 != std::string::npos);
    const std::string surface = row.substr(0, t1);
    const int n = std::stoi(row.substr(t1 + 1, t2 - t1 - 1));
    const std::string joined = row.substr(t2 + 1);
    CHECK(n >= 1);
    // n_pieces matches the number of space-separated pieces.
    CHECK(static_cast<size_t>(std::count(joined.begin(), joined.end(), ' ')) + 1 ==
          static_cast<size_t>(n));
    if (joined != "[UNK]") {
      std::string rebuilt;
      std::istringstream pieces_in(joined);
      std::string piece;
      while (pieces_in >> piece)
        rebuilt += piece.starts_with("##") ? piece.substr(2) : piece;
      CHECK(rebuilt == surface);
    }
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("split-stats writes both histograms") {
  const fs::path vocab = workdir() / "sweep" / "vocab-100.txt";
  const fs::path out = workdir() / "split.csv";
  const fs::path exact = workdir() / "split-exact.csv";
  CHECK(run("split-stats --vocab " + vocab.string() + " --corpus " + corpus_path().string() +
            " --out " + out.string() + " --exact-out " + exact.string()) == 0);

  const std::string csv = slurp(out);
  CHECK(csv.starts_with("group,count,fraction\n1,"));
  CHECK(line_count(csv) == 4);
  CHECK(slurp(exact).starts_with("n_pieces,count,fraction\n"));

  const fs::path by_type = workdir() / "split-type.csv";
  CHECK(run("split-stats --vocab " + vocab.string() + " --corpus " + corpus_path().string() +
            " --by-type --out " + by_type.string()) == 0);
  CHECK(slurp(by_type) != csv);
}

TEST_CASE("eval seg end to end") {
  const fs::path gold = workdir() / "gold.morph";
  const fs::path pred = workdir() / "pred.morph";
  spit(gold,
       "0\tubla\tu\tCONJ\t_\n"
       "0\tubla\tbla\tNOUN\t_\n"
       "1\tdom\tdom\tNOUN\t_\n"
       "\n"
       "0\tdom\tdom\tNOUN\t_\n");
  spit(pred,
       "0\tubla\tubla\tNOUN\t_\n"
       "1\tdom\tdom\tNOUN\t_\n"
       "\n"
       "0\tdom\tdom\tNOUN\t_\n");

  const fs::path report = workdir() / "seg.json";
  const fs::path summary = workdir() / "seg.tsv";
  CHECK(run("eval --task seg --gold " + gold.string() + " --pred " + pred.string() + " --out " +
                report.string(),
            summary) == 0);
  // tp = 2 of gold 4 / pred 3: F1 = 4/7.
  CHECK(slurp(summary) == "seg\tmset-f1\t0.571429\n");
  CHECK(slurp(report).find("\"f1_fraction\": \"4/7\"") != std::string::npos);

  const fs::path vocab = workdir() / "sweep" / "vocab-100.txt";
  const fs::path figure = workdir() / "seg-figure.csv";
  CHECK(run("eval --task seg --gold " + gold.string() + " --pred " + pred.string() + " --out " +
                report.string() + " --stratify --vocab " + vocab.string() + " --figure-csv " +
                figure.string(),
            summary) == 0);
  const std::string csv = slurp(figure);
  CHECK(csv.starts_with("group,tp,pred_total,gold_total,"));
  CHECK(csv.find("\noverall,2,3,4,") != std::string::npos);
  CHECK(line_count(csv) == 5);
}

TEST_CASE("eval ner and sentiment end to end") {
  const fs::path gold = workdir() / "gold.bioes";
  const fs::path pred = workdir() / "pred.bioes";
  spit(gold, "a\tB-PER\nb\tE-PER\nc\tO\n\nd\tS-LOC\n");
  spit(pred, "a\tB-PER\nb\tE-PER\nc\tO\n\nd\tO\n");
  const fs::path report = workdir() / "ner.json";
  const fs::path summary = workdir() / "ner.tsv";
  CHECK(run("eval --task ner-token --gold " + gold.string() + " --pred " + pred.string() +
                " --out " + report.string(),
            summary) == 0);
  // tp = 1, pred 1, gold 2: F1 = 2/3.
  CHECK(slurp(summary) == "ner-token\tspan-f1\t0.666667\n");

  const fs::path sgold = workdir() / "gold.sent";
  const fs::path spred = workdir() / "pred.sent";
  spit(sgold, "Positive\tgood\nNegative\tbad\n");
  spit(spred, "Positive\tgood\nPositive\tbad\n");
  CHECK(run("eval --task sentiment --gold " + sgold.string() + " --pred " + spred.string() +
                " --out " + report.string(),
            summary) == 0);
  CHECK(slurp(summary) == "sentiment\taccuracy\t0.500000\n");
}

TEST_CASE("exit codes follow the error taxonomy") {
  // Usage errors: 1.
  CHECK(run("no-such-command") == 1);
  CHECK(run("train-vocab --size 10 --out /tmp/x") == 1);  // missing --corpus
  CHECK(run("eval --task nonsense --gold x --pred y --out z") == 1);

  // Config errors: 1.
  CHECK(run("train-vocab --corpus " + corpus_path().string() +
            " --size 100,80 --out " + (workdir() / "bad").string()) == 1);
  CHECK(run("train-vocab --corpus " + corpus_path().string() +
            " --size 3 --out " + (workdir() / "bad").string()) == 1);
  const fs::path gold = workdir() / "gold.morph";  // written by the seg test
  CHECK(run("eval --task seg --gold " + gold.string() + " --pred " + gold.string() + " --out " +
            (workdir() / "x.json").string() + " --stratify") == 1);

  // Format errors: 2.
  const fs::path bad_morph = workdir() / "bad.morph";
  spit(bad_morph, "0\tx\n");
  CHECK(run("eval --task seg --gold " + bad_morph.string() + " --pred " + bad_morph.string() +
            " --out " + (workdir() / "x.json").string()) == 2);
  const fs::path bad_vocab = workdir() / "bad_vocab.txt";
  spit(bad_vocab, "[PAD]\n[UNK]\n");
  CHECK(run("tokenize --vocab " + bad_vocab.string() + " --input " + corpus_path().string() +
            " --out " + (workdir() / "x.tsv").string()) == 2);

  // I/O errors: 3.
  CHECK(run("count-freq --corpus " + corpus_path().string() +
            " --out /nonexistent-dir/freq.tsv") == 3);
}
