#include "pieces/annotation.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <unordered_set>

#include "pieces/error.hpp"
#include "pieces/unicode.hpp"

namespace pieces {

namespace {

std::vector<std::string_view> split_tab(std::string_view line) {
  std::vector<std::string_view> cols;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(start));
      return cols;
    }
    cols.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

[[noreturn]] void fail(const std::string& path, size_t line_no, const std::string& message) {
  throw FormatError(path + ":" + std::to_string(line_no) + ": " + message);
}

void check_utf8(const std::string& path, size_t line_no, std::string_view line) {
  size_t bad = 0;
  if (!uni::valid_utf8(line, &bad))
    fail(path, line_no, "invalid UTF-8 at byte offset " + std::to_string(bad));
}

int64_t parse_index(const std::string& path, size_t line_no, std::string_view text) {
  int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0)
    fail(path, line_no, "token_index must be a non-negative integer");
  return value;
}

// Strips one trailing carriage return so CRLF inputs parse.
std::string_view chomp(std::string_view line) {
  if (line.ends_with('\r')) line.remove_suffix(1);
  return line;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

}  // namespace

std::string canonical_feats(std::string_view feats) {
  if (feats.empty() || feats == "_") return "_";
  std::vector<std::string_view> parts;
  size_t start = 0;
  while (true) {
    const size_t bar = feats.find('|', start);
    if (bar == std::string_view::npos) {
      parts.push_back(feats.substr(start));
      break;
    }
    parts.push_back(feats.substr(start, bar - start));
    start = bar + 1;
  }
  for (std::string_view part : parts) {
    const size_t eq = part.find('=');
    if (eq == 0 || eq == std::string_view::npos)
      throw FormatError("feature must look like key=value: \"" + std::string(part) + "\"");
  }
  std::sort(parts.begin(), parts.end());
  std::unordered_set<std::string_view> keys;
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    const std::string_view key = parts[i].substr(0, parts[i].find('='));
    if (!keys.insert(key).second)
      throw FormatError("duplicate feature key \"" + std::string(key) + "\"");
    if (i) out.push_back('|');
    out.append(parts[i]);
  }
  return out;
}

std::vector<MorphSentence> read_morph_file(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<MorphSentence> sentences;
  MorphSentence sentence;
  std::string raw;
  size_t line_no = 0;

  const auto flush_sentence = [&] {
    if (!sentence.empty()) sentences.push_back(std::move(sentence));
    sentence.clear();
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = chomp(raw);
    if (line.empty()) {
      flush_sentence();
      continue;
    }
    check_utf8(path, line_no, line);
    const auto cols = split_tab(line);
    if (cols.size() != 5)
      fail(path, line_no, "expected 5 columns, got " + std::to_string(cols.size()));

    const int64_t index = parse_index(path, line_no, cols[0]);
    const std::string_view surface = cols[1];
    const std::string_view segment = cols[2];
    if (surface.empty() || surface == "_") fail(path, line_no, "surface must be non-empty");
    if (segment.empty()) fail(path, line_no, "segment must be non-empty");
    const auto absent = [](std::string_view col) { return col.empty() || col == "_"; };
    if (segment == "_" && (!absent(cols[3]) || !absent(cols[4])))
      fail(path, line_no, "zero-item token cannot carry pos or feats");

    const int64_t expected_new = sentence.empty() ? 0 : sentence.back().token_index + 1;
    if (!sentence.empty() && index == sentence.back().token_index) {
      MorphToken& token = sentence.back();
      if (token.surface != surface)
        fail(path, line_no, "rows for token_index " + std::to_string(index) +
                                " disagree on surface");
      if (token.items.empty())
        fail(path, line_no, "token_index " + std::to_string(index) +
                                " already declared with zero items");
      if (segment == "_") fail(path, line_no, "segment \"_\" cannot join other items");
    } else if (index == expected_new) {
      MorphToken token;
      token.token_index = index;
      token.surface = std::string(surface);
      sentence.push_back(std::move(token));
    } else {
      fail(path, line_no, "token_index " + std::to_string(index) + " breaks monotone order");
    }

    if (segment != "_") {
      MorphItem item;
      item.segment = std::string(segment);
      item.pos = cols[3].empty() ? "_" : std::string(cols[3]);
      try {
        item.feats = canonical_feats(cols[4]);
      } catch (const FormatError& e) {
        fail(path, line_no, e.what());
      }
      sentence.back().items.push_back(std::move(item));
    }
  }
  if (in.bad()) throw IoError("read failure on " + path);
  flush_sentence();
  return sentences;
}

NerLabel parse_ner_label(std::string_view text) {
  if (text == "O") return NerLabel{};
  if (text.size() < 3 || text[1] != '-')
    throw FormatError("malformed BIOES label \"" + std::string(text) + "\"");
  NerLabel label;
  switch (text[0]) {
    case 'B':
      label.kind = NerLabel::Kind::B;
      break;
    case 'I':
      label.kind = NerLabel::Kind::I;
      break;
    case 'E':
      label.kind = NerLabel::Kind::E;
      break;
    case 'S':
      label.kind = NerLabel::Kind::S;
      break;
    default:
      throw FormatError("malformed BIOES label \"" + std::string(text) + "\"");
  }
  label.type = std::string(text.substr(2));
  return label;
}

std::string ner_label_string(const NerLabel& label) {
  switch (label.kind) {
    case NerLabel::Kind::O:
      return "O";
    case NerLabel::Kind::B:
      return "B-" + label.type;
    case NerLabel::Kind::I:
      return "I-" + label.type;
    case NerLabel::Kind::E:
      return "E-" + label.type;
    case NerLabel::Kind::S:
      return "S-" + label.type;
  }
  return "O";
}

std::vector<NerMention> decode_bioes(const std::vector<NerLabel>& labels, int32_t sentence_id) {
  std::vector<NerMention> mentions;
  int32_t open_start = -1;
  std::string open_type;

  const auto close_at = [&](int32_t end) {
    mentions.push_back(NerMention{sentence_id, open_start, end, open_type});
    open_start = -1;
    open_type.clear();
  };

  for (size_t i = 0; i < labels.size(); ++i) {
    const NerLabel& label = labels[i];
    const int32_t here = static_cast<int32_t>(i);
    switch (label.kind) {
      case NerLabel::Kind::O:
        if (open_start >= 0) close_at(here - 1);
        break;
      case NerLabel::Kind::B:
        if (open_start >= 0) close_at(here - 1);
        open_start = here;
        open_type = label.type;
        break;
      case NerLabel::Kind::S:
        if (open_start >= 0) close_at(here - 1);
        open_start = here;
        open_type = label.type;
        close_at(here);
        break;
      case NerLabel::Kind::I:
        if (open_start >= 0 && open_type != label.type) close_at(here - 1);
        if (open_start < 0) {
          open_start = here;
          open_type = label.type;
        }
        break;
      case NerLabel::Kind::E:
        if (open_start >= 0 && open_type != label.type) close_at(here - 1);
        if (open_start < 0) {
          // Leading E opens like B; a later label or sentence end closes it.
          open_start = here;
          open_type = label.type;
        } else {
          close_at(here);
        }
        break;
    }
  }
  if (open_start >= 0) close_at(static_cast<int32_t>(labels.size()) - 1);
  return mentions;
}

std::vector<NerLabel> encode_bioes(const std::vector<NerMention>& mentions, size_t n_units) {
  std::vector<NerLabel> labels(n_units);
  std::vector<NerMention> sorted = mentions;
  std::sort(sorted.begin(), sorted.end());
  int32_t covered_to = -1;
  for (const NerMention& m : sorted) {
    if (m.start < 0 || m.end < m.start || static_cast<size_t>(m.end) >= n_units)
      throw ConfigError("mention out of range");
    if (m.start <= covered_to) throw ConfigError("overlapping mentions cannot be encoded");
    covered_to = m.end;
    if (m.start == m.end) {
      labels[m.start] = NerLabel{NerLabel::Kind::S, m.entity_type};
      continue;
    }
    labels[m.start] = NerLabel{NerLabel::Kind::B, m.entity_type};
    for (int32_t i = m.start + 1; i < m.end; ++i)
      labels[i] = NerLabel{NerLabel::Kind::I, m.entity_type};
    labels[m.end] = NerLabel{NerLabel::Kind::E, m.entity_type};
  }
  return labels;
}

std::vector<BioesSentence> read_bioes_file(const std::string& path, BioesLevel level) {
  std::ifstream in = open_input(path);
  std::vector<BioesSentence> sentences;
  BioesSentence sentence;
  std::string raw;
  size_t line_no = 0;

  const auto flush_sentence = [&] {
    if (!sentence.units.empty()) sentences.push_back(std::move(sentence));
    sentence = BioesSentence{};
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = chomp(raw);
    if (line.empty()) {
      flush_sentence();
      continue;
    }
    check_utf8(path, line_no, line);
    const auto cols = split_tab(line);

    std::string_view surface;
    std::string_view label_text;
    if (level == BioesLevel::Token) {
      if (cols.size() != 2)
        fail(path, line_no, "expected 2 columns, got " + std::to_string(cols.size()));
      surface = cols[0];
      label_text = cols[1];
      if (surface.empty()) fail(path, line_no, "surface must be non-empty");
      sentence.unit_token.push_back(static_cast<int32_t>(sentence.units.size()));
      sentence.token_surfaces.emplace_back(surface);
    } else {
      if (cols.size() != 4)
        fail(path, line_no, "expected 4 columns, got " + std::to_string(cols.size()));
      const int64_t index = parse_index(path, line_no, cols[0]);
      const std::string_view token_surface = cols[1];
      surface = cols[2];
      label_text = cols[3];
      if (token_surface.empty()) fail(path, line_no, "token surface must be non-empty");
      if (surface.empty()) fail(path, line_no, "segment must be non-empty");

      const int64_t n_tokens = static_cast<int64_t>(sentence.token_surfaces.size());
      if (index == n_tokens) {
        sentence.token_surfaces.emplace_back(token_surface);
      } else if (index == n_tokens - 1 && n_tokens > 0) {
        if (sentence.token_surfaces.back() != token_surface)
          fail(path, line_no, "rows for token_index " + std::to_string(index) +
                                  " disagree on token surface");
      } else {
        fail(path, line_no, "token_index " + std::to_string(index) + " breaks monotone order");
      }
      sentence.unit_token.push_back(static_cast<int32_t>(index));
    }

    try {
      sentence.labels.push_back(parse_ner_label(label_text));
    } catch (const FormatError& e) {
      fail(path, line_no, e.what());
    }
    sentence.units.emplace_back(surface);
  }
  if (in.bad()) throw IoError("read failure on " + path);
  flush_sentence();
  return sentences;
}

Sentiment parse_sentiment(std::string_view text) {
  if (text == "Positive") return Sentiment::Positive;
  if (text == "Negative") return Sentiment::Negative;
  if (text == "Neutral") return Sentiment::Neutral;
  throw FormatError("unknown sentiment label \"" + std::string(text) + "\"");
}

std::string_view sentiment_name(Sentiment s) {
  switch (s) {
    case Sentiment::Positive:
      return "Positive";
    case Sentiment::Negative:
      return "Negative";
    case Sentiment::Neutral:
      return "Neutral";
  }
  return "Neutral";
}

std::vector<SentimentExample> read_sentiment_file(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<SentimentExample> examples;
  std::string raw;
  size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = chomp(raw);
    if (line.empty()) continue;
    check_utf8(path, line_no, line);
    const size_t tab = line.find('\t');
    if (tab == std::string_view::npos) fail(path, line_no, "expected label<TAB>sentence");
    SentimentExample example;
    try {
      example.label = parse_sentiment(line.substr(0, tab));
    } catch (const FormatError& e) {
      fail(path, line_no, e.what());
    }
    example.sentence = std::string(line.substr(tab + 1));
    examples.push_back(std::move(example));
  }
  if (in.bad()) throw IoError("read failure on " + path);
  return examples;
}

}  // namespace pieces
