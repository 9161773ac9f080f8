#include "pieces/report.hpp"

#include <ostream>

#include <json.hpp>

namespace pieces {

namespace {

std::string fraction_of(int64_t count, int64_t total) {
  if (total == 0) return Rational::ratio(0, 1).decimal_str();
  return Rational::ratio(count, total).decimal_str();
}

}  // namespace

void write_histogram_csv(std::ostream& out, const SplitHistogram& histogram) {
  out << "group,count,fraction\n";
  out << "1," << histogram.one << "," << fraction_of(histogram.one, histogram.total) << "\n";
  out << "2," << histogram.two << "," << fraction_of(histogram.two, histogram.total) << "\n";
  out << "3+," << histogram.three_plus << ","
      << fraction_of(histogram.three_plus, histogram.total) << "\n";
}

void write_exact_histogram_csv(std::ostream& out, const SplitHistogram& histogram) {
  out << "n_pieces,count,fraction\n";
  for (const auto& [n, count] : histogram.by_exact)
    out << n << "," << count << "," << fraction_of(count, histogram.total) << "\n";
}

void write_mention_csv(std::ostream& out, const MentionSplitCounts& counts) {
  const int64_t total = counts.split + counts.not_split;
  out << "group,count,fraction\n";
  out << "split," << counts.split << "," << fraction_of(counts.split, total) << "\n";
  out << "not_split," << counts.not_split << "," << fraction_of(counts.not_split, total) << "\n";
}

namespace {

void write_report_row(std::ostream& out, std::string_view name, const EvalReport& report) {
  out << name << "," << report.tp << "," << report.pred_total << "," << report.gold_total << ","
      << report.precision().decimal_str() << "," << report.recall().decimal_str() << ","
      << report.f1().decimal_str() << "," << report.precision().fraction_str() << ","
      << report.recall().fraction_str() << "," << report.f1().fraction_str() << ","
      << (report.empty() ? "true" : "false") << "\n";
}

}  // namespace

void write_stratified_csv(std::ostream& out, const StratifiedReport& report) {
  out << "group,tp,pred_total,gold_total,precision,recall,f1,"
         "precision_exact,recall_exact,f1_exact,empty\n";
  if (report.per_group.empty()) return;
  for (const auto& [name, group_report] : report.per_group)
    write_report_row(out, name, group_report);
  write_report_row(out, "overall", report.overall);
}

namespace {

nlohmann::json report_json(const EvalReport& report) {
  return nlohmann::json{{"tp", report.tp},
                        {"pred_total", report.pred_total},
                        {"gold_total", report.gold_total},
                        {"precision", report.precision().decimal_str()},
                        {"recall", report.recall().decimal_str()},
                        {"f1", report.f1().decimal_str()},
                        {"precision_fraction", report.precision().fraction_str()},
                        {"recall_fraction", report.recall().fraction_str()},
                        {"f1_fraction", report.f1().fraction_str()},
                        {"empty", report.empty()}};
}

}  // namespace

std::string eval_report_json(std::string_view task, std::string_view kind,
                             const EvalReport& overall, const StratifiedReport* stratified) {
  nlohmann::json doc = report_json(overall);
  doc["task"] = task;
  doc["kind"] = kind;
  if (stratified) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& [name, group_report] : stratified->per_group) {
      nlohmann::json entry = report_json(group_report);
      entry["group"] = name;
      groups.push_back(std::move(entry));
    }
    doc["groups"] = std::move(groups);
  }
  return doc.dump(2) + "\n";
}

std::string summary_tsv_row(std::string_view task, std::string_view metric,
                            const Rational& score) {
  std::string out;
  out.append(task);
  out.push_back('\t');
  out.append(metric);
  out.push_back('\t');
  out.append(score.decimal_str());
  out.push_back('\n');
  return out;
}

}  // namespace pieces
