#include "emoclass/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "emoclass/strutil.hpp"

namespace emoclass {

namespace {

double ratio(long long num, long long den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

double f1_of(double precision, double recall) {
  const double sum = precision + recall;
  return sum == 0.0 ? 0.0 : 2.0 * precision * recall / sum;
}

}  // namespace

std::vector<EmotionSet> decompose(std::span<const EmotionLabel> labels) {
  std::vector<EmotionSet> sets;
  sets.reserve(labels.size());
  for (const EmotionLabel& label : labels) sets.push_back(label.mask());
  return sets;
}

ClassCounts confusion_counts(std::span<const EmotionSet> gold, std::span<const EmotionSet> pred) {
  if (gold.size() != pred.size()) {
    fail(Errc::length_mismatch, "gold has " + std::to_string(gold.size()) + " samples, pred has " +
                                    std::to_string(pred.size()));
  }
  ClassCounts counts;
  for (size_t i = 0; i < gold.size(); ++i) {
    for (int c = 0; c < kBasicEmotionCount; ++c) {
      const bool in_gold = (gold[i] >> c) & 1;
      const bool in_pred = (pred[i] >> c) & 1;
      EmotionCounts& e = counts.by_class[static_cast<size_t>(c)];
      e.tp += in_gold && in_pred;
      e.fp += !in_gold && in_pred;
      e.fn += in_gold && !in_pred;
    }
  }
  return counts;
}

MetricsReport report_from_counts(const ClassCounts& counts, size_t n_samples) {
  MetricsReport report;
  report.counts = counts;
  report.n_samples = n_samples;

  long long tp = 0, fp = 0, fn = 0;
  for (const EmotionCounts& e : counts.by_class) {
    tp += e.tp;
    fp += e.fp;
    fn += e.fn;
  }
  report.micro_precision = ratio(tp, tp + fp);
  report.micro_recall = ratio(tp, tp + fn);
  report.micro_f1 = f1_of(report.micro_precision, report.micro_recall);
  report.micro_jaccard = ratio(tp, tp + fp + fn);

  double precision_sum = 0, recall_sum = 0, f1_sum = 0;
  int supported = 0;
  for (const EmotionCounts& e : counts.by_class) {
    if (e.support() == 0) continue;
    ++supported;
    const double p = ratio(e.tp, e.tp + e.fp);
    const double r = ratio(e.tp, e.tp + e.fn);
    precision_sum += p;
    recall_sum += r;
    f1_sum += f1_of(p, r);
  }
  if (supported > 0) {
    report.macro_precision = precision_sum / supported;
    report.macro_recall = recall_sum / supported;
    report.macro_f1 = f1_sum / supported;
  }
  return report;
}

MetricsReport compute_report(std::span<const EmotionLabel> gold, std::span<const EmotionLabel> pred) {
  if (gold.empty()) fail(Errc::empty_input, "no samples to score");
  if (gold.size() != pred.size()) {
    fail(Errc::length_mismatch, "gold has " + std::to_string(gold.size()) + " samples, pred has " +
                                    std::to_string(pred.size()));
  }
  const std::vector<EmotionSet> gold_sets = decompose(gold);
  const std::vector<EmotionSet> pred_sets = decompose(pred);
  return report_from_counts(confusion_counts(gold_sets, pred_sets), gold.size());
}

std::vector<std::string> validate_report(const MetricsReport& report, double tol) {
  if (!(tol > 0)) fail(Errc::config_error, "tolerance must be positive");
  std::vector<std::string> violations;
  const std::vector<std::pair<std::string, double>> values = {
      {"micro_f1", report.micro_f1},
      {"macro_f1", report.macro_f1},
      {"micro_jaccard", report.micro_jaccard},
      {"micro_precision", report.micro_precision},
      {"macro_precision", report.macro_precision},
      {"micro_recall", report.micro_recall},
      {"macro_recall", report.macro_recall},
  };
  for (const auto& [name, value] : values) {
    if (!(value >= 0.0 && value <= 1.0)) {
      violations.push_back(name + " = " + std::to_string(value) + " outside [0,1]");
    }
  }
  const double pr_sum = report.micro_precision + report.micro_recall;
  const double f1_expected = pr_sum == 0.0 ? 0.0 : 2.0 * report.micro_precision * report.micro_recall / pr_sum;
  if (std::abs(report.micro_f1 - f1_expected) > tol) {
    violations.push_back("micro_f1 " + std::to_string(report.micro_f1) + " != 2PR/(P+R) " +
                         std::to_string(f1_expected));
  }
  const double jaccard_expected = report.micro_f1 / (2.0 - report.micro_f1);
  if (std::abs(report.micro_jaccard - jaccard_expected) > tol) {
    violations.push_back("micro_jaccard " + std::to_string(report.micro_jaccard) + " != f1/(2-f1) " +
                         std::to_string(jaccard_expected));
  }
  return violations;
}

namespace {

const std::vector<std::pair<std::string, double MetricsReport::*>>& metric_rows() {
  static const std::vector<std::pair<std::string, double MetricsReport::*>> rows = {
      {"micro_f1", &MetricsReport::micro_f1},
      {"macro_f1", &MetricsReport::macro_f1},
      {"micro_jaccard", &MetricsReport::micro_jaccard},
      {"micro_precision", &MetricsReport::micro_precision},
      {"macro_precision", &MetricsReport::macro_precision},
      {"micro_recall", &MetricsReport::micro_recall},
      {"macro_recall", &MetricsReport::macro_recall},
  };
  return rows;
}

std::string three_decimals(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string render_results_table(std::span<const NamedReport> reports, TableFormat format) {
  if (reports.empty()) fail(Errc::empty_input, "no reports to render");
  if (format == TableFormat::tsv) {
    std::string out = "metric";
    for (const NamedReport& r : reports) {
      out += '\t';
      out += r.name;
    }
    out += '\n';
    for (const auto& [name, member] : metric_rows()) {
      out += name;
      for (const NamedReport& r : reports) {
        out += '\t';
        out += three_decimals(r.report.*member);
      }
      out += '\n';
    }
    return out;
  }

  size_t name_width = std::string("metric").size();
  for (const auto& [name, member] : metric_rows()) name_width = std::max(name_width, name.size());
  std::vector<size_t> col_widths;
  for (const NamedReport& r : reports) col_widths.push_back(std::max<size_t>(r.name.size(), 5));

  auto pad = [](const std::string& s, size_t width) {
    std::string out = s;
    out.append(width - s.size(), ' ');
    return out;
  };
  std::string out = pad("metric", name_width);
  for (size_t c = 0; c < reports.size(); ++c) {
    out += "  ";
    out += pad(reports[c].name, col_widths[c]);
  }
  out += '\n';
  for (const auto& [name, member] : metric_rows()) {
    out += pad(name, name_width);
    for (size_t c = 0; c < reports.size(); ++c) {
      out += "  ";
      out += pad(three_decimals(reports[c].report.*member), col_widths[c]);
    }
    out += '\n';
  }
  return out;
}

std::vector<LeaderboardRow> load_leaderboard(const std::string& path) {
  const std::vector<std::string> lines = split_lines(read_text_file(path));
  if (lines.empty()) fail(Errc::empty_leaderboard, path + ": empty leaderboard file");
  const std::vector<std::string> header = split(lines[0], '\t');
  auto column = [&](const std::string& name) -> int {
    for (size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  };
  const int team_col = column("team");
  const int macro_f1_col = column("macro_f1");
  if (team_col < 0 || macro_f1_col < 0) {
    fail(Errc::missing_column, path + ": leaderboard needs 'team' and 'macro_f1' columns");
  }
  const int micro_recall_col = column("micro_recall");
  const int micro_precision_col = column("micro_precision");
  const int micro_f1_col = column("micro_f1");
  const int macro_recall_col = column("macro_recall");
  const int macro_precision_col = column("macro_precision");
  const int micro_jaccard_col = column("micro_jaccard");

  std::vector<LeaderboardRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (trim(lines[i]).empty()) continue;
    const std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != header.size()) {
      fail(Errc::malformed_row, path + ": line " + std::to_string(i + 1) + " has wrong field count");
    }
    auto value = [&](int col) {
      if (col < 0) return std::numeric_limits<double>::quiet_NaN();
      return std::strtod(fields[static_cast<size_t>(col)].c_str(), nullptr);
    };
    LeaderboardRow row;
    row.team = fields[static_cast<size_t>(team_col)];
    row.macro_f1 = value(macro_f1_col);
    row.micro_recall = value(micro_recall_col);
    row.micro_precision = value(micro_precision_col);
    row.micro_f1 = value(micro_f1_col);
    row.macro_recall = value(macro_recall_col);
    row.macro_precision = value(macro_precision_col);
    row.micro_jaccard = value(micro_jaccard_col);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(Errc::empty_leaderboard, path + ": no leaderboard rows");
  return rows;
}

size_t rank_against_leaderboard(double macro_f1, std::span<const LeaderboardRow> leaderboard) {
  if (leaderboard.empty()) fail(Errc::empty_leaderboard, "leaderboard has no rows");
  size_t better = 0;
  for (const LeaderboardRow& row : leaderboard) {
    if (row.macro_f1 > macro_f1) ++better;
  }
  return better + 1;
}

}  // namespace emoclass
