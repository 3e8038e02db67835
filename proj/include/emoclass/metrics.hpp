#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "emoclass/corpus.hpp"

namespace emoclass {

// Composite labels are scored after decomposition into base-emotion sets:
// published leaderboards show micro precision != micro recall, which rules
// out single-label 31-way micro averaging, and only the set decomposition
// satisfies the Jaccard/F1 identity the published rows obey.

struct EmotionCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long support() const { return tp + fp + fn; }
};

struct ClassCounts {
  std::array<EmotionCounts, kBasicEmotionCount> by_class;
  EmotionCounts& at(BasicEmotion e) { return by_class[static_cast<size_t>(e)]; }
  const EmotionCounts& at(BasicEmotion e) const { return by_class[static_cast<size_t>(e)]; }
};

struct MetricsReport {
  double macro_f1 = 0;
  double micro_f1 = 0;
  double micro_jaccard = 0;
  double micro_precision = 0;
  double micro_recall = 0;
  double macro_precision = 0;
  double macro_recall = 0;
  ClassCounts counts;
  size_t n_samples = 0;
};

// Base-emotion sets as bitmasks over the eight emotions.
using EmotionSet = uint8_t;
std::vector<EmotionSet> decompose(std::span<const EmotionLabel> labels);

// Per class: TP = in both sets, FP = predicted only, FN = gold only.
ClassCounts confusion_counts(std::span<const EmotionSet> gold, std::span<const EmotionSet> pred);

// Micro metrics pool counts over classes; macro metrics average per-class
// ratios over classes with any support (TP+FP+FN > 0), 0/0 taken as 0.
MetricsReport report_from_counts(const ClassCounts& counts, size_t n_samples);
MetricsReport compute_report(std::span<const EmotionLabel> gold, std::span<const EmotionLabel> pred);

// Empty iff the report's identities hold within tol and every metric lies in
// [0,1]: micro_f1 = 2PR/(P+R) and micro_jaccard = f1/(2-f1).
std::vector<std::string> validate_report(const MetricsReport& report, double tol);

struct NamedReport {
  std::string name;
  MetricsReport report;
};
enum class TableFormat { text, tsv };

// Rows are the seven metrics (micro F1, macro F1, micro Jaccard, micro
// precision, macro precision, micro recall, macro recall); columns are the
// configuration names; values have three decimals.
std::string render_results_table(std::span<const NamedReport> reports, TableFormat format);

struct LeaderboardRow {
  std::string team;
  double macro_f1 = 0;
  double micro_recall = 0;
  double micro_precision = 0;
  double micro_f1 = 0;
  double macro_recall = 0;
  double macro_precision = 0;
  double micro_jaccard = 0;
};

// TSV with a header row; team and macro_f1 are required, the other metric
// columns are optional (NaN when absent).
std::vector<LeaderboardRow> load_leaderboard(const std::string& path);

// 1-based position of the score inserted into the descending leaderboard;
// ties take the best rank among equals.
size_t rank_against_leaderboard(double macro_f1, std::span<const LeaderboardRow> leaderboard);

}  // namespace emoclass
