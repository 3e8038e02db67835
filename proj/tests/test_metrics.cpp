#include "emoclass/metrics.hpp"

#include <cmath>
#include <functional>

#include "doctest.h"
#include "emoclass/rng.hpp"
#include "emoclass/strutil.hpp"
#include "metrics_oracle.hpp"

using namespace emoclass;

namespace {

std::string data_path(const std::string& name) {
  return std::string(EMOCLASS_DATA_DIR) + "/" + name;
}

std::vector<EmotionLabel> labels_of(const std::vector<std::string>& texts) {
  std::vector<EmotionLabel> out;
  for (const std::string& t : texts) out.push_back(parse_label(t));
  return out;
}

// random nonempty base-emotion subsets for both representations
std::pair<std::vector<EmotionLabel>, std::vector<std::set<int>>> random_instance(Rng& rng,
                                                                                 size_t max_samples) {
  const size_t n = 1 + rng.index(max_samples);
  std::vector<EmotionLabel> labels;
  std::vector<std::set<int>> sets;
  for (size_t i = 0; i < n; ++i) {
    const uint8_t mask = static_cast<uint8_t>(1 + rng.index(255));
    labels.push_back(EmotionLabel(mask));
    std::set<int> s;
    for (int c = 0; c < 8; ++c) {
      if ((mask >> c) & 1) s.insert(c);
    }
    sets.push_back(std::move(s));
  }
  return {labels, sets};
}

}  // namespace

TEST_CASE("decompose turns composite labels into base sets") {
  auto sets = decompose(labels_of({"Anger/Disgust"}));
  CHECK(sets == std::vector<EmotionSet>{EmotionLabel::of({BasicEmotion::Anger, BasicEmotion::Disgust}).mask()});

  CHECK(decompose(labels_of({"Joy"}))[0] == EmotionLabel::of({BasicEmotion::Joy}).mask());

  auto two = decompose(labels_of({"Anger/Disgust/Sadness", "Neutral"}));
  REQUIRE(two.size() == 2);
  CHECK(two[0] == parse_label("Anger/Disgust/Sadness").mask());
  CHECK(two[1] == parse_label("Neutral").mask());
}

TEST_CASE("confusion_counts enumerates per-class TP/FP/FN") {
  const auto gold = decompose(labels_of({"Anger", "Hope/Joy"}));
  const auto pred = decompose(labels_of({"Anger/Disgust", "Joy"}));
  ClassCounts counts = confusion_counts(gold, pred);
  CHECK(counts.at(BasicEmotion::Anger).tp == 1);
  CHECK(counts.at(BasicEmotion::Joy).tp == 1);
  CHECK(counts.at(BasicEmotion::Disgust).fp == 1);
  CHECK(counts.at(BasicEmotion::Hope).fn == 1);
  long long total = 0;
  for (const EmotionCounts& e : counts.by_class) total += e.tp + e.fp + e.fn;
  CHECK(total == 4);

  ClassCounts perfect = confusion_counts(gold, gold);
  for (const EmotionCounts& e : perfect.by_class) {
    CHECK(e.fp == 0);
    CHECK(e.fn == 0);
  }

  const auto disjoint_pred = decompose(labels_of({"Neutral", "Sadness"}));
  ClassCounts disjoint = confusion_counts(gold, disjoint_pred);
  for (const EmotionCounts& e : disjoint.by_class) CHECK(e.tp == 0);

  const std::vector<EmotionSet> shorter = {1};
  CHECK_THROWS_AS(confusion_counts(gold, shorter), Error);
}

TEST_CASE("compute_report on the worked example") {
  const auto gold = labels_of({"Anger", "Hope/Joy"});
  const auto pred = labels_of({"Anger/Disgust", "Joy"});
  MetricsReport report = compute_report(gold, pred);
  CHECK(report.micro_precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(report.micro_recall == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(report.micro_f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(report.micro_jaccard == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(report.macro_f1 == doctest::Approx(0.5).epsilon(1e-12));     // mean(1, 1, 0, 0)
  CHECK(report.macro_precision == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(report.macro_recall == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(report.n_samples == 2);
}

TEST_CASE("perfect predictions score 1.0 on all seven metrics") {
  Rng rng(31);
  for (int i = 0; i < 20; ++i) {
    auto [labels, sets] = random_instance(rng, 12);
    MetricsReport report = compute_report(labels, labels);
    CHECK(report.micro_f1 == 1.0);
    CHECK(report.macro_f1 == 1.0);
    CHECK(report.micro_jaccard == 1.0);
    CHECK(report.micro_precision == 1.0);
    CHECK(report.macro_precision == 1.0);
    CHECK(report.micro_recall == 1.0);
    CHECK(report.macro_recall == 1.0);
  }
}

TEST_CASE("per-sample disjoint sets give zero micro metrics") {
  const auto gold = labels_of({"Anger", "Joy/Hope", "Fear"});
  const auto pred = labels_of({"Disgust", "Sadness", "Neutral/Surprise"});
  MetricsReport report = compute_report(gold, pred);
  CHECK(report.micro_f1 == 0.0);
  CHECK(report.micro_precision == 0.0);
  CHECK(report.micro_recall == 0.0);
  CHECK(report.micro_jaccard == 0.0);
}

TEST_CASE("compute_report validates inputs") {
  CHECK_THROWS_AS(compute_report({}, {}), Error);
  const auto gold = labels_of({"Anger"});
  const auto pred = labels_of({"Anger", "Joy"});
  CHECK_THROWS_AS(compute_report(gold, pred), Error);
}

TEST_CASE("published micro precision/recall reproduce F1 and Jaccard") {
  // counts chosen so TP/(TP+FP) = 0.64 and TP/(TP+FN) = 0.5517 exactly
  ClassCounts counts;
  counts.at(BasicEmotion::Anger) = {88272, 49653, 71728};
  MetricsReport report = report_from_counts(counts, 160000);
  CHECK(report.micro_precision == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(report.micro_recall == doctest::Approx(0.5517).epsilon(1e-12));
  CHECK(std::abs(report.micro_f1 - 0.5926) < 5e-4);
  CHECK(std::abs(report.micro_jaccard - 0.4211) < 5e-4);
}

TEST_CASE("oracle equivalence on 1000 random instances") {
  Rng rng(1234);
  for (int i = 0; i < 1000; ++i) {
    auto [labels, sets] = random_instance(rng, 12);
    std::vector<EmotionLabel> pred_labels;
    std::vector<std::set<int>> pred_sets;
    for (size_t s = 0; s < labels.size(); ++s) {
      const uint8_t mask = static_cast<uint8_t>(1 + rng.index(255));
      pred_labels.push_back(EmotionLabel(mask));
      std::set<int> set;
      for (int c = 0; c < 8; ++c) {
        if ((mask >> c) & 1) set.insert(c);
      }
      pred_sets.push_back(std::move(set));
    }
    MetricsReport report = compute_report(labels, pred_labels);
    oracle::Naive naive = oracle::naive_score(sets, pred_sets);
    for (int c = 0; c < 8; ++c) {
      CHECK(report.counts.by_class[c].tp == naive.tp[c]);
      CHECK(report.counts.by_class[c].fp == naive.fp[c]);
      CHECK(report.counts.by_class[c].fn == naive.fn[c]);
    }
    CHECK(std::abs(report.micro_precision - naive.micro_precision) <= 1e-12);
    CHECK(std::abs(report.micro_recall - naive.micro_recall) <= 1e-12);
    CHECK(std::abs(report.micro_f1 - naive.micro_f1) <= 1e-12);
    CHECK(std::abs(report.micro_jaccard - naive.micro_jaccard) <= 1e-12);
    CHECK(std::abs(report.macro_precision - naive.macro_precision) <= 1e-12);
    CHECK(std::abs(report.macro_recall - naive.macro_recall) <= 1e-12);
    CHECK(std::abs(report.macro_f1 - naive.macro_f1) <= 1e-12);
  }
}

TEST_CASE("metrics are permutation invariant") {
  Rng rng(77);
  auto [gold, gold_sets] = random_instance(rng, 12);
  std::vector<EmotionLabel> pred;
  for (size_t i = 0; i < gold.size(); ++i) pred.push_back(EmotionLabel(static_cast<uint8_t>(1 + rng.index(255))));
  MetricsReport base = compute_report(gold, pred);

  std::vector<size_t> order(gold.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int trial = 0; trial < 10; ++trial) {
    rng.shuffle(order);
    std::vector<EmotionLabel> g2, p2;
    for (size_t i : order) {
      g2.push_back(gold[i]);
      p2.push_back(pred[i]);
    }
    MetricsReport shuffled = compute_report(g2, p2);
    CHECK(shuffled.micro_f1 == base.micro_f1);
    CHECK(shuffled.macro_f1 == base.macro_f1);
    CHECK(shuffled.micro_jaccard == base.micro_jaccard);
    CHECK(shuffled.macro_precision == base.macro_precision);
    CHECK(shuffled.macro_recall == base.macro_recall);
  }
}

TEST_CASE("adding a perfectly-predicted sample never hurts micro metrics") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    auto [gold, gold_sets] = random_instance(rng, 10);
    std::vector<EmotionLabel> pred;
    for (size_t i = 0; i < gold.size(); ++i) pred.push_back(EmotionLabel(static_cast<uint8_t>(1 + rng.index(255))));
    MetricsReport before = compute_report(gold, pred);

    const EmotionLabel extra(static_cast<uint8_t>(1 + rng.index(255)));
    std::vector<EmotionLabel> gold2 = gold, pred2 = pred;
    gold2.push_back(extra);
    pred2.push_back(extra);
    MetricsReport after = compute_report(gold2, pred2);

    CHECK(after.micro_precision >= before.micro_precision - 1e-15);
    CHECK(after.micro_recall >= before.micro_recall - 1e-15);
    CHECK(after.micro_f1 >= before.micro_f1 - 1e-15);
    CHECK(after.micro_jaccard >= before.micro_jaccard - 1e-15);
  }
}

TEST_CASE("validate_report accepts computed reports and flags perturbations") {
  Rng rng(88);
  auto [gold, gs] = random_instance(rng, 12);
  std::vector<EmotionLabel> pred;
  for (size_t i = 0; i < gold.size(); ++i) pred.push_back(EmotionLabel(static_cast<uint8_t>(1 + rng.index(255))));
  MetricsReport report = compute_report(gold, pred);
  CHECK(validate_report(report, 1e-9).empty());

  MetricsReport broken = report;
  broken.micro_jaccard += 0.01;
  CHECK(validate_report(broken, 1e-9).size() == 1);

  MetricsReport out_of_range = report;
  out_of_range.macro_f1 = 1.5;
  CHECK_FALSE(validate_report(out_of_range, 1e-9).empty());
}

TEST_CASE("every published leaderboard row satisfies the metric identities") {
  const auto rows = load_leaderboard(data_path("leaderboard.tsv"));
  REQUIRE(rows.size() == 13);
  for (const LeaderboardRow& row : rows) {
    CAPTURE(row.team);
    MetricsReport report;
    report.micro_precision = row.micro_precision;
    report.micro_recall = row.micro_recall;
    report.micro_f1 = row.micro_f1;
    report.micro_jaccard = row.micro_jaccard;
    report.macro_f1 = row.macro_f1;
    report.macro_precision = row.macro_precision;
    report.macro_recall = row.macro_recall;
    CHECK(validate_report(report, 5e-4).empty());
  }
}

TEST_CASE("results table renders the seven metrics in order") {
  MetricsReport report;
  report.micro_f1 = 0.5926;
  report.macro_f1 = 0.2717;
  report.micro_jaccard = 0.4211;
  report.micro_precision = 0.64;
  report.macro_precision = 0.2571;
  report.micro_recall = 0.5517;
  report.macro_recall = 0.3012;

  std::vector<NamedReport> seven;
  for (int i = 0; i < 7; ++i) seven.push_back({"cfg" + std::to_string(i), report});
  const std::string tsv = render_results_table(seven, TableFormat::tsv);
  const auto lines = split(tsv.substr(0, tsv.size() - 1), '\n');
  REQUIRE(lines.size() == 8);  // header + 7 metric rows
  CHECK(split(lines[0], '\t').size() == 8);
  CHECK(split(lines[1], '\t')[0] == "micro_f1");
  CHECK(split(lines[2], '\t')[0] == "macro_f1");
  CHECK(split(lines[3], '\t')[0] == "micro_jaccard");
  CHECK(split(lines[4], '\t')[0] == "micro_precision");
  CHECK(split(lines[5], '\t')[0] == "macro_precision");
  CHECK(split(lines[6], '\t')[0] == "micro_recall");
  CHECK(split(lines[7], '\t')[0] == "macro_recall");
  CHECK(split(lines[1], '\t')[1] == "0.593");  // three decimals
  CHECK(split(lines[3], '\t')[3] == "0.421");

  const std::string one = render_results_table(std::vector<NamedReport>{{"solo", report}}, TableFormat::tsv);
  CHECK(split(one.substr(0, one.size() - 1), '\n').size() == 8);

  const std::string text = render_results_table(seven, TableFormat::text);
  CHECK(text.find("micro_f1") != std::string::npos);
  CHECK(text.find("0.593") != std::string::npos);
}

TEST_CASE("leaderboard ranking inserts by descending macro F1") {
  const auto rows = load_leaderboard(data_path("leaderboard.tsv"));

  std::vector<LeaderboardRow> other_teams;
  for (const LeaderboardRow& row : rows) {
    if (row.team != "kunwarv4") other_teams.push_back(row);
  }
  REQUIRE(other_teams.size() == 12);
  CHECK(rank_against_leaderboard(0.2717, other_teams) == 10);

  CHECK(rank_against_leaderboard(0.99, rows) == 1);
  CHECK(rank_against_leaderboard(0.0, rows) == 14);
  // tie takes the best rank among equals
  CHECK(rank_against_leaderboard(0.2717, rows) == 10);

  CHECK_THROWS_AS(rank_against_leaderboard(0.5, std::vector<LeaderboardRow>{}), Error);
}
