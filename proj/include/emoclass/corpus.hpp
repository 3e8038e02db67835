#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emoclass/errors.hpp"

namespace emoclass {

// The eight atomic emotions every target category is composed of.
// Declaration order is alphabetical, so sorting by enum value sorts by name.
enum class BasicEmotion : uint8_t {
  Anger = 0,
  Disgust,
  Fear,
  Hope,
  Joy,
  Neutral,
  Sadness,
  Surprise,
};
inline constexpr int kBasicEmotionCount = 8;

std::string_view emotion_name(BasicEmotion e);
// Case-insensitive; returns nullopt for anything outside the eight names.
std::optional<BasicEmotion> emotion_from_name(std::string_view name);

// A composite emotion label: a nonempty subset of the eight base emotions.
// Canonical text joins the base names alphabetically with '/'.
class EmotionLabel {
 public:
  explicit EmotionLabel(uint8_t mask);
  static EmotionLabel of(std::initializer_list<BasicEmotion> bases);

  uint8_t mask() const { return mask_; }
  bool contains(BasicEmotion e) const { return (mask_ >> static_cast<int>(e)) & 1; }
  int base_count() const;
  std::vector<BasicEmotion> bases() const;  // ascending == alphabetical
  std::string canonical_text() const;

  friend bool operator==(EmotionLabel a, EmotionLabel b) { return a.mask_ == b.mask_; }
  friend bool operator!=(EmotionLabel a, EmotionLabel b) { return a.mask_ != b.mask_; }

 private:
  uint8_t mask_;
};

// Splits on '/', trims and case-normalizes each part, deduplicates, sorts.
// Throws unknown_emotion / empty_label.
EmotionLabel parse_label(std::string_view raw);
std::string format_label(const EmotionLabel& label);

// The 31 composite categories the classifier targets, in alphabetical order
// of canonical text. This is the classifier's full output space.
const std::vector<EmotionLabel>& target_categories();
const std::vector<std::string>& target_category_names();

enum class Split { train, dev, test };
std::string_view split_name(Split s);
std::optional<Split> split_from_name(std::string_view name);

struct Essay {
  std::string id;
  std::string text;
  std::optional<EmotionLabel> label;  // absent on the blind test split
  Split split = Split::train;
};

// Which input columns supply id/text/label. An empty label name means the
// file carries no labels (test split).
struct ColumnMap {
  std::string id = "essay_id";
  std::string text = "essay";
  std::string label = "emotion";
};

struct Corpus {
  std::vector<Essay> essays;
  ColumnMap columns;
  size_t size() const { return essays.size(); }
};

// Header-bearing UTF-8 TSV, one essay per row. Unmapped columns are ignored.
// Throws missing_column, duplicate_id, malformed_row, label_parse.
Corpus load_corpus(const std::string& path, const ColumnMap& columns, Split split);

struct SplitSummary {
  size_t train = 0;
  size_t dev = 0;
  size_t test = 0;
  size_t total() const { return train + dev + test; }
};
SplitSummary split_summary(const std::vector<Corpus>& corpora);

// Counts per canonical label, sorted by count descending then label
// ascending. Throws unlabeled_essay. Counts sum to corpus size.
std::vector<std::pair<std::string, size_t>> class_distribution(const Corpus& corpus);
std::string render_distribution_tsv(const std::vector<std::pair<std::string, size_t>>& dist);
std::string render_distribution_histogram(const std::vector<std::pair<std::string, size_t>>& dist,
                                          int max_width = 50);

struct ClassWeight {
  EmotionLabel label;
  double weight;
};

// Deterministic synthetic corpus for desk-scale runs. Essay texts are drawn
// from disjoint class-conditional vocabularies (plus a few shared fillers),
// so classes are separable by token identity. Pure function of arguments.
Corpus synth_corpus(uint64_t seed, size_t n, const std::vector<ClassWeight>& weights,
                    Split split = Split::train);

}  // namespace emoclass
