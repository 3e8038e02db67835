#include "emoclass/corpus.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <unordered_map>

#include "emoclass/rng.hpp"
#include "emoclass/strutil.hpp"

namespace emoclass {

namespace {

constexpr std::array<std::string_view, kBasicEmotionCount> kEmotionNames = {
    "Anger", "Disgust", "Fear", "Hope", "Joy", "Neutral", "Sadness", "Surprise",
};

// The composite categories the classifier targets: every singleton plus the
// mixed sets that occur in the task's label space.
constexpr std::array<std::string_view, 31> kTargetCategories = {
    "Anger",
    "Anger/Disgust",
    "Anger/Disgust/Sadness",
    "Anger/Fear",
    "Anger/Hope",
    "Anger/Joy",
    "Anger/Neutral",
    "Anger/Sadness",
    "Anger/Surprise",
    "Disgust",
    "Disgust/Fear",
    "Disgust/Hope",
    "Disgust/Neutral",
    "Disgust/Sadness",
    "Disgust/Surprise",
    "Fear",
    "Fear/Hope",
    "Fear/Neutral",
    "Fear/Sadness",
    "Hope",
    "Hope/Neutral",
    "Hope/Sadness",
    "Joy",
    "Joy/Neutral",
    "Joy/Sadness",
    "Neutral",
    "Neutral/Sadness",
    "Neutral/Surprise",
    "Sadness",
    "Sadness/Surprise",
    "Surprise",
};

}  // namespace

std::string_view emotion_name(BasicEmotion e) { return kEmotionNames[static_cast<size_t>(e)]; }

std::optional<BasicEmotion> emotion_from_name(std::string_view name) {
  const std::string lowered = to_lower_ascii(name);
  for (size_t i = 0; i < kEmotionNames.size(); ++i) {
    if (lowered == to_lower_ascii(kEmotionNames[i])) return static_cast<BasicEmotion>(i);
  }
  return std::nullopt;
}

EmotionLabel::EmotionLabel(uint8_t mask) : mask_(mask) {
  if (mask_ == 0) fail(Errc::empty_label, "label must contain at least one base emotion");
}

EmotionLabel EmotionLabel::of(std::initializer_list<BasicEmotion> bases) {
  uint8_t mask = 0;
  for (BasicEmotion e : bases) mask |= static_cast<uint8_t>(1u << static_cast<int>(e));
  return EmotionLabel(mask);
}

int EmotionLabel::base_count() const {
  int n = 0;
  for (int i = 0; i < kBasicEmotionCount; ++i) n += (mask_ >> i) & 1;
  return n;
}

std::vector<BasicEmotion> EmotionLabel::bases() const {
  std::vector<BasicEmotion> out;
  for (int i = 0; i < kBasicEmotionCount; ++i) {
    if ((mask_ >> i) & 1) out.push_back(static_cast<BasicEmotion>(i));
  }
  return out;
}

std::string EmotionLabel::canonical_text() const {
  std::string out;
  for (BasicEmotion e : bases()) {
    if (!out.empty()) out += '/';
    out += emotion_name(e);
  }
  return out;
}

EmotionLabel parse_label(std::string_view raw) {
  std::string_view trimmed = trim(raw);
  if (trimmed.empty()) fail(Errc::empty_label, "label string is empty");
  uint8_t mask = 0;
  for (const std::string& part : split(trimmed, '/')) {
    std::string_view p = trim(part);
    if (p.empty()) continue;
    auto e = emotion_from_name(p);
    if (!e) fail(Errc::unknown_emotion, "unknown emotion '" + std::string(p) + "' in label '" + std::string(trimmed) + "'");
    mask |= static_cast<uint8_t>(1u << static_cast<int>(*e));
  }
  if (mask == 0) fail(Errc::empty_label, "label '" + std::string(trimmed) + "' has no emotion segments");
  return EmotionLabel(mask);
}

std::string format_label(const EmotionLabel& label) { return label.canonical_text(); }

const std::vector<EmotionLabel>& target_categories() {
  static const std::vector<EmotionLabel> categories = [] {
    std::vector<EmotionLabel> out;
    out.reserve(kTargetCategories.size());
    for (std::string_view s : kTargetCategories) out.push_back(parse_label(s));
    return out;
  }();
  return categories;
}

const std::vector<std::string>& target_category_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    out.reserve(kTargetCategories.size());
    for (std::string_view s : kTargetCategories) out.emplace_back(s);
    return out;
  }();
  return names;
}

std::string_view split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
  }
  return "train";
}

std::optional<Split> split_from_name(std::string_view name) {
  const std::string lowered = to_lower_ascii(trim(name));
  if (lowered == "train") return Split::train;
  if (lowered == "dev") return Split::dev;
  if (lowered == "test") return Split::test;
  return std::nullopt;
}

Corpus load_corpus(const std::string& path, const ColumnMap& columns, Split split_tag) {
  const std::vector<std::string> lines = split_lines(read_text_file(path));
  if (lines.empty()) fail(Errc::malformed_row, path + ": file has no header row");

  const std::vector<std::string> header = split(lines[0], '\t');
  auto find_column = [&](const std::string& name) -> int {
    for (size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
  };

  const int id_col = find_column(columns.id);
  if (id_col < 0) fail(Errc::missing_column, path + ": missing id column '" + columns.id + "'");
  const int text_col = find_column(columns.text);
  if (text_col < 0) fail(Errc::missing_column, path + ": missing text column '" + columns.text + "'");
  int label_col = -1;
  if (!columns.label.empty()) {
    label_col = find_column(columns.label);
    if (label_col < 0) fail(Errc::missing_column, path + ": missing label column '" + columns.label + "'");
  }

  Corpus corpus;
  corpus.columns = columns;
  std::unordered_map<std::string, size_t> first_row_of_id;  // physical line numbers, header is line 1
  for (size_t i = 1; i < lines.size(); ++i) {
    const size_t line_no = i + 1;
    const std::vector<std::string> fields = split(lines[i], '\t');
    if (fields.size() != header.size()) {
      fail(Errc::malformed_row, path + ": line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                                    " fields, header has " + std::to_string(header.size()));
    }
    Essay essay;
    essay.id = fields[static_cast<size_t>(id_col)];
    essay.text = fields[static_cast<size_t>(text_col)];
    essay.split = split_tag;
    if (essay.id.empty()) fail(Errc::malformed_row, path + ": line " + std::to_string(line_no) + " has empty id");
    if (essay.text.empty()) fail(Errc::malformed_row, path + ": line " + std::to_string(line_no) + " has empty text");
    auto [it, inserted] = first_row_of_id.emplace(essay.id, line_no);
    if (!inserted) {
      fail(Errc::duplicate_id, path + ": duplicate id '" + essay.id + "' (rows " + std::to_string(it->second) +
                                   " and " + std::to_string(line_no) + ")");
    }
    if (label_col >= 0 && !fields[static_cast<size_t>(label_col)].empty()) {
      try {
        essay.label = parse_label(fields[static_cast<size_t>(label_col)]);
      } catch (const Error& e) {
        fail(Errc::label_parse, path + ": line " + std::to_string(line_no) + ": " + e.what());
      }
    }
    corpus.essays.push_back(std::move(essay));
  }
  return corpus;
}

SplitSummary split_summary(const std::vector<Corpus>& corpora) {
  SplitSummary summary;
  for (const Corpus& corpus : corpora) {
    for (const Essay& essay : corpus.essays) {
      switch (essay.split) {
        case Split::train: ++summary.train; break;
        case Split::dev: ++summary.dev; break;
        case Split::test: ++summary.test; break;
      }
    }
  }
  return summary;
}

std::vector<std::pair<std::string, size_t>> class_distribution(const Corpus& corpus) {
  std::unordered_map<std::string, size_t> counts;
  for (const Essay& essay : corpus.essays) {
    if (!essay.label) fail(Errc::unlabeled_essay, "essay '" + essay.id + "' has no label");
    ++counts[essay.label->canonical_text()];
  }
  std::vector<std::pair<std::string, size_t>> out(counts.begin(), counts.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

std::string render_distribution_tsv(const std::vector<std::pair<std::string, size_t>>& dist) {
  std::string out;
  for (const auto& [label, count] : dist) {
    out += label;
    out += '\t';
    out += std::to_string(count);
    out += '\n';
  }
  return out;
}

std::string render_distribution_histogram(const std::vector<std::pair<std::string, size_t>>& dist,
                                          int max_width) {
  if (dist.empty()) return "";
  size_t label_width = 0;
  size_t max_count = 1;
  for (const auto& [label, count] : dist) {
    label_width = std::max(label_width, label.size());
    max_count = std::max(max_count, count);
  }
  std::string out;
  for (const auto& [label, count] : dist) {
    out += label;
    out.append(label_width - label.size() + 2, ' ');
    size_t bar = count == 0 ? 0 : std::max<size_t>(1, count * static_cast<size_t>(max_width) / max_count);
    out.append(bar, '#');
    out += ' ';
    out += std::to_string(count);
    out += '\n';
  }
  return out;
}

namespace {

std::string class_slug(const EmotionLabel& label) {
  std::string slug;
  for (char c : label.canonical_text()) {
    if (is_ascii_letter(c)) slug += lower_ascii(c);
  }
  return slug;
}

constexpr std::array<std::string_view, 8> kFillerTokens = {
    "today", "news", "article", "people", "world", "report", "story", "life",
};

}  // namespace

Corpus synth_corpus(uint64_t seed, size_t n, const std::vector<ClassWeight>& weights, Split split) {
  if (weights.empty()) fail(Errc::invalid_weights, "weight list is empty");
  double total = 0.0;
  for (const ClassWeight& w : weights) {
    if (!(w.weight >= 0.0) || w.weight != w.weight) {
      fail(Errc::invalid_weights, "weight for '" + w.label.canonical_text() + "' must be nonnegative");
    }
    total += w.weight;
  }
  if (total <= 0.0) fail(Errc::invalid_weights, "at least one weight must be positive");

  Rng rng(seed);
  Corpus corpus;
  for (size_t i = 0; i < n; ++i) {
    const double u = rng.uniform01() * total;
    size_t k = 0;
    double acc = 0.0;
    for (size_t j = 0; j < weights.size(); ++j) {
      acc += weights[j].weight;
      if (u < acc) {
        k = j;
        break;
      }
      k = j;  // numeric edge: fall through to the last class
    }
    const std::string slug = class_slug(weights[k].label);

    const size_t token_count = 12 + rng.index(9);
    std::string text;
    for (size_t t = 0; t < token_count; ++t) {
      if (t > 0) text += ' ';
      // The first token is always class-specific so every essay is separable.
      if (t > 0 && rng.uniform01() < 0.25) {
        text += kFillerTokens[rng.index(kFillerTokens.size())];
      } else {
        text += slug;
        text += 'w';
        text += std::to_string(rng.index(8));
      }
    }

    char id[16];
    std::snprintf(id, sizeof(id), "e%05zu", i);
    corpus.essays.push_back(Essay{id, std::move(text), weights[k].label, split});
  }
  return corpus;
}

}  // namespace emoclass
