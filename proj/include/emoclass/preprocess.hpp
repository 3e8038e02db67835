#pragma once

#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace emoclass {

// Contraction surface form -> expanded phrase. Keys are lowercase and contain
// an apostrophe; values contain none, so expansion is idempotent. Lookup is
// longest-match at each text position.
class ContractionTable {
 public:
  static ContractionTable builtin();
  // TSV of (contraction, expansion); '#' comment lines allowed.
  static ContractionTable load(const std::string& path);

  void add(std::string contraction, std::string expansion);
  size_t size() const { return size_; }

  // Longest key matching text at pos (case-insensitive), or 0 if none.
  size_t match_at(std::string_view text, size_t pos, std::string_view* expansion) const;

  std::vector<std::pair<std::string, std::string>> entries() const;

 private:
  // keyed by first letter; longest keys first within a bucket
  std::map<char, std::vector<std::pair<std::string, std::string>>> buckets_;
  size_t size_ = 0;
};

// Standard English stopword list minus the negation tokens
// {no, not, nor, never}: dropping negations inverts emotional polarity.
const std::unordered_set<std::string>& builtin_stopwords();
// One token per line, '#' comments allowed. Negation tokens are filtered out
// on load to keep the invariant above.
std::unordered_set<std::string> load_stopwords(const std::string& path);

enum class Morphology { none, stem, lemma };
std::string_view morphology_name(Morphology m);

struct PreprocessConfig {
  bool lowercase = true;
  bool expand_contractions = true;
  bool strip_nonstandard = true;   // drop characters outside printable standard English
  bool strip_punctuation = true;
  bool remove_stopwords = true;
  bool collapse_whitespace = true;
  Morphology morphology = Morphology::none;  // the submitted configuration used none
  std::unordered_set<std::string> stopword_list = builtin_stopwords();
  ContractionTable contractions = ContractionTable::builtin();
};

// Replaces every case-insensitive occurrence of a table key bounded by
// non-letters with its expansion.
std::string expand_contractions(std::string_view text, const ContractionTable& table);

// Applies enabled stages in a fixed order:
//   lowercase -> expand_contractions -> strip_nonstandard -> strip_punctuation
//   -> remove_stopwords -> collapse_whitespace
// Idempotent for every config. With all stages disabled, returns the input
// verbatim.
std::string normalize(std::string_view text, const PreprocessConfig& config);

// Splits normalized text on spaces; join(tokens, " ") == normalized text.
std::vector<std::string> tokenize(std::string_view normalized_text);

// none: identity. stem: deterministic suffix-stripping. lemma: dictionary
// lookup with identity fallback. Token count is preserved.
std::vector<std::string> apply_morphology(const std::vector<std::string>& tokens, Morphology mode);

// Classic suffix-stripping stemmer. Tokens containing non-letters are
// returned unchanged.
std::string stem_token(std::string_view token);
std::string lemma_token(const std::string& token);

}  // namespace emoclass
