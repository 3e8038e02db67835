#include "emoclass/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_map>

#include "emoclass/errors.hpp"
#include "emoclass/strutil.hpp"

namespace emoclass {

namespace {

constexpr std::pair<std::string_view, std::string_view> kContractions[] = {
    {"ain't", "am not"},
    {"aren't", "are not"},
    {"can't", "cannot"},
    {"can't've", "cannot have"},
    {"'cause", "because"},
    {"could've", "could have"},
    {"couldn't", "could not"},
    {"couldn't've", "could not have"},
    {"daren't", "dare not"},
    {"didn't", "did not"},
    {"doesn't", "does not"},
    {"don't", "do not"},
    {"e'er", "ever"},
    {"hadn't", "had not"},
    {"hadn't've", "had not have"},
    {"hasn't", "has not"},
    {"haven't", "have not"},
    {"he'd", "he would"},
    {"he'd've", "he would have"},
    {"he'll", "he will"},
    {"he'll've", "he will have"},
    {"he's", "he is"},
    {"how'd", "how did"},
    {"how'd'y", "how do you"},
    {"how'll", "how will"},
    {"how's", "how is"},
    {"i'd", "i would"},
    {"i'd've", "i would have"},
    {"i'll", "i will"},
    {"i'll've", "i will have"},
    {"i'm", "i am"},
    {"i've", "i have"},
    {"isn't", "is not"},
    {"it'd", "it would"},
    {"it'd've", "it would have"},
    {"it'll", "it will"},
    {"it'll've", "it will have"},
    {"it's", "it is"},
    {"let's", "let us"},
    {"ma'am", "madam"},
    {"mayn't", "may not"},
    {"might've", "might have"},
    {"mightn't", "might not"},
    {"mightn't've", "might not have"},
    {"must've", "must have"},
    {"mustn't", "must not"},
    {"mustn't've", "must not have"},
    {"ne'er", "never"},
    {"needn't", "need not"},
    {"needn't've", "need not have"},
    {"o'clock", "of the clock"},
    {"o'er", "over"},
    {"oughtn't", "ought not"},
    {"oughtn't've", "ought not have"},
    {"sha'n't", "shall not"},
    {"shan't", "shall not"},
    {"shan't've", "shall not have"},
    {"she'd", "she would"},
    {"she'd've", "she would have"},
    {"she'll", "she will"},
    {"she'll've", "she will have"},
    {"she's", "she is"},
    {"should've", "should have"},
    {"shouldn't", "should not"},
    {"shouldn't've", "should not have"},
    {"so've", "so have"},
    {"so's", "so as"},
    {"that'd", "that would"},
    {"that'd've", "that would have"},
    {"that's", "that is"},
    {"there'd", "there would"},
    {"there'd've", "there would have"},
    {"there's", "there is"},
    {"they'd", "they would"},
    {"they'd've", "they would have"},
    {"they'll", "they will"},
    {"they'll've", "they will have"},
    {"they're", "they are"},
    {"they've", "they have"},
    {"'tis", "it is"},
    {"to've", "to have"},
    {"'twas", "it was"},
    {"wasn't", "was not"},
    {"we'd", "we would"},
    {"we'd've", "we would have"},
    {"we'll", "we will"},
    {"we'll've", "we will have"},
    {"we're", "we are"},
    {"we've", "we have"},
    {"weren't", "were not"},
    {"what'll", "what will"},
    {"what'll've", "what will have"},
    {"what're", "what are"},
    {"what's", "what is"},
    {"what've", "what have"},
    {"when's", "when is"},
    {"when've", "when have"},
    {"where'd", "where did"},
    {"where's", "where is"},
    {"where've", "where have"},
    {"who'll", "who will"},
    {"who'll've", "who will have"},
    {"who's", "who is"},
    {"who've", "who have"},
    {"why's", "why is"},
    {"why've", "why have"},
    {"will've", "will have"},
    {"won't", "will not"},
    {"won't've", "will not have"},
    {"would've", "would have"},
    {"wouldn't", "would not"},
    {"wouldn't've", "would not have"},
    {"y'all", "you all"},
    {"y'all'd", "you all would"},
    {"y'all'd've", "you all would have"},
    {"y'all're", "you all are"},
    {"y'all've", "you all have"},
    {"you'd", "you would"},
    {"you'd've", "you would have"},
    {"you'll", "you will"},
    {"you'll've", "you will have"},
    {"you're", "you are"},
    {"you've", "you have"},
};

// Negations stay in the text: removing them would invert emotional polarity.
constexpr std::string_view kNegations[] = {"no", "not", "nor", "never"};

constexpr std::string_view kStopwords[] = {
    "a",       "about",   "above",    "after",     "again",      "against", "all",     "am",
    "an",      "and",     "any",      "are",       "as",         "at",      "be",      "because",
    "been",    "before",  "being",    "below",     "between",    "both",    "but",     "by",
    "could",   "did",     "do",       "does",      "doing",      "down",    "during",  "each",
    "few",     "for",     "from",     "further",   "had",        "has",     "have",    "having",
    "he",      "her",     "here",     "hers",      "herself",    "him",     "himself", "his",
    "how",     "i",       "if",       "in",        "into",       "is",      "it",      "its",
    "itself",  "just",    "me",       "more",      "most",       "my",      "myself",  "now",
    "of",      "off",     "on",       "once",      "only",       "or",      "other",   "our",
    "ours",    "ourselves", "out",    "over",      "own",        "same",    "she",     "should",
    "so",      "some",    "such",     "than",      "that",       "the",     "their",   "theirs",
    "them",    "themselves", "then",  "there",     "these",      "they",    "this",    "those",
    "through", "to",      "too",      "under",     "until",      "up",      "very",    "was",
    "we",      "were",    "what",     "when",      "where",      "which",   "while",   "who",
    "whom",    "why",     "will",     "with",      "would",      "you",     "your",    "yours",
    "yourself", "yourselves", "s",    "t",         "ll",         "d",       "m",       "re",
    "ve",
};

bool is_negation(std::string_view token) {
  return std::find(std::begin(kNegations), std::end(kNegations), token) != std::end(kNegations);
}

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}

bool is_ascii_punct(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u < 128 && std::ispunct(u);
}

}  // namespace

ContractionTable ContractionTable::builtin() {
  ContractionTable table;
  for (const auto& [k, v] : kContractions) table.add(std::string(k), std::string(v));
  return table;
}

ContractionTable ContractionTable::load(const std::string& path) {
  ContractionTable table;
  size_t line_no = 0;
  for (const std::string& raw : split_lines(read_text_file(path))) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields = split(line, '\t');
    if (fields.size() != 2) {
      fail(Errc::config_error, path + ": line " + std::to_string(line_no) + ": expected 2 tab-separated fields");
    }
    table.add(std::string(trim(fields[0])), std::string(trim(fields[1])));
  }
  return table;
}

void ContractionTable::add(std::string contraction, std::string expansion) {
  contraction = to_lower_ascii(contraction);
  if (contraction.find('\'') == std::string::npos) {
    fail(Errc::config_error, "contraction '" + contraction + "' must contain an apostrophe");
  }
  if (expansion.find('\'') != std::string::npos) {
    fail(Errc::config_error, "expansion '" + expansion + "' must not contain an apostrophe");
  }
  auto& bucket = buckets_[contraction.front()];
  bucket.emplace_back(std::move(contraction), std::move(expansion));
  std::sort(bucket.begin(), bucket.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() > b.first.size();
    return a.first < b.first;
  });
  ++size_;
}

size_t ContractionTable::match_at(std::string_view text, size_t pos, std::string_view* expansion) const {
  if (pos >= text.size()) return 0;
  auto it = buckets_.find(lower_ascii(text[pos]));
  if (it == buckets_.end()) return 0;
  for (const auto& [key, value] : it->second) {
    if (pos + key.size() > text.size()) continue;
    bool equal = true;
    for (size_t i = 0; i < key.size(); ++i) {
      if (lower_ascii(text[pos + i]) != key[i]) {
        equal = false;
        break;
      }
    }
    if (!equal) continue;
    const size_t end = pos + key.size();
    if (end < text.size() && is_ascii_letter(text[end])) continue;  // word boundary
    *expansion = value;
    return key.size();
  }
  return 0;
}

std::vector<std::pair<std::string, std::string>> ContractionTable::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [first, bucket] : buckets_) {
    out.insert(out.end(), bucket.begin(), bucket.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

const std::unordered_set<std::string>& builtin_stopwords() {
  static const std::unordered_set<std::string> words = [] {
    std::unordered_set<std::string> out;
    for (std::string_view w : kStopwords) out.emplace(w);
    return out;
  }();
  return words;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
  std::unordered_set<std::string> out;
  for (const std::string& raw : split_lines(read_text_file(path))) {
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    std::string token = to_lower_ascii(line);
    if (is_negation(token)) continue;
    out.insert(std::move(token));
  }
  return out;
}

std::string_view morphology_name(Morphology m) {
  switch (m) {
    case Morphology::none: return "none";
    case Morphology::stem: return "stem";
    case Morphology::lemma: return "lemma";
  }
  return "none";
}

std::string expand_contractions(std::string_view text, const ContractionTable& table) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    const bool at_boundary = i == 0 || !is_ascii_letter(text[i - 1]);
    if (at_boundary) {
      std::string_view expansion;
      size_t len = table.match_at(text, i, &expansion);
      if (len > 0) {
        out += expansion;
        i += len;
        continue;
      }
    }
    out += text[i++];
  }
  return out;
}

namespace {

std::string strip_nonstandard_chars(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u < 128 && (std::isalnum(u) || is_ascii_punct(c) || is_ascii_space(c))) out += c;
  }
  return out;
}

std::string strip_punctuation_chars(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (is_ascii_punct(c)) c = ' ';
  }
  return out;
}

std::string remove_stopword_tokens(std::string_view text, const std::unordered_set<std::string>& stopwords) {
  std::string out;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_ascii_space(text[i])) ++i;
    size_t start = i;
    while (i < text.size() && !is_ascii_space(text[i])) ++i;
    if (i == start) break;
    std::string token(text.substr(start, i - start));
    if (stopwords.count(to_lower_ascii(token))) continue;
    if (!out.empty()) out += ' ';
    out += token;
  }
  return out;
}

std::string collapse_whitespace_runs(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_space = true;  // also trims leading whitespace
  for (char c : text) {
    if (is_ascii_space(c)) {
      in_space = true;
    } else {
      if (in_space && !out.empty()) out += ' ';
      out += c;
      in_space = false;
    }
  }
  return out;
}

}  // namespace

std::string normalize(std::string_view text, const PreprocessConfig& config) {
  std::string s(text);
  if (config.lowercase) s = to_lower_ascii(s);
  if (config.expand_contractions) s = expand_contractions(s, config.contractions);
  if (config.strip_nonstandard) s = strip_nonstandard_chars(s);
  if (config.strip_punctuation) s = strip_punctuation_chars(s);
  if (config.remove_stopwords) s = remove_stopword_tokens(s, config.stopword_list);
  if (config.collapse_whitespace) s = collapse_whitespace_runs(s);
  return s;
}

std::vector<std::string> tokenize(std::string_view normalized_text) {
  std::vector<std::string> tokens;
  size_t start = 0;
  for (size_t i = 0; i <= normalized_text.size(); ++i) {
    if (i == normalized_text.size() || normalized_text[i] == ' ') {
      if (i > start) tokens.emplace_back(normalized_text.substr(start, i - start));
      start = i + 1;
    }
  }
  return tokens;
}

namespace {

const std::unordered_map<std::string, std::string>& lemma_table() {
  static const std::unordered_map<std::string, std::string> table = {
      {"am", "be"},       {"are", "be"},      {"ate", "eat"},      {"began", "begin"},
      {"begun", "begin"}, {"been", "be"},     {"being", "be"},     {"best", "good"},
      {"better", "good"}, {"brought", "bring"}, {"came", "come"},  {"children", "child"},
      {"chose", "choose"}, {"chosen", "choose"}, {"did", "do"},    {"done", "do"},
      {"drank", "drink"}, {"drawn", "draw"},  {"drew", "draw"},    {"driven", "drive"},
      {"drove", "drive"}, {"fallen", "fall"}, {"feet", "foot"},    {"fell", "fall"},
      {"felt", "feel"},   {"flew", "fly"},    {"flown", "fly"},    {"found", "find"},
      {"gave", "give"},   {"geese", "goose"}, {"given", "give"},   {"gone", "go"},
      {"got", "get"},     {"gotten", "get"},  {"grew", "grow"},    {"grown", "grow"},
      {"had", "have"},    {"has", "have"},    {"heard", "hear"},   {"held", "hold"},
      {"hid", "hide"},    {"hidden", "hide"}, {"is", "be"},        {"kept", "keep"},
      {"knew", "know"},   {"known", "know"},  {"led", "lead"},     {"left", "leave"},
      {"lost", "lose"},   {"made", "make"},   {"meant", "mean"},   {"men", "man"},
      {"met", "meet"},    {"mice", "mouse"},  {"paid", "pay"},     {"ran", "run"},
      {"risen", "rise"},  {"rose", "rise"},   {"said", "say"},     {"sang", "sing"},
      {"sat", "sit"},     {"saw", "see"},     {"seen", "see"},     {"sent", "send"},
      {"shown", "show"},  {"slept", "sleep"}, {"sold", "sell"},    {"spoke", "speak"},
      {"spoken", "speak"}, {"stood", "stand"}, {"sung", "sing"},   {"swam", "swim"},
      {"swum", "swim"},   {"taken", "take"},  {"taught", "teach"}, {"teeth", "tooth"},
      {"thought", "think"}, {"threw", "throw"}, {"thrown", "throw"}, {"told", "tell"},
      {"took", "take"},   {"understood", "understand"}, {"was", "be"}, {"went", "go"},
      {"were", "be"},     {"wives", "wife"},  {"woke", "wake"},    {"woken", "wake"},
      {"women", "woman"}, {"won", "win"},     {"wore", "wear"},    {"worn", "wear"},
      {"worse", "bad"},   {"worst", "bad"},   {"written", "write"}, {"wrote", "write"},
  };
  return table;
}

}  // namespace

std::string lemma_token(const std::string& token) {
  auto it = lemma_table().find(token);
  return it == lemma_table().end() ? token : it->second;
}

std::vector<std::string> apply_morphology(const std::vector<std::string>& tokens, Morphology mode) {
  if (mode == Morphology::none) return tokens;
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const std::string& token : tokens) {
    out.push_back(mode == Morphology::stem ? stem_token(token) : lemma_token(token));
  }
  return out;
}

}  // namespace emoclass
