// Classic suffix-stripping stemmer (measure-based, five steps).

#include <array>
#include <string>
#include <string_view>

#include "emoclass/preprocess.hpp"
#include "emoclass/strutil.hpp"

namespace emoclass {

namespace {

bool is_vowel_letter(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool is_consonant(std::string_view w, size_t i) {
  char c = w[i];
  if (is_vowel_letter(c)) return false;
  if (c == 'y') return i == 0 ? true : !is_consonant(w, i - 1);
  return true;
}

// m in the [C](VC)^m[V] decomposition.
int measure(std::string_view w) {
  size_t i = 0;
  const size_t n = w.size();
  while (i < n && is_consonant(w, i)) ++i;
  int m = 0;
  while (true) {
    while (i < n && !is_consonant(w, i)) ++i;
    if (i >= n) break;
    ++m;
    while (i < n && is_consonant(w, i)) ++i;
  }
  return m;
}

bool has_vowel(std::string_view w) {
  for (size_t i = 0; i < w.size(); ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

bool ends_double_consonant(std::string_view w) {
  const size_t n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// consonant-vowel-consonant ending where the final consonant is not w, x, y.
bool ends_cvc(std::string_view w) {
  const size_t n = w.size();
  if (n < 3) return false;
  if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1)) return false;
  char c = w[n - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

struct Rule {
  std::string_view from;
  std::string_view to;
};

// Applies the longest matching suffix rule whose stem satisfies m > min_m.
// Once a suffix matches, the step ends whether or not the condition held.
bool apply_rules(std::string& w, std::initializer_list<Rule> rules, int min_m) {
  const Rule* best = nullptr;
  for (const Rule& r : rules) {
    if (ends_with(w, r.from) && (!best || r.from.size() > best->from.size())) best = &r;
  }
  if (!best) return false;
  std::string_view stem(w.data(), w.size() - best->from.size());
  if (measure(stem) > min_m) {
    w.resize(stem.size());
    w += best->to;
  }
  return true;
}

void step1a(std::string& w) {
  if (ends_with(w, "sses")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.resize(w.size() - 2);
  } else if (ends_with(w, "ss")) {
    // unchanged
  } else if (ends_with(w, "s")) {
    w.pop_back();
  }
}

void step1b(std::string& w) {
  if (ends_with(w, "eed")) {
    std::string_view stem(w.data(), w.size() - 3);
    if (measure(stem) > 0) w.pop_back();  // eed -> ee
    return;
  }
  bool stripped = false;
  if (ends_with(w, "ed")) {
    std::string_view stem(w.data(), w.size() - 2);
    if (has_vowel(stem)) {
      w.resize(stem.size());
      stripped = true;
    }
  } else if (ends_with(w, "ing")) {
    std::string_view stem(w.data(), w.size() - 3);
    if (has_vowel(stem)) {
      w.resize(stem.size());
      stripped = true;
    }
  }
  if (!stripped) return;
  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w += 'e';
  } else if (ends_double_consonant(w) && !ends_with(w, "l") && !ends_with(w, "s") && !ends_with(w, "z")) {
    w.pop_back();
  } else if (measure(w) == 1 && ends_cvc(w)) {
    w += 'e';
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") && has_vowel(std::string_view(w.data(), w.size() - 1))) w.back() = 'i';
}

void step2(std::string& w) {
  apply_rules(w,
              {{"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
               {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
               {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
               {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
               {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"}},
              0);
}

void step3(std::string& w) {
  apply_rules(w,
              {{"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
               {"ical", "ic"},  {"ful", ""},   {"ness", ""}},
              0);
}

void step4(std::string& w) {
  // "ion" only drops when the stem ends in s or t; handled before the table
  // when it is the longest match.
  static constexpr std::array<std::string_view, 19> suffixes = {
      "ement", "ance", "ence", "able", "ible", "ment", "ant", "ent", "ion",
      "ism",  "ate",  "iti",  "ous",  "ive",  "ize",  "ou",  "al",  "er",  "ic",
  };
  std::string_view best;
  for (std::string_view s : suffixes) {
    if (ends_with(w, s) && s.size() > best.size()) best = s;
  }
  if (best.empty()) return;
  std::string_view stem(w.data(), w.size() - best.size());
  if (best == "ion" && !(ends_with(stem, "s") || ends_with(stem, "t"))) return;
  if (measure(stem) > 1) w.resize(stem.size());
}

void step5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  std::string_view stem(w.data(), w.size() - 1);
  int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
}

void step5b(std::string& w) {
  if (measure(w) > 1 && ends_double_consonant(w) && w.back() == 'l') w.pop_back();
}

}  // namespace

std::string stem_token(std::string_view token) {
  std::string w(token);
  if (w.size() <= 2) return w;
  for (char c : w) {
    if (!is_ascii_letter(c)) return w;  // stem only plain words
    if (c >= 'A' && c <= 'Z') return w;
  }
  step1a(w);
  step1b(w);
  step1c(w);
  step2(w);
  step3(w);
  step4(w);
  step5a(w);
  step5b(w);
  return w;
}

}  // namespace emoclass
