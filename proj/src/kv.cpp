#include "emoclass/kv.hpp"

#include <cstdlib>

#include "emoclass/errors.hpp"
#include "emoclass/strutil.hpp"

namespace emoclass {

KvMap parse_kv_text(const std::string& text) {
  KvMap kv;
  size_t line_no = 0;
  for (const std::string& raw : split_lines(text)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      fail(Errc::config_error, "line " + std::to_string(line_no) + ": expected 'key = value', got '" + std::string(line) + "'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) fail(Errc::config_error, "line " + std::to_string(line_no) + ": empty key");
    if (kv.count(key)) fail(Errc::config_error, "duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

KvMap load_kv_file(const std::string& path) { return parse_kv_text(read_text_file(path)); }

std::string render_kv(const KvMap& kv) {
  std::string out;
  for (const auto& [k, v] : kv) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

void save_kv_file(const KvMap& kv, const std::string& path) { write_text_file(path, render_kv(kv)); }

bool kv_has(const KvMap& kv, const std::string& key) { return kv.count(key) != 0; }

std::string kv_get(const KvMap& kv, const std::string& key, const std::string& fallback) {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

std::string kv_require(const KvMap& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end() || it->second.empty()) fail(Errc::config_error, "missing required key '" + key + "'");
  return it->second;
}

bool kv_get_bool(const KvMap& kv, const std::string& key, bool fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  const std::string v = to_lower_ascii(it->second);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  fail(Errc::config_error, "key '" + key + "': expected boolean, got '" + it->second + "'");
}

long long kv_get_int(const KvMap& kv, const std::string& key, long long fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  char* end = nullptr;
  long long v = std::strtoll(it->second.c_str(), &end, 10);
  if (end == it->second.c_str() || *end != '\0') {
    fail(Errc::config_error, "key '" + key + "': expected integer, got '" + it->second + "'");
  }
  return v;
}

double kv_get_double(const KvMap& kv, const std::string& key, double fallback) {
  auto it = kv.find(key);
  if (it == kv.end()) return fallback;
  char* end = nullptr;
  double v = std::strtod(it->second.c_str(), &end);
  if (end == it->second.c_str() || *end != '\0') {
    fail(Errc::config_error, "key '" + key + "': expected number, got '" + it->second + "'");
  }
  return v;
}

}  // namespace emoclass
