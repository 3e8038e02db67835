#pragma once

#include <map>
#include <string>

namespace emoclass {

// Flat "key = value" text with '#' comments and dotted section keys.
// std::map keeps keys sorted, which gives snapshots a stable byte layout.
using KvMap = std::map<std::string, std::string>;

KvMap parse_kv_text(const std::string& text);
KvMap load_kv_file(const std::string& path);
std::string render_kv(const KvMap& kv);
void save_kv_file(const KvMap& kv, const std::string& path);

bool kv_has(const KvMap& kv, const std::string& key);
std::string kv_get(const KvMap& kv, const std::string& key, const std::string& fallback);
std::string kv_require(const KvMap& kv, const std::string& key);
bool kv_get_bool(const KvMap& kv, const std::string& key, bool fallback);
long long kv_get_int(const KvMap& kv, const std::string& key, long long fallback);
double kv_get_double(const KvMap& kv, const std::string& key, double fallback);

}  // namespace emoclass
