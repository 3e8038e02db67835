#include "emoclass/embed.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

#include "emoclass/encoder.hpp"
#include "emoclass/rng.hpp"
#include "emoclass/strutil.hpp"

namespace emoclass {

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& token_sequences,
                             size_t min_count) {
  if (min_count < 1) fail(Errc::config_error, "min_count must be >= 1");
  std::unordered_map<std::string, size_t> counts;
  for (const auto& seq : token_sequences) {
    for (const auto& token : seq) ++counts[token];
  }
  std::vector<std::pair<std::string, size_t>> kept;
  kept.reserve(counts.size());
  for (auto& [token, count] : counts) {
    if (count >= min_count) kept.emplace_back(token, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  vocab.tokens_ = {kPadToken, kOovToken};
  for (auto& [token, count] : kept) vocab.tokens_.push_back(token);
  for (size_t i = 0; i < vocab.tokens_.size(); ++i) {
    vocab.index_[vocab.tokens_[i]] = static_cast<int>(i);
  }
  return vocab;
}

int Vocabulary::index_of(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kOovIndex : it->second;
}

void Vocabulary::save(const std::string& path) const {
  std::string out;
  for (const std::string& token : tokens_) {
    out += token;
    out += '\n';
  }
  write_text_file(path, out);
}

Vocabulary Vocabulary::load(const std::string& path) {
  Vocabulary vocab;
  vocab.tokens_ = split_lines(read_text_file(path));
  if (vocab.tokens_.size() < 2 || vocab.tokens_[0] != kPadToken || vocab.tokens_[1] != kOovToken) {
    fail(Errc::corrupt_artifact, path + ": vocabulary must start with the PAD and OOV markers");
  }
  for (size_t i = 0; i < vocab.tokens_.size(); ++i) {
    auto [it, inserted] = vocab.index_.emplace(vocab.tokens_[i], static_cast<int>(i));
    if (!inserted) fail(Errc::corrupt_artifact, path + ": duplicate token '" + vocab.tokens_[i] + "'");
  }
  return vocab;
}

std::vector<int> encode_sequence(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                                 int seq_len) {
  if (seq_len < 1) fail(Errc::config_error, "seq_len must be >= 1");
  std::vector<int> ids(static_cast<size_t>(seq_len), Vocabulary::kPadIndex);
  const size_t n = std::min(tokens.size(), static_cast<size_t>(seq_len));
  for (size_t i = 0; i < n; ++i) ids[i] = vocab.index_of(tokens[i]);
  return ids;
}

void StaticTable::insert(const std::string& token, Eigen::VectorXd vector) {
  if (dim_ == 0) dim_ = static_cast<int>(vector.size());
  if (vector.size() != dim_) {
    fail(Errc::dimension_mismatch, "vector for '" + token + "' has dimension " +
                                       std::to_string(vector.size()) + ", table has " + std::to_string(dim_));
  }
  vectors_[token] = std::move(vector);
}

Eigen::VectorXd StaticTable::lookup(const std::string& token) const {
  auto it = vectors_.find(token);
  if (it == vectors_.end()) return Eigen::VectorXd::Zero(dim_);
  return it->second;
}

namespace {

bool is_count_header(const std::vector<std::string>& fields) {
  if (fields.size() != 2) return false;
  for (const std::string& f : fields) {
    if (f.empty()) return false;
    for (char c : f) {
      if (!is_ascii_digit(c)) return false;
    }
  }
  return true;
}

double parse_float_strict(const std::string& s, const std::string& path, size_t line_no) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    fail(Errc::malformed_float, path + ": line " + std::to_string(line_no) + ": bad float '" + s + "'");
  }
  return v;
}

std::vector<std::string> whitespace_fields(std::string_view line) {
  std::vector<std::string> fields;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) fields.emplace_back(line.substr(start, i - start));
  }
  return fields;
}

}  // namespace

StaticTable load_static_vectors(const std::string& path) {
  const std::vector<std::string> lines = split_lines(read_text_file(path));
  StaticTable table;
  size_t line_no = 0;
  bool first_data_line = true;
  for (const std::string& line : lines) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = whitespace_fields(line);
    if (first_data_line && is_count_header(fields)) {
      first_data_line = false;
      continue;  // "V D" count header
    }
    first_data_line = false;
    if (fields.size() < 2) {
      fail(Errc::dimension_mismatch, path + ": line " + std::to_string(line_no) + ": expected token and vector");
    }
    const int dim = static_cast<int>(fields.size()) - 1;
    if (table.dim() != 0 && dim != table.dim()) {
      fail(Errc::dimension_mismatch, path + ": line " + std::to_string(line_no) + ": dimension " +
                                         std::to_string(dim) + " != " + std::to_string(table.dim()));
    }
    Eigen::VectorXd v(dim);
    for (int d = 0; d < dim; ++d) v[d] = parse_float_strict(fields[static_cast<size_t>(d) + 1], path, line_no);
    table.insert(fields[0], std::move(v));
  }
  if (table.size() == 0) fail(Errc::empty_file, path + ": no vector rows");
  return table;
}

void save_static_vectors(const StaticTable& table, const std::vector<std::string>& tokens,
                         const std::string& path) {
  std::string out;
  char buf[64];
  for (const std::string& token : tokens) {
    if (!table.contains(token)) continue;
    out += token;
    const Eigen::VectorXd v = table.lookup(token);
    for (int d = 0; d < v.size(); ++d) {
      std::snprintf(buf, sizeof(buf), " %.17g", v[d]);
      out += buf;
    }
    out += '\n';
  }
  write_text_file(path, out);
}

StaticTable synthetic_static_table(const std::vector<std::string>& tokens, int dim, uint64_t seed) {
  StaticTable table(dim);
  for (const std::string& token : tokens) {
    if (token == Vocabulary::kPadToken || token == Vocabulary::kOovToken) continue;
    Rng rng(hash_bytes(token, seed));
    Eigen::VectorXd v(dim);
    for (int d = 0; d < dim; ++d) v[d] = rng.uniform(-0.5, 0.5);
    table.insert(token, std::move(v));
  }
  return table;
}

Eigen::VectorXd lookup_static(const StaticTable& table, const std::string& token) {
  return table.lookup(token);
}

Eigen::VectorXd EmbeddingProvider::token_vector(const std::string& token) const {
  return encode({token}).row(0);
}

Eigen::MatrixXd StaticProvider::encode(const std::vector<std::string>& tokens) const {
  Eigen::MatrixXd out(tokens.size(), table_.dim());
  for (size_t i = 0; i < tokens.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = table_.lookup(tokens[i]);
  return out;
}

SubwordProvider::SubwordProvider(int dim, int n_min, int n_max, size_t buckets, uint64_t seed)
    : dim_(dim), n_min_(n_min), n_max_(n_max), buckets_(buckets), seed_(seed) {
  if (dim < 1) fail(Errc::config_error, "subword dimension must be >= 1");
  if (n_min < 1 || n_max < n_min) fail(Errc::config_error, "bad n-gram range");
  if (buckets < 1) fail(Errc::config_error, "bucket count must be >= 1");
}

size_t SubwordProvider::bucket_of(const std::string& gram) const {
  return static_cast<size_t>(hash_bytes(gram, seed_) % buckets_);
}

Eigen::VectorXd SubwordProvider::bucket_vector(size_t bucket) const {
  Rng rng(mix_hash(seed_, 0x5b5b5b5bULL ^ bucket));
  Eigen::VectorXd v(dim_);
  for (int d = 0; d < dim_; ++d) v[d] = rng.uniform(-0.5, 0.5);
  return v;
}

Eigen::MatrixXd SubwordProvider::encode(const std::vector<std::string>& tokens) const {
  Eigen::MatrixXd out(tokens.size(), dim_);
  for (size_t i = 0; i < tokens.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = subword_vector(*this, tokens[i]);
  }
  return out;
}

Eigen::VectorXd subword_vector(const SubwordProvider& provider, const std::string& token) {
  if (token.empty()) fail(Errc::empty_token, "cannot embed an empty token");
  const std::string wrapped = "<" + token + ">";
  std::vector<size_t> grams;
  for (int n = provider.n_min(); n <= provider.n_max(); ++n) {
    if (static_cast<size_t>(n) > wrapped.size()) break;
    for (size_t i = 0; i + static_cast<size_t>(n) <= wrapped.size(); ++i) {
      grams.push_back(provider.bucket_of(wrapped.substr(i, static_cast<size_t>(n))));
    }
  }
  grams.push_back(provider.bucket_of(wrapped));  // whole-token term
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(provider.dim());
  for (size_t bucket : grams) sum += provider.bucket_vector(bucket);
  return sum / static_cast<double>(grams.size());
}

ContextualProvider::ContextualProvider(int dim, uint64_t seed, size_t max_len)
    : backend_(ContextualBackend::stub), dim_(dim), seed_(seed), max_len_(max_len) {
  if (dim < 1) fail(Errc::config_error, "contextual dimension must be >= 1");
}

ContextualProvider::ContextualProvider(std::shared_ptr<const TransformerEncoder> encoder)
    : backend_(ContextualBackend::pretrained),
      dim_(encoder ? encoder->dim() : 0),
      max_len_(encoder ? static_cast<size_t>(encoder->config().max_len) : 0),
      encoder_(std::move(encoder)) {
  if (!encoder_) fail(Errc::backend_unavailable, "pretrained contextual backend requires an encoder");
}

Eigen::MatrixXd ContextualProvider::encode(const std::vector<std::string>& tokens) const {
  if (tokens.empty()) fail(Errc::empty_input, "contextual encoding needs at least one token");
  if (tokens.size() > max_len_) {
    fail(Errc::sequence_too_long, std::to_string(tokens.size()) + " tokens exceeds backend maximum " +
                                      std::to_string(max_len_));
  }
  if (backend_ == ContextualBackend::pretrained) return encoder_->encode_words(tokens);

  Eigen::MatrixXd out(tokens.size(), dim_);
  for (size_t t = 0; t < tokens.size(); ++t) {
    const std::string& left = t > 0 ? tokens[t - 1] : "^";
    const std::string& right = t + 1 < tokens.size() ? tokens[t + 1] : "$";
    uint64_t key = hash_bytes(tokens[t], seed_);
    key = mix_hash(key, hash_bytes(left, seed_ ^ 0xa1ULL));
    key = mix_hash(key, hash_bytes(right, seed_ ^ 0xb2ULL));
    key = mix_hash(key, t % 2);
    Rng rng(key);
    for (int d = 0; d < dim_; ++d) out(static_cast<Eigen::Index>(t), d) = rng.uniform(-0.5, 0.5);
  }
  return out;
}

Eigen::MatrixXd contextual_encode(const ContextualProvider& provider,
                                  const std::vector<std::string>& tokens) {
  return provider.encode(tokens);
}

StackedProvider::StackedProvider(std::vector<ProviderPtr> components)
    : components_(std::move(components)) {
  if (components_.size() < 2) {
    fail(Errc::empty_provider_list, "a stack needs at least two component providers");
  }
  dim_ = 0;
  for (const ProviderPtr& p : components_) {
    if (!p) fail(Errc::empty_provider_list, "null provider in stack");
    dim_ += p->dim();
  }
}

Eigen::MatrixXd StackedProvider::encode(const std::vector<std::string>& tokens) const {
  Eigen::MatrixXd out(tokens.size(), dim_);
  Eigen::Index col = 0;
  for (const ProviderPtr& p : components_) {
    out.block(0, col, static_cast<Eigen::Index>(tokens.size()), p->dim()) = p->encode(tokens);
    col += p->dim();
  }
  return out;
}

StackedProvider stack_providers(std::vector<ProviderPtr> providers) {
  return StackedProvider(std::move(providers));
}

EmbeddingMatrix build_embedding_matrix(const Vocabulary& vocab, const EmbeddingProvider& provider) {
  EmbeddingMatrix matrix;
  matrix.rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(vocab.size()), provider.dim());
  // Row 0 (PAD) stays zero. The OOV row falls out of the provider rules:
  // zero for static components, the subword vector of the literal marker
  // for subword components.
  for (size_t i = 1; i < vocab.size(); ++i) {
    matrix.rows.row(static_cast<Eigen::Index>(i)) = provider.token_vector(vocab.token_at(i));
  }
  return matrix;
}

}  // namespace emoclass
