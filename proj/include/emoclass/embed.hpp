#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "emoclass/errors.hpp"

namespace emoclass {

class TransformerEncoder;

// Token -> dense index map. Index 0 is PAD, index 1 is OOV; real tokens get
// indices by descending corpus frequency, ties broken alphabetically.
class Vocabulary {
 public:
  static constexpr const char* kPadToken = "<pad>";
  static constexpr const char* kOovToken = "<oov>";
  static constexpr int kPadIndex = 0;
  static constexpr int kOovIndex = 1;

  static Vocabulary build(const std::vector<std::vector<std::string>>& token_sequences,
                          size_t min_count);

  size_t size() const { return tokens_.size(); }
  // OOV index for tokens outside the vocabulary.
  int index_of(const std::string& token) const;
  const std::string& token_at(size_t index) const { return tokens_.at(index); }
  bool contains(const std::string& token) const { return index_.count(token) != 0; }

  void save(const std::string& path) const;
  static Vocabulary load(const std::string& path);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// OOV tokens map to kOovIndex; long sequences are tail-truncated, short ones
// tail-padded with PAD. Output length is exactly seq_len.
std::vector<int> encode_sequence(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                                 int seq_len);

// Pretrained word vectors in text format: "token v1 v2 ... vD" per line, an
// optional "V D" count header, '.' decimals, scientific notation allowed.
class StaticTable {
 public:
  StaticTable() = default;
  explicit StaticTable(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  size_t size() const { return vectors_.size(); }
  void insert(const std::string& token, Eigen::VectorXd vector);
  bool contains(const std::string& token) const { return vectors_.count(token) != 0; }
  // Stored vector, or all-zeros for unknown tokens.
  Eigen::VectorXd lookup(const std::string& token) const;

 private:
  int dim_ = 0;
  std::unordered_map<std::string, Eigen::VectorXd> vectors_;
};

StaticTable load_static_vectors(const std::string& path);
void save_static_vectors(const StaticTable& table, const std::vector<std::string>& tokens,
                         const std::string& path);
// Deterministic random table covering the given tokens; desk-scale stand-in
// for a real pretrained file.
StaticTable synthetic_static_table(const std::vector<std::string>& tokens, int dim, uint64_t seed);
Eigen::VectorXd lookup_static(const StaticTable& table, const std::string& token);

// A token -> vector source with a fixed dimension. Four kinds: static lookup,
// subword n-gram, contextual, stacked concatenation. Providers are immutable
// after construction and safe for concurrent use.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual int dim() const = 0;
  virtual std::string kind() const = 0;
  // One row per input token. Context-aware kinds see the whole sequence.
  virtual Eigen::MatrixXd encode(const std::vector<std::string>& tokens) const = 0;
  // The token seen in isolation.
  Eigen::VectorXd token_vector(const std::string& token) const;
};

using ProviderPtr = std::shared_ptr<const EmbeddingProvider>;

class StaticProvider : public EmbeddingProvider {
 public:
  explicit StaticProvider(StaticTable table) : table_(std::move(table)) {}
  int dim() const override { return table_.dim(); }
  std::string kind() const override { return "static"; }
  Eigen::MatrixXd encode(const std::vector<std::string>& tokens) const override;
  const StaticTable& table() const { return table_; }

 private:
  StaticTable table_;
};

// Character n-gram embedding: every string gets a vector, so there is no
// hard OOV. The token is wrapped in boundary markers; all n-grams with n in
// [n_min, n_max] plus the whole wrapped token are hashed into seeded bucket
// vectors and averaged.
class SubwordProvider : public EmbeddingProvider {
 public:
  SubwordProvider(int dim, int n_min, int n_max, size_t buckets, uint64_t seed);
  int dim() const override { return dim_; }
  std::string kind() const override { return "subword"; }
  Eigen::MatrixXd encode(const std::vector<std::string>& tokens) const override;

  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  size_t buckets() const { return buckets_; }
  // Exposed so tests can reproduce vectors from an explicit gram list.
  Eigen::VectorXd bucket_vector(size_t bucket) const;
  size_t bucket_of(const std::string& gram) const;

 private:
  int dim_;
  int n_min_;
  int n_max_;
  size_t buckets_;
  uint64_t seed_;
};

Eigen::VectorXd subword_vector(const SubwordProvider& provider, const std::string& token);

enum class ContextualBackend { stub, pretrained };

// Per-occurrence vectors that depend on surrounding tokens. The stub backend
// hashes (token, left neighbor, right neighbor, position parity) into seeded
// vectors and needs no downloaded weights; the pretrained backend delegates
// to a transformer encoder with its own subtoken handling.
class ContextualProvider : public EmbeddingProvider {
 public:
  // stub backend
  ContextualProvider(int dim, uint64_t seed, size_t max_len = 4096);
  // pretrained backend; encode is reentrant, so concurrent use is safe
  explicit ContextualProvider(std::shared_ptr<const TransformerEncoder> encoder);

  int dim() const override { return dim_; }
  std::string kind() const override { return "contextual"; }
  ContextualBackend backend() const { return backend_; }
  Eigen::MatrixXd encode(const std::vector<std::string>& tokens) const override;

 private:
  ContextualBackend backend_;
  int dim_;
  uint64_t seed_ = 0;
  size_t max_len_;
  std::shared_ptr<const TransformerEncoder> encoder_;
};

Eigen::MatrixXd contextual_encode(const ContextualProvider& provider,
                                  const std::vector<std::string>& tokens);

// Concatenation of component vectors in list order; dimension is the sum of
// component dimensions.
class StackedProvider : public EmbeddingProvider {
 public:
  explicit StackedProvider(std::vector<ProviderPtr> components);
  int dim() const override { return dim_; }
  std::string kind() const override { return "stacked"; }
  Eigen::MatrixXd encode(const std::vector<std::string>& tokens) const override;
  const std::vector<ProviderPtr>& components() const { return components_; }

 private:
  std::vector<ProviderPtr> components_;
  int dim_;
};

StackedProvider stack_providers(std::vector<ProviderPtr> providers);

// V x D matrix aligned to a vocabulary; row 0 (PAD) is all zeros. Rows of a
// contextual component come from tokens encoded in isolation, which is the
// only way a fixed matrix can feed the recurrent model.
struct EmbeddingMatrix {
  Eigen::MatrixXd rows;
  int dim() const { return static_cast<int>(rows.cols()); }
  size_t size() const { return static_cast<size_t>(rows.rows()); }
};

EmbeddingMatrix build_embedding_matrix(const Vocabulary& vocab, const EmbeddingProvider& provider);

}  // namespace emoclass
