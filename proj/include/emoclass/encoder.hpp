#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "emoclass/tensor_io.hpp"

namespace emoclass {

struct EncoderConfig {
  int dim = 768;
  int layers = 2;
  int heads = 4;
  int ffn_dim = 3072;
  int max_len = 256;
};

// Subtoken inventory with greedy longest-match splitting. Continuation
// pieces carry the "##" prefix; a word with no covering pieces becomes [UNK].
class WordpieceVocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kCls = 2;
  static constexpr int kSep = 3;

  // Specials plus single characters (letters, digits, apostrophe) and their
  // continuation forms; enough to cover any normalized token.
  static WordpieceVocab basic_latin();
  static WordpieceVocab load(const std::string& path);
  void save(const std::string& path) const;

  void add(const std::string& piece);
  size_t size() const { return pieces_.size(); }
  int id_of(const std::string& piece) const;
  const std::string& piece_at(size_t id) const { return pieces_.at(id); }
  std::vector<int> split_word(const std::string& word) const;

 private:
  std::vector<std::string> pieces_;
  std::unordered_map<std::string, int> index_;
};

// A self-contained transformer encoder: token + position embeddings followed
// by post-layernorm blocks of multi-head self-attention and a GELU feed
// forward. Weights load from an artifact directory, so a converted set of
// pretrained weights and a seeded random stand-in go through the same path.
//
// forward/encode_words are const and reentrant; training (backward/adam
// access) must be externally serialized per instance.
class TransformerEncoder {
 public:
  struct LayerParams {
    Eigen::MatrixXd wq, wk, wv, wo;    // dim x dim
    Eigen::MatrixXd bq, bk, bv, bo;    // 1 x dim
    Eigen::MatrixXd ln1_g, ln1_b;      // 1 x dim
    Eigen::MatrixXd w1;                // dim x ffn
    Eigen::MatrixXd b1;                // 1 x ffn
    Eigen::MatrixXd w2;                // ffn x dim
    Eigen::MatrixXd b2;                // 1 x dim
    Eigen::MatrixXd ln2_g, ln2_b;      // 1 x dim
  };

  struct LayerCache {
    Eigen::MatrixXd x;                   // layer input
    Eigen::MatrixXd q, k, v;             // projected
    std::vector<Eigen::MatrixXd> attn;   // per-head softmax weights
    Eigen::MatrixXd ctx;                 // concatenated head outputs
    Eigen::MatrixXd xhat1, xhat2;        // layernorm normalized values
    Eigen::VectorXd inv_sigma1, inv_sigma2;
    Eigen::MatrixXd x1;                  // after first add+norm
    Eigen::MatrixXd f1;                  // ffn pre-activation
    Eigen::MatrixXd g;                   // gelu(f1)
  };

  struct Cache {
    std::vector<int> ids;
    std::vector<uint8_t> mask;
    std::vector<LayerCache> layers;
    Eigen::MatrixXd out;
  };

  TransformerEncoder(const EncoderConfig& config, WordpieceVocab vocab, uint64_t seed);
  static std::shared_ptr<TransformerEncoder> load(const std::string& dir);
  void save(const std::string& dir) const;

  const EncoderConfig& config() const { return config_; }
  const WordpieceVocab& vocab() const { return vocab_; }
  int dim() const { return config_.dim; }

  // Word-level contextual vectors: words are wordpiece-split, run through
  // the encoder as [CLS] pieces... [SEP], and each word's subtoken rows are
  // mean-pooled back to one row per input word.
  Eigen::MatrixXd encode_words(const std::vector<std::string>& words) const;

  // ids/mask must have equal length <= max_len; mask is 1 on real positions.
  Eigen::MatrixXd forward(const std::vector<int>& ids, const std::vector<uint8_t>& mask,
                          Cache* cache = nullptr) const;

  // Accumulates parameter gradients for one sequence; d_out rows for padded
  // positions must be zero. Call zero_grads() before a new batch.
  void backward(const Cache& cache, const Eigen::MatrixXd& d_out);
  void zero_grads();

  std::vector<TensorRef> param_refs();        // stable order
  std::vector<TensorRef> grad_refs();

  // Subtoken sequence for a word list: [CLS] pieces... [SEP].
  std::vector<int> subtoken_ids(const std::vector<std::string>& words,
                                std::vector<std::pair<int, int>>* word_spans = nullptr) const;

 private:
  void init_params(uint64_t seed);
  std::vector<TensorRef> refs_into(Eigen::MatrixXd* token_emb, Eigen::MatrixXd* pos_emb,
                                   std::vector<LayerParams>* layers) const;

  EncoderConfig config_;
  WordpieceVocab vocab_;
  Eigen::MatrixXd token_emb_;  // vocab x dim
  Eigen::MatrixXd pos_emb_;    // max_len x dim
  std::vector<LayerParams> layers_;

  Eigen::MatrixXd d_token_emb_;
  Eigen::MatrixXd d_pos_emb_;
  std::vector<LayerParams> d_layers_;
};

}  // namespace emoclass
