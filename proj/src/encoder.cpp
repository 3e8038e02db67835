#include "emoclass/encoder.hpp"

#include <cmath>
#include <filesystem>

#include "emoclass/errors.hpp"
#include "emoclass/kv.hpp"
#include "emoclass/rng.hpp"
#include "emoclass/strutil.hpp"

namespace emoclass {

namespace {

constexpr double kLnEps = 1e-12;
constexpr double kMaskBias = -1e9;

double gelu(double x) { return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2)); }

double gelu_grad(double x) {
  const double phi_big = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
  const double phi_small = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return phi_big + x * phi_small;
}

// y = g .* xhat + b, rowwise over x.
void layernorm_forward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& gain,
                       const Eigen::MatrixXd& bias, Eigen::MatrixXd* y, Eigen::MatrixXd* xhat,
                       Eigen::VectorXd* inv_sigma) {
  const Eigen::Index rows = x.rows(), cols = x.cols();
  y->resize(rows, cols);
  xhat->resize(rows, cols);
  inv_sigma->resize(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double mu = x.row(r).mean();
    const double var = (x.row(r).array() - mu).square().mean();
    const double is = 1.0 / std::sqrt(var + kLnEps);
    (*inv_sigma)[r] = is;
    xhat->row(r) = (x.row(r).array() - mu) * is;
    y->row(r) = xhat->row(r).cwiseProduct(gain.row(0)) + bias.row(0);
  }
}

// dx for the rowwise layernorm; accumulates dgain/dbias.
Eigen::MatrixXd layernorm_backward(const Eigen::MatrixXd& dy, const Eigen::MatrixXd& xhat,
                                   const Eigen::VectorXd& inv_sigma, const Eigen::MatrixXd& gain,
                                   Eigen::MatrixXd* dgain, Eigen::MatrixXd* dbias) {
  const Eigen::Index rows = dy.rows(), cols = dy.cols();
  Eigen::MatrixXd dx(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    dgain->row(0) += dy.row(r).cwiseProduct(xhat.row(r));
    dbias->row(0) += dy.row(r);
    const Eigen::RowVectorXd dxhat = dy.row(r).cwiseProduct(gain.row(0));
    const double mean_dxhat = dxhat.mean();
    const double mean_dxhat_xhat = dxhat.cwiseProduct(xhat.row(r)).mean();
    dx.row(r) = inv_sigma[r] * (dxhat.array() - mean_dxhat - xhat.row(r).array() * mean_dxhat_xhat);
  }
  return dx;
}

}  // namespace

WordpieceVocab WordpieceVocab::basic_latin() {
  WordpieceVocab vocab;
  vocab.add("[PAD]");
  vocab.add("[UNK]");
  vocab.add("[CLS]");
  vocab.add("[SEP]");
  const std::string chars = "abcdefghijklmnopqrstuvwxyz0123456789'";
  for (char c : chars) vocab.add(std::string(1, c));
  for (char c : chars) vocab.add("##" + std::string(1, c));
  return vocab;
}

void WordpieceVocab::add(const std::string& piece) {
  if (index_.count(piece)) return;
  index_[piece] = static_cast<int>(pieces_.size());
  pieces_.push_back(piece);
}

int WordpieceVocab::id_of(const std::string& piece) const {
  auto it = index_.find(piece);
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> WordpieceVocab::split_word(const std::string& word) const {
  std::vector<int> out;
  size_t start = 0;
  while (start < word.size()) {
    int found = -1;
    size_t len = 0;
    for (size_t end = word.size(); end > start; --end) {
      std::string probe = word.substr(start, end - start);
      if (start > 0) probe = "##" + probe;
      const int id = id_of(probe);
      if (id >= 0) {
        found = id;
        len = end - start;
        break;
      }
    }
    if (found < 0) return {kUnk};  // no covering pieces: the whole word is unknown
    out.push_back(found);
    start += len;
  }
  if (out.empty()) out.push_back(kUnk);
  return out;
}

void WordpieceVocab::save(const std::string& path) const {
  std::string out;
  for (const std::string& piece : pieces_) {
    out += piece;
    out += '\n';
  }
  write_text_file(path, out);
}

WordpieceVocab WordpieceVocab::load(const std::string& path) {
  WordpieceVocab vocab;
  for (const std::string& line : split_lines(read_text_file(path))) {
    if (!line.empty()) vocab.add(line);
  }
  if (vocab.size() < 4 || vocab.piece_at(0) != "[PAD]" || vocab.piece_at(1) != "[UNK]" ||
      vocab.piece_at(2) != "[CLS]" || vocab.piece_at(3) != "[SEP]") {
    fail(Errc::corrupt_artifact, path + ": wordpiece vocab must begin with [PAD] [UNK] [CLS] [SEP]");
  }
  return vocab;
}

TransformerEncoder::TransformerEncoder(const EncoderConfig& config, WordpieceVocab vocab,
                                       uint64_t seed)
    : config_(config), vocab_(std::move(vocab)) {
  if (config_.dim < 1 || config_.heads < 1 || config_.dim % config_.heads != 0) {
    fail(Errc::config_error, "encoder dim must be a positive multiple of heads");
  }
  if (config_.layers < 1 || config_.ffn_dim < 1 || config_.max_len < 4) {
    fail(Errc::config_error, "bad encoder configuration");
  }
  init_params(seed);
  zero_grads();
}

void TransformerEncoder::init_params(uint64_t seed) {
  Rng rng(mix_hash(seed, 0xe11c0de2ULL));
  auto fill_uniform = [&rng](Eigen::MatrixXd& m, double limit) {
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.uniform(-limit, limit);
  };
  const int d = config_.dim;
  const int f = config_.ffn_dim;
  token_emb_.resize(static_cast<Eigen::Index>(vocab_.size()), d);
  pos_emb_.resize(config_.max_len, d);
  fill_uniform(token_emb_, 0.05);
  fill_uniform(pos_emb_, 0.05);
  layers_.resize(static_cast<size_t>(config_.layers));
  const double attn_limit = std::sqrt(3.0 / d);
  const double w1_limit = std::sqrt(6.0 / (d + f));
  for (LayerParams& layer : layers_) {
    layer.wq.resize(d, d);
    layer.wk.resize(d, d);
    layer.wv.resize(d, d);
    layer.wo.resize(d, d);
    fill_uniform(layer.wq, attn_limit);
    fill_uniform(layer.wk, attn_limit);
    fill_uniform(layer.wv, attn_limit);
    fill_uniform(layer.wo, attn_limit);
    layer.bq = Eigen::MatrixXd::Zero(1, d);
    layer.bk = Eigen::MatrixXd::Zero(1, d);
    layer.bv = Eigen::MatrixXd::Zero(1, d);
    layer.bo = Eigen::MatrixXd::Zero(1, d);
    layer.ln1_g = Eigen::MatrixXd::Ones(1, d);
    layer.ln1_b = Eigen::MatrixXd::Zero(1, d);
    layer.w1.resize(d, f);
    fill_uniform(layer.w1, w1_limit);
    layer.b1 = Eigen::MatrixXd::Zero(1, f);
    layer.w2.resize(f, d);
    fill_uniform(layer.w2, w1_limit);
    layer.b2 = Eigen::MatrixXd::Zero(1, d);
    layer.ln2_g = Eigen::MatrixXd::Ones(1, d);
    layer.ln2_b = Eigen::MatrixXd::Zero(1, d);
  }
}

void TransformerEncoder::zero_grads() {
  const int d = config_.dim;
  const int f = config_.ffn_dim;
  d_token_emb_ = Eigen::MatrixXd::Zero(token_emb_.rows(), d);
  d_pos_emb_ = Eigen::MatrixXd::Zero(pos_emb_.rows(), d);
  d_layers_.resize(layers_.size());
  for (LayerParams& g : d_layers_) {
    g.wq = Eigen::MatrixXd::Zero(d, d);
    g.wk = Eigen::MatrixXd::Zero(d, d);
    g.wv = Eigen::MatrixXd::Zero(d, d);
    g.wo = Eigen::MatrixXd::Zero(d, d);
    g.bq = Eigen::MatrixXd::Zero(1, d);
    g.bk = Eigen::MatrixXd::Zero(1, d);
    g.bv = Eigen::MatrixXd::Zero(1, d);
    g.bo = Eigen::MatrixXd::Zero(1, d);
    g.ln1_g = Eigen::MatrixXd::Zero(1, d);
    g.ln1_b = Eigen::MatrixXd::Zero(1, d);
    g.w1 = Eigen::MatrixXd::Zero(d, f);
    g.b1 = Eigen::MatrixXd::Zero(1, f);
    g.w2 = Eigen::MatrixXd::Zero(f, d);
    g.b2 = Eigen::MatrixXd::Zero(1, d);
    g.ln2_g = Eigen::MatrixXd::Zero(1, d);
    g.ln2_b = Eigen::MatrixXd::Zero(1, d);
  }
}

std::vector<TensorRef> TransformerEncoder::refs_into(Eigen::MatrixXd* token_emb,
                                                     Eigen::MatrixXd* pos_emb,
                                                     std::vector<LayerParams>* layers) const {
  std::vector<TensorRef> refs;
  refs.push_back({"token_emb", token_emb});
  refs.push_back({"pos_emb", pos_emb});
  for (size_t i = 0; i < layers->size(); ++i) {
    LayerParams& l = (*layers)[i];
    const std::string p = "layer" + std::to_string(i) + ".";
    refs.push_back({p + "wq", &l.wq});
    refs.push_back({p + "bq", &l.bq});
    refs.push_back({p + "wk", &l.wk});
    refs.push_back({p + "bk", &l.bk});
    refs.push_back({p + "wv", &l.wv});
    refs.push_back({p + "bv", &l.bv});
    refs.push_back({p + "wo", &l.wo});
    refs.push_back({p + "bo", &l.bo});
    refs.push_back({p + "ln1_g", &l.ln1_g});
    refs.push_back({p + "ln1_b", &l.ln1_b});
    refs.push_back({p + "w1", &l.w1});
    refs.push_back({p + "b1", &l.b1});
    refs.push_back({p + "w2", &l.w2});
    refs.push_back({p + "b2", &l.b2});
    refs.push_back({p + "ln2_g", &l.ln2_g});
    refs.push_back({p + "ln2_b", &l.ln2_b});
  }
  return refs;
}

std::vector<TensorRef> TransformerEncoder::param_refs() {
  return refs_into(&token_emb_, &pos_emb_, &layers_);
}

std::vector<TensorRef> TransformerEncoder::grad_refs() {
  return refs_into(&d_token_emb_, &d_pos_emb_, &d_layers_);
}

Eigen::MatrixXd TransformerEncoder::forward(const std::vector<int>& ids,
                                            const std::vector<uint8_t>& mask, Cache* cache) const {
  if (ids.empty()) fail(Errc::empty_input, "encoder needs at least one position");
  if (ids.size() != mask.size()) fail(Errc::shape_mismatch, "ids/mask length mismatch");
  if (ids.size() > static_cast<size_t>(config_.max_len)) {
    fail(Errc::sequence_too_long, std::to_string(ids.size()) + " positions exceeds max_len " +
                                      std::to_string(config_.max_len));
  }
  const Eigen::Index T = static_cast<Eigen::Index>(ids.size());
  const int d = config_.dim;
  const int H = config_.heads;
  const int dh = d / H;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));

  Eigen::MatrixXd x(T, d);
  for (Eigen::Index t = 0; t < T; ++t) {
    const int id = ids[static_cast<size_t>(t)];
    if (id < 0 || id >= token_emb_.rows()) fail(Errc::shape_mismatch, "subtoken id out of range");
    x.row(t) = token_emb_.row(id) + pos_emb_.row(t);
  }

  if (cache) {
    cache->ids = ids;
    cache->mask = mask;
    cache->layers.clear();
    cache->layers.resize(layers_.size());
  }

  for (size_t li = 0; li < layers_.size(); ++li) {
    const LayerParams& L = layers_[li];
    LayerCache scratch;
    LayerCache& C = cache ? cache->layers[li] : scratch;
    C.x = x;

    C.q = x * L.wq;
    C.q.rowwise() += L.bq.row(0);
    C.k = x * L.wk;
    C.k.rowwise() += L.bk.row(0);
    C.v = x * L.wv;
    C.v.rowwise() += L.bv.row(0);

    C.attn.assign(static_cast<size_t>(H), Eigen::MatrixXd());
    C.ctx.resize(T, d);
    for (int h = 0; h < H; ++h) {
      const auto qh = C.q.middleCols(h * dh, dh);
      const auto kh = C.k.middleCols(h * dh, dh);
      const auto vh = C.v.middleCols(h * dh, dh);
      Eigen::MatrixXd scores = qh * kh.transpose() * scale;
      for (Eigen::Index j = 0; j < T; ++j) {
        if (!mask[static_cast<size_t>(j)]) scores.col(j).array() += kMaskBias;
      }
      Eigen::MatrixXd& attn = C.attn[static_cast<size_t>(h)];
      attn.resize(T, T);
      for (Eigen::Index r = 0; r < T; ++r) {
        const double row_max = scores.row(r).maxCoeff();
        attn.row(r) = (scores.row(r).array() - row_max).exp();
        attn.row(r) /= attn.row(r).sum();
      }
      C.ctx.middleCols(h * dh, dh) = attn * vh;
    }

    Eigen::MatrixXd o = C.ctx * L.wo;
    o.rowwise() += L.bo.row(0);

    Eigen::MatrixXd x1;
    layernorm_forward(C.x + o, L.ln1_g, L.ln1_b, &x1, &C.xhat1, &C.inv_sigma1);
    C.x1 = x1;

    C.f1 = x1 * L.w1;
    C.f1.rowwise() += L.b1.row(0);
    C.g = C.f1.unaryExpr([](double v) { return gelu(v); });
    Eigen::MatrixXd f2 = C.g * L.w2;
    f2.rowwise() += L.b2.row(0);

    Eigen::MatrixXd x2;
    layernorm_forward(x1 + f2, L.ln2_g, L.ln2_b, &x2, &C.xhat2, &C.inv_sigma2);
    x = x2;
  }

  if (cache) cache->out = x;
  return x;
}

void TransformerEncoder::backward(const Cache& cache, const Eigen::MatrixXd& d_out) {
  const Eigen::Index T = static_cast<Eigen::Index>(cache.ids.size());
  const int d = config_.dim;
  const int H = config_.heads;
  const int dh = d / H;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  if (d_out.rows() != T || d_out.cols() != d) fail(Errc::shape_mismatch, "d_out shape mismatch");

  Eigen::MatrixXd dx = d_out;
  for (size_t li = layers_.size(); li-- > 0;) {
    const LayerParams& L = layers_[li];
    LayerParams& G = d_layers_[li];
    const LayerCache& C = cache.layers[li];

    // second add+norm
    Eigen::MatrixXd dr2 = layernorm_backward(dx, C.xhat2, C.inv_sigma2, L.ln2_g, &G.ln2_g, &G.ln2_b);
    Eigen::MatrixXd dx1 = dr2;

    // ffn
    G.w2 += C.g.transpose() * dr2;
    G.b2.row(0) += dr2.colwise().sum();
    Eigen::MatrixXd dg = dr2 * L.w2.transpose();
    Eigen::MatrixXd df1 = dg.cwiseProduct(C.f1.unaryExpr([](double v) { return gelu_grad(v); }));
    G.w1 += C.x1.transpose() * df1;
    G.b1.row(0) += df1.colwise().sum();
    dx1 += df1 * L.w1.transpose();

    // first add+norm
    Eigen::MatrixXd dr1 = layernorm_backward(dx1, C.xhat1, C.inv_sigma1, L.ln1_g, &G.ln1_g, &G.ln1_b);
    dx = dr1;
    const Eigen::MatrixXd& do_ = dr1;

    // output projection
    G.wo += C.ctx.transpose() * do_;
    G.bo.row(0) += do_.colwise().sum();
    Eigen::MatrixXd dctx = do_ * L.wo.transpose();

    // attention heads
    Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(T, d);
    Eigen::MatrixXd dk = Eigen::MatrixXd::Zero(T, d);
    Eigen::MatrixXd dv = Eigen::MatrixXd::Zero(T, d);
    for (int h = 0; h < H; ++h) {
      const auto qh = C.q.middleCols(h * dh, dh);
      const auto kh = C.k.middleCols(h * dh, dh);
      const auto vh = C.v.middleCols(h * dh, dh);
      const Eigen::MatrixXd& attn = C.attn[static_cast<size_t>(h)];
      const auto dctx_h = dctx.middleCols(h * dh, dh);

      Eigen::MatrixXd dattn = dctx_h * vh.transpose();
      dv.middleCols(h * dh, dh) = attn.transpose() * dctx_h;

      Eigen::MatrixXd dscores(T, T);
      for (Eigen::Index r = 0; r < T; ++r) {
        const double dot = dattn.row(r).cwiseProduct(attn.row(r)).sum();
        dscores.row(r) = (attn.row(r).array() * (dattn.row(r).array() - dot)).matrix();
      }
      dq.middleCols(h * dh, dh) = dscores * kh * scale;
      dk.middleCols(h * dh, dh) = dscores.transpose() * qh * scale;
    }

    // input projections
    G.wq += C.x.transpose() * dq;
    G.bq.row(0) += dq.colwise().sum();
    G.wk += C.x.transpose() * dk;
    G.bk.row(0) += dk.colwise().sum();
    G.wv += C.x.transpose() * dv;
    G.bv.row(0) += dv.colwise().sum();
    dx += dq * L.wq.transpose() + dk * L.wk.transpose() + dv * L.wv.transpose();
  }

  for (Eigen::Index t = 0; t < T; ++t) {
    d_token_emb_.row(cache.ids[static_cast<size_t>(t)]) += dx.row(t);
    d_pos_emb_.row(t) += dx.row(t);
  }
}

std::vector<int> TransformerEncoder::subtoken_ids(const std::vector<std::string>& words,
                                                  std::vector<std::pair<int, int>>* word_spans) const {
  std::vector<int> ids = {WordpieceVocab::kCls};
  if (word_spans) word_spans->clear();
  for (const std::string& word : words) {
    const std::vector<int> pieces = vocab_.split_word(word);
    if (word_spans) word_spans->push_back({static_cast<int>(ids.size()), static_cast<int>(pieces.size())});
    ids.insert(ids.end(), pieces.begin(), pieces.end());
  }
  ids.push_back(WordpieceVocab::kSep);
  return ids;
}

Eigen::MatrixXd TransformerEncoder::encode_words(const std::vector<std::string>& words) const {
  if (words.empty()) fail(Errc::empty_input, "encode_words needs at least one word");
  std::vector<std::pair<int, int>> spans;
  const std::vector<int> ids = subtoken_ids(words, &spans);
  const std::vector<uint8_t> mask(ids.size(), 1);
  const Eigen::MatrixXd hidden = forward(ids, mask);

  Eigen::MatrixXd out(words.size(), config_.dim);
  for (size_t w = 0; w < words.size(); ++w) {
    const auto [start, count] = spans[w];
    out.row(static_cast<Eigen::Index>(w)) =
        hidden.middleRows(start, count).colwise().mean();
  }
  return out;
}

void TransformerEncoder::save(const std::string& dir) const {
  std::filesystem::create_directories(dir);
  KvMap kv;
  kv["format_version"] = "1";
  kv["dim"] = std::to_string(config_.dim);
  kv["layers"] = std::to_string(config_.layers);
  kv["heads"] = std::to_string(config_.heads);
  kv["ffn_dim"] = std::to_string(config_.ffn_dim);
  kv["max_len"] = std::to_string(config_.max_len);
  kv["vocab_size"] = std::to_string(vocab_.size());
  save_kv_file(kv, dir + "/encoder.txt");
  vocab_.save(dir + "/vocab.txt");
  auto* self = const_cast<TransformerEncoder*>(this);
  save_tensors(dir + "/weights.bin", self->param_refs());
}

std::shared_ptr<TransformerEncoder> TransformerEncoder::load(const std::string& dir) {
  const std::string manifest = dir + "/encoder.txt";
  if (!std::filesystem::exists(manifest)) {
    fail(Errc::backend_unavailable, "no encoder artifact at '" + dir + "'");
  }
  const KvMap kv = load_kv_file(manifest);
  const long long version = kv_get_int(kv, "format_version", -1);
  if (version != 1) {
    fail(Errc::version_mismatch, manifest + ": format_version " + std::to_string(version));
  }
  EncoderConfig config;
  config.dim = static_cast<int>(kv_get_int(kv, "dim", 0));
  config.layers = static_cast<int>(kv_get_int(kv, "layers", 0));
  config.heads = static_cast<int>(kv_get_int(kv, "heads", 0));
  config.ffn_dim = static_cast<int>(kv_get_int(kv, "ffn_dim", 0));
  config.max_len = static_cast<int>(kv_get_int(kv, "max_len", 0));
  WordpieceVocab vocab = WordpieceVocab::load(dir + "/vocab.txt");
  if (static_cast<long long>(vocab.size()) != kv_get_int(kv, "vocab_size", -1)) {
    fail(Errc::corrupt_artifact, dir + ": vocab size does not match manifest");
  }
  auto encoder = std::make_shared<TransformerEncoder>(config, std::move(vocab), 0);
  load_tensors(dir + "/weights.bin", encoder->param_refs());
  return encoder;
}

}  // namespace emoclass
