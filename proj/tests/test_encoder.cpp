#include "emoclass/encoder.hpp"

#include <filesystem>
#include <functional>

#include "doctest.h"
#include "emoclass/embed.hpp"
#include "emoclass/errors.hpp"
#include "emoclass/rng.hpp"

using namespace emoclass;

namespace {

EncoderConfig tiny_config() {
  EncoderConfig config;
  config.dim = 8;
  config.layers = 2;
  config.heads = 2;
  config.ffn_dim = 12;
  config.max_len = 12;
  return config;
}

std::string temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / name;
  std::filesystem::remove_all(dir);
  return dir.string();
}

}  // namespace

TEST_CASE("wordpiece splitting is greedy longest-match") {
  WordpieceVocab vocab = WordpieceVocab::basic_latin();
  vocab.add("cat");
  vocab.add("##s");
  vocab.add("emo");

  CHECK(vocab.split_word("cat") == std::vector<int>{vocab.id_of("cat")});
  CHECK(vocab.split_word("cats") == std::vector<int>{vocab.id_of("cat"), vocab.id_of("##s")});
  CHECK(vocab.split_word("emot") == std::vector<int>{vocab.id_of("emo"), vocab.id_of("##t")});
  // covered by single characters
  CHECK(vocab.split_word("dog").size() == 3);
  // bytes outside the inventory collapse to [UNK]
  CHECK(vocab.split_word("\xc3\xa9") == std::vector<int>{WordpieceVocab::kUnk});
}

TEST_CASE("encoder forward shape, determinism, and context sensitivity") {
  auto encoder = TransformerEncoder(tiny_config(), WordpieceVocab::basic_latin(), 7);

  Eigen::MatrixXd a = encoder.encode_words({"bank", "river"});
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 8);
  Eigen::MatrixXd b = encoder.encode_words({"bank", "loan"});
  CHECK((a.row(0) - b.row(0)).cwiseAbs().maxCoeff() > 1e-9);  // context changes the row
  CHECK(encoder.encode_words({"bank", "river"}) == a);

  CHECK_THROWS_AS(encoder.encode_words({}), Error);
  try {
    encoder.encode_words({"averyveryverylongword", "another", "andmore"});
    FAIL("expected sequence_too_long");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::sequence_too_long);
  }
}

TEST_CASE("encoder artifact round-trips and reports missing/corrupt state") {
  const std::string dir = temp_dir("emoclass_encoder_artifact");
  auto encoder = TransformerEncoder(tiny_config(), WordpieceVocab::basic_latin(), 11);
  encoder.save(dir);

  auto loaded = TransformerEncoder::load(dir);
  Eigen::MatrixXd original = encoder.encode_words({"hope", "wins"});
  Eigen::MatrixXd reloaded = loaded->encode_words({"hope", "wins"});
  CHECK((original - reloaded).cwiseAbs().maxCoeff() == 0.0);

  try {
    TransformerEncoder::load(temp_dir("emoclass_encoder_missing"));
    FAIL("expected backend_unavailable");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::backend_unavailable);
  }

  // truncated weights
  std::filesystem::resize_file(dir + "/weights.bin", 64);
  try {
    TransformerEncoder::load(dir);
    FAIL("expected corrupt_artifact");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::corrupt_artifact);
  }
}

TEST_CASE("pretrained contextual provider pools subtokens per word") {
  auto encoder = std::make_shared<TransformerEncoder>(tiny_config(), WordpieceVocab::basic_latin(), 3);
  ContextualProvider provider(std::static_pointer_cast<const TransformerEncoder>(encoder));
  CHECK(provider.backend() == ContextualBackend::pretrained);
  CHECK(provider.dim() == 8);
  Eigen::MatrixXd rows = provider.encode({"sad", "story"});
  CHECK(rows.rows() == 2);
  CHECK(rows.cols() == 8);
}

TEST_CASE("encoder gradients match central finite differences") {
  auto encoder = TransformerEncoder(tiny_config(), WordpieceVocab::basic_latin(), 21);

  // [CLS] a b [SEP] plus one padded position
  std::vector<int> ids = {WordpieceVocab::kCls, encoder.vocab().id_of("a"), encoder.vocab().id_of("b"),
                          WordpieceVocab::kSep, WordpieceVocab::kPad};
  std::vector<uint8_t> mask = {1, 1, 1, 1, 0};

  // loss = 0.5 * sum of squared outputs over real positions
  auto loss_of = [&]() {
    Eigen::MatrixXd out = encoder.forward(ids, mask);
    double loss = 0.0;
    for (Eigen::Index t = 0; t < out.rows(); ++t) {
      if (mask[static_cast<size_t>(t)]) loss += 0.5 * out.row(t).squaredNorm();
    }
    return loss;
  };

  TransformerEncoder::Cache cache;
  Eigen::MatrixXd out = encoder.forward(ids, mask, &cache);
  Eigen::MatrixXd d_out = out;
  d_out.row(4).setZero();  // padded position contributes nothing
  encoder.zero_grads();
  encoder.backward(cache, d_out);

  const auto params = encoder.param_refs();
  const auto grads = encoder.grad_refs();
  Rng rng(123);
  const double h = 1e-5;
  for (size_t p = 0; p < params.size(); ++p) {
    Eigen::MatrixXd& tensor = *params[p].tensor;
    const Eigen::MatrixXd& grad = *grads[p].tensor;
    for (int probe = 0; probe < 3; ++probe) {
      const Eigen::Index idx = static_cast<Eigen::Index>(rng.index(static_cast<size_t>(tensor.size())));
      const double saved = tensor.data()[idx];
      tensor.data()[idx] = saved + h;
      const double up = loss_of();
      tensor.data()[idx] = saved - h;
      const double down = loss_of();
      tensor.data()[idx] = saved;
      const double fd = (up - down) / (2 * h);
      const double analytic = grad.data()[idx];
      // the 1e-3 floor keeps FD roundoff noise on near-zero gradients from
      // dominating the ratio
      const double denom = std::max({std::abs(fd), std::abs(analytic), 1e-3});
      CAPTURE(params[p].name);
      CAPTURE(idx);
      CHECK(std::abs(fd - analytic) / denom < 1e-5);
    }
  }
}
