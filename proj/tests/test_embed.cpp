#include "emoclass/embed.hpp"

#include <filesystem>
#include <functional>

#include "doctest.h"
#include "emoclass/rng.hpp"
#include "emoclass/strutil.hpp"

using namespace emoclass;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an emoclass::Error");
  return Errc::io_failure;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

Vocabulary small_vocab() {
  return Vocabulary::build({{"a", "b"}, {"b", "c"}}, 1);
}

}  // namespace

TEST_CASE("build_vocabulary orders by frequency then alphabet") {
  Vocabulary vocab = small_vocab();
  REQUIRE(vocab.size() == 5);
  CHECK(vocab.index_of(Vocabulary::kPadToken) == 0);
  CHECK(vocab.index_of(Vocabulary::kOovToken) == 1);
  CHECK(vocab.index_of("b") == 2);
  CHECK(vocab.index_of("a") == 3);
  CHECK(vocab.index_of("c") == 4);

  CHECK(Vocabulary::build({}, 1).size() == 2);
  CHECK(Vocabulary::build({{"x"}}, 2).size() == 2);  // below min_count
}

TEST_CASE("encode_sequence pads, truncates, and maps OOV") {
  Vocabulary vocab = small_vocab();
  CHECK(encode_sequence({"b", "x"}, vocab, 4) == std::vector<int>{2, 1, 0, 0});
  CHECK(encode_sequence({}, vocab, 3) == std::vector<int>{0, 0, 0});

  std::vector<std::string> long_seq(200, "b");
  std::vector<int> ids = encode_sequence(long_seq, vocab, 74);
  CHECK(ids.size() == 74);
  for (int id : ids) CHECK(id == 2);  // first 74 tokens, no padding
}

TEST_CASE("encode_sequence output is always seq_len ids within range") {
  Vocabulary vocab = small_vocab();
  Rng rng(17);
  const std::vector<std::string> pool = {"a", "b", "c", "zz", "qq"};
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> tokens;
    const size_t n = rng.index(30);
    for (size_t t = 0; t < n; ++t) tokens.push_back(pool[rng.index(pool.size())]);
    const int seq_len = 1 + static_cast<int>(rng.index(20));
    const std::vector<int> ids = encode_sequence(tokens, vocab, seq_len);
    CHECK(ids.size() == static_cast<size_t>(seq_len));
    for (int id : ids) {
      CHECK(id >= 0);
      CHECK(id < static_cast<int>(vocab.size()));
    }
  }
}

TEST_CASE("vocabulary round-trips through its file format") {
  Vocabulary vocab = small_vocab();
  const std::string path = temp_path("emoclass_vocab.txt");
  vocab.save(path);
  Vocabulary loaded = Vocabulary::load(path);
  REQUIRE(loaded.size() == vocab.size());
  for (size_t i = 0; i < vocab.size(); ++i) CHECK(loaded.token_at(i) == vocab.token_at(i));

  write_text_file(path, "nope\n<oov>\n");
  CHECK(code_of([&] { Vocabulary::load(path); }) == Errc::corrupt_artifact);
}

TEST_CASE("load_static_vectors parses rows, header, and errors") {
  const std::string path = temp_path("emoclass_vectors.txt");
  write_text_file(path, "hello 1.0 2.0 3.0\nworld 0.5 -0.5 1e-3\n");
  StaticTable table = load_static_vectors(path);
  CHECK(table.dim() == 3);
  CHECK(table.size() == 2);
  CHECK(table.lookup("world")[2] == doctest::Approx(1e-3));

  write_text_file(path, "hello 1.0 2.0 3.0\nworld 0.5 -0.5\n");
  CHECK(code_of([&] { load_static_vectors(path); }) == Errc::dimension_mismatch);

  write_text_file(path, "hello 1.0 oops 3.0\n");
  CHECK(code_of([&] { load_static_vectors(path); }) == Errc::malformed_float);

  write_text_file(path, "");
  CHECK(code_of([&] { load_static_vectors(path); }) == Errc::empty_file);

  // count header is detected and skipped
  std::string with_header = "2 100\n";
  for (const std::string& token : {std::string("alpha"), std::string("beta")}) {
    with_header += token;
    for (int d = 0; d < 100; ++d) with_header += " 0.25";
    with_header += '\n';
  }
  write_text_file(path, with_header);
  StaticTable wide = load_static_vectors(path);
  CHECK(wide.dim() == 100);
  CHECK(wide.size() == 2);
}

TEST_CASE("lookup_static returns stored rows and zero for unknown") {
  StaticTable table(3);
  table.insert("known", Eigen::Vector3d(1.0, 2.0, 3.0));
  CHECK(lookup_static(table, "known") == Eigen::Vector3d(1.0, 2.0, 3.0));
  CHECK(lookup_static(table, "unknown") == Eigen::Vector3d(0.0, 0.0, 0.0));
  CHECK(lookup_static(table, "known") == lookup_static(table, "known"));
}

TEST_CASE("static vectors survive a save/load round trip") {
  std::vector<std::string> tokens = {"one", "two", "three"};
  StaticTable table = synthetic_static_table(tokens, 7, 99);
  const std::string path = temp_path("emoclass_synth_vectors.txt");
  save_static_vectors(table, tokens, path);
  StaticTable loaded = load_static_vectors(path);
  REQUIRE(loaded.dim() == 7);
  for (const std::string& token : tokens) {
    CHECK((loaded.lookup(token) - table.lookup(token)).cwiseAbs().maxCoeff() == 0.0);
  }

  StaticTable again = synthetic_static_table(tokens, 7, 99);
  for (const std::string& token : tokens) {
    CHECK(again.lookup(token) == table.lookup(token));
  }
}

TEST_CASE("subword vectors average the n-gram and whole-token buckets") {
  SubwordProvider provider(16, 3, 3, 1 << 12, 42);

  // oracle: explicit gram enumeration for "cat"
  const std::vector<std::string> grams = {"<ca", "cat", "at>", "<cat>"};
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(16);
  for (const std::string& gram : grams) expected += provider.bucket_vector(provider.bucket_of(gram));
  expected /= static_cast<double>(grams.size());
  CHECK((subword_vector(provider, "cat") - expected).cwiseAbs().maxCoeff() < 1e-15);

  // single character: only the whole-token gram exists
  const Eigen::VectorXd a = subword_vector(provider, "a");
  CHECK((a - provider.bucket_vector(provider.bucket_of("<a>"))).cwiseAbs().maxCoeff() < 1e-15);

  // unseen tokens always get a finite nonzero vector
  const Eigen::VectorXd unseen = subword_vector(provider, "qzvxkjw");
  CHECK(unseen.allFinite());
  CHECK(unseen.cwiseAbs().maxCoeff() > 0.0);

  CHECK(code_of([&] { subword_vector(provider, ""); }) == Errc::empty_token);
}

TEST_CASE("subword provider is a pure function of config and token") {
  SubwordProvider a(32, 3, 6, 1 << 16, 7);
  SubwordProvider b(32, 3, 6, 1 << 16, 7);
  SubwordProvider other_seed(32, 3, 6, 1 << 16, 8);
  CHECK(subword_vector(a, "emotion") == subword_vector(b, "emotion"));
  CHECK(subword_vector(a, "emotion") != subword_vector(other_seed, "emotion"));
}

TEST_CASE("stub contextual encoding depends on neighbors and position parity") {
  ContextualProvider stub(768, 5);
  Eigen::MatrixXd river = stub.encode({"bank", "river"});
  Eigen::MatrixXd loan = stub.encode({"bank", "loan"});
  CHECK(river.rows() == 2);
  CHECK(river.cols() == 768);
  CHECK((river.row(0) - loan.row(0)).cwiseAbs().maxCoeff() > 0.0);

  CHECK(stub.encode({"bank", "river"}) == river);  // deterministic

  Eigen::MatrixXd five = stub.encode({"a", "b", "c", "d", "e"});
  CHECK(five.rows() == 5);
  CHECK(five.cols() == 768);

  CHECK(code_of([&] { stub.encode({}); }) == Errc::empty_input);
  ContextualProvider tiny(8, 5, 2);
  CHECK(code_of([&] { tiny.encode({"a", "b", "c"}); }) == Errc::sequence_too_long);
}

TEST_CASE("stacked providers concatenate in order with additive dimension") {
  auto static100 = std::make_shared<StaticProvider>(synthetic_static_table({"tok"}, 100, 1));
  auto subword300 = std::make_shared<SubwordProvider>(300, 3, 6, 1 << 16, 2);
  auto ctx768 = std::make_shared<ContextualProvider>(768, 3);

  CHECK(stack_providers({static100, subword300}).dim() == 400);
  CHECK(stack_providers({static100, ctx768}).dim() == 868);
  CHECK(stack_providers({subword300, ctx768}).dim() == 1068);
  CHECK(stack_providers({static100, subword300, ctx768}).dim() == 1168);

  StackedProvider stack = stack_providers({static100, subword300});
  Eigen::VectorXd stacked = stack.token_vector("tok");
  REQUIRE(stacked.size() == 400);
  CHECK(stacked.head(100) == static100->token_vector("tok"));
  CHECK(stacked.tail(300) == subword300->token_vector("tok"));

  CHECK(code_of([&] { stack_providers({static100}); }) == Errc::empty_provider_list);
  CHECK(code_of([] { stack_providers({}); }) == Errc::empty_provider_list);
}

TEST_CASE("build_embedding_matrix aligns provider rows to the vocabulary") {
  Vocabulary vocab = small_vocab();  // pad, oov, b, a, c
  StaticTable table(100);
  Rng rng(3);
  for (const std::string& token : {std::string("a"), std::string("b")}) {
    Eigen::VectorXd v(100);
    for (int d = 0; d < 100; ++d) v[d] = rng.uniform(-1, 1);
    table.insert(token, v);
  }
  auto static_p = std::make_shared<StaticProvider>(std::move(table));
  EmbeddingMatrix m = build_embedding_matrix(vocab, *static_p);
  CHECK(m.size() == 5);
  CHECK(m.dim() == 100);
  CHECK(m.rows.row(0).cwiseAbs().maxCoeff() == 0.0);                    // PAD
  CHECK(m.rows.row(1).cwiseAbs().maxCoeff() == 0.0);                    // OOV in a static table
  CHECK(m.rows.row(4).cwiseAbs().maxCoeff() == 0.0);                    // "c" not in table
  CHECK(m.rows.row(3) == static_p->token_vector("a").transpose());

  auto subword = std::make_shared<SubwordProvider>(300, 3, 6, 1 << 16, 9);
  StackedProvider stack = stack_providers({static_p, subword});
  EmbeddingMatrix stacked = build_embedding_matrix(vocab, stack);
  CHECK(stacked.size() == 5);
  CHECK(stacked.dim() == 400);
  CHECK(stacked.rows.row(0).cwiseAbs().maxCoeff() == 0.0);  // PAD row stays zero
  // "c" is absent from the static table: static slice zero, subword nonzero
  CHECK(stacked.rows.row(4).head(100).cwiseAbs().maxCoeff() == 0.0);
  CHECK(stacked.rows.row(4).tail(300).cwiseAbs().maxCoeff() > 0.0);
  // rows equal direct provider calls
  for (size_t i = 1; i < vocab.size(); ++i) {
    CHECK(stacked.rows.row(static_cast<Eigen::Index>(i)) ==
          stack.token_vector(vocab.token_at(i)).transpose());
  }
}
