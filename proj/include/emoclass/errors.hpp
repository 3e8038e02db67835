#pragma once

#include <stdexcept>
#include <string>

namespace emoclass {

// Every failure the library reports carries one of these codes so callers
// (and tests) can dispatch on the condition instead of parsing messages.
enum class Errc {
  // corpus
  unknown_emotion,
  empty_label,
  missing_column,
  duplicate_id,
  malformed_row,
  label_parse,
  unlabeled_essay,
  invalid_weights,
  unknown_category,
  // embed
  dimension_mismatch,
  malformed_float,
  empty_file,
  empty_token,
  sequence_too_long,
  empty_provider_list,
  // model
  shape_mismatch,
  unlabeled_training,
  empty_corpus,
  backend_unavailable,
  vocabulary_mismatch,
  corrupt_artifact,
  version_mismatch,
  // metrics
  length_mismatch,
  empty_input,
  empty_leaderboard,
  // experiment / io
  io_failure,
  config_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message);
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& message);

}  // namespace emoclass
