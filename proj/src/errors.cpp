#include "emoclass/errors.hpp"

namespace emoclass {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::unknown_emotion: return "unknown_emotion";
    case Errc::empty_label: return "empty_label";
    case Errc::missing_column: return "missing_column";
    case Errc::duplicate_id: return "duplicate_id";
    case Errc::malformed_row: return "malformed_row";
    case Errc::label_parse: return "label_parse";
    case Errc::unlabeled_essay: return "unlabeled_essay";
    case Errc::invalid_weights: return "invalid_weights";
    case Errc::unknown_category: return "unknown_category";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::malformed_float: return "malformed_float";
    case Errc::empty_file: return "empty_file";
    case Errc::empty_token: return "empty_token";
    case Errc::sequence_too_long: return "sequence_too_long";
    case Errc::empty_provider_list: return "empty_provider_list";
    case Errc::shape_mismatch: return "shape_mismatch";
    case Errc::unlabeled_training: return "unlabeled_training";
    case Errc::empty_corpus: return "empty_corpus";
    case Errc::backend_unavailable: return "backend_unavailable";
    case Errc::vocabulary_mismatch: return "vocabulary_mismatch";
    case Errc::corrupt_artifact: return "corrupt_artifact";
    case Errc::version_mismatch: return "version_mismatch";
    case Errc::length_mismatch: return "length_mismatch";
    case Errc::empty_input: return "empty_input";
    case Errc::empty_leaderboard: return "empty_leaderboard";
    case Errc::io_failure: return "io_failure";
    case Errc::config_error: return "config_error";
  }
  return "unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

}  // namespace emoclass
