#pragma once

#include <stdexcept>
#include <string>

namespace gase {

// One error code per failure mode named in the public contracts. Callers that
// care about the mode switch on code(); everyone else treats it as a
// std::runtime_error.
enum class errc {
  missing_placeholder,
  empty_input,
  unknown_template,
  unknown_key,
  auth,
  rate_limited,
  transport,
  malformed_response,
  empty_batch,
  dim_mismatch,
  degenerate_input,
  no_positives,
  no_relevant,
  parse,
  duplicate_id,
  dangling_reference,
  single_class,
  empty_file,
  inconsistent_dim,
  storage,
  config,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::missing_placeholder: return "missing_placeholder";
    case errc::empty_input: return "empty_input";
    case errc::unknown_template: return "unknown_template";
    case errc::unknown_key: return "unknown_key";
    case errc::auth: return "auth";
    case errc::rate_limited: return "rate_limited";
    case errc::transport: return "transport";
    case errc::malformed_response: return "malformed_response";
    case errc::empty_batch: return "empty_batch";
    case errc::dim_mismatch: return "dim_mismatch";
    case errc::degenerate_input: return "degenerate_input";
    case errc::no_positives: return "no_positives";
    case errc::no_relevant: return "no_relevant";
    case errc::parse: return "parse";
    case errc::duplicate_id: return "duplicate_id";
    case errc::dangling_reference: return "dangling_reference";
    case errc::single_class: return "single_class";
    case errc::empty_file: return "empty_file";
    case errc::inconsistent_dim: return "inconsistent_dim";
    case errc::storage: return "storage";
    case errc::config: return "config";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
  throw error(code, message);
}

}  // namespace gase
