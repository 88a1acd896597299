#ifndef PROVKIT_ERRORS_HPP
#define PROVKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace provkit {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// File or directory could not be read/written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Failure talking to (or interpreting) a paraphrase provider.
class ProviderError : public Error {
 public:
  enum class Kind {
    Auth,             // rejected credentials
    RateLimit,        // retries exhausted on throttling
    EmptyCompletion,  // provider returned no text
    OverLength,       // input exceeded the provider's context window
    Transport,        // connection/timeout failures after retries
    BadResponse,      // unparsable or unexpected payload
  };

  ProviderError(Kind kind, const std::string& message)
      : Error(message), kind_(kind) {}

  Kind kind() const { return kind_; }

  static const char* kind_name(Kind k) {
    switch (k) {
      case Kind::Auth: return "auth";
      case Kind::RateLimit: return "rate_limit";
      case Kind::EmptyCompletion: return "empty_completion";
      case Kind::OverLength: return "over_length";
      case Kind::Transport: return "transport";
      case Kind::BadResponse: return "bad_response";
    }
    return "unknown";
  }

 private:
  Kind kind_;
};

}  // namespace provkit

#endif  // PROVKIT_ERRORS_HPP
