#pragma once

#include <stdexcept>
#include <string>

namespace torusflux {

/// Error categories surfaced to the CLI: validation errors exit with
/// code 2, numeric failures (NaN, CFL) with code 3.
enum class ErrorKind {
    Validation,
    Numeric,
    Io,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& code() const { return code_; }

  private:
    ErrorKind kind_;
    std::string code_;
};

inline Error validation_error(const std::string& code, const std::string& what) {
    return Error(ErrorKind::Validation, code, what);
}

inline Error numeric_error(const std::string& code, const std::string& what) {
    return Error(ErrorKind::Numeric, code, what);
}

inline Error io_error(const std::string& code, const std::string& what) {
    return Error(ErrorKind::Io, code, what);
}

}  // namespace torusflux
