#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace parsvm {

/// Base class of every exception thrown by the library.
class error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (data files, model files).
class parse_error : public error {
  public:
    using error::error;
};

/// A documented precondition of an operation does not hold.
class precondition_error : public error {
  public:
    using error::error;
};

/// Vector or matrix shapes disagree.
class dimension_error : public error {
  public:
    dimension_error(const std::string &what, std::size_t expected, std::size_t actual);

    [[nodiscard]] std::size_t expected() const noexcept { return expected_; }
    [[nodiscard]] std::size_t actual() const noexcept { return actual_; }

  private:
    std::size_t expected_;
    std::size_t actual_;
};

/// Materializing a Gram matrix would exceed the configured entry cap.
class gram_cap_error : public error {
  public:
    using error::error;
};

/// A model file carries a format version this build cannot read.
class unsupported_version_error : public error {
  public:
    using error::error;
};

}  // namespace parsvm
