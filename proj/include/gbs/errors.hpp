#pragma once

#include <stdexcept>
#include <string>

namespace gbs {

/// Thrown when an operation's input violates one of its preconditions.
/// `code()` is a short machine-readable tag such as "not-collapsible".
class PreconditionError : public std::invalid_argument {
public:
    PreconditionError(std::string code, const std::string& message)
        : std::invalid_argument(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

/// Thrown when an internal consistency check fails. Seeing one is a bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace gbs
