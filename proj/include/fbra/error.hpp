#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fbra {

enum class ErrorKind {
    InvalidArgument,
    DegenerateParameter,
    Unstable,
    NoConvergence,
    SingularBlock,
    SingularSystem,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Single exception type for the library; `kind()` tells callers which
/// contract was violated (the CLI maps kinds onto exit codes).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

}  // namespace fbra
