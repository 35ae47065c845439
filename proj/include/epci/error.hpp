#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace epci {

enum class ErrorKind {
    domain,             // argument outside the mathematical domain
    validation,         // malformed or inconsistent input
    insufficient_data,  // n too small for the requested fit
    singular_design,    // rank-deficient covariates
    weight_matrix,      // V not symmetric positive definite
    degenerate_fit,     // sigma_hat == 0, pivotal quantity undefined
    numeric             // series/solver failed to converge
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// CLI exit status for an error kind: 2 input, 3 degenerate fit, 4 numeric.
int exit_code(ErrorKind kind) noexcept;

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace epci
