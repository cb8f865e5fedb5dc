#pragma once

#include <stdexcept>
#include <string>

namespace ncx2 {

/// Invalid parameters or evaluation point.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The density is unbounded at x = 0 (k < 2).
class DivergenceError : public DomainError {
public:
    using DomainError::DomainError;
};

/// Raised by the mode solver; carries a machine-readable kind for callers that
/// report failures as data (bench, cli).
class SolverError : public std::runtime_error {
public:
    enum class Kind { FailedToBracket, CertificationFailed };

    SolverError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

}  // namespace ncx2
