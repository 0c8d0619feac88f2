#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace evpos {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument values (negative sequence entries, r <= 1, bad grid).
class DomainError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// Operation not defined for this operator variant or norm.
class UnsupportedModel : public Error {
public:
    using Error::Error;
};

/// Iterative numerical routine failed to meet its contract.
class SolverFailure : public Error {
public:
    using Error::Error;
};

class SingularResolvent : public Error {
public:
    SingularResolvent(std::complex<double> lambda, const std::string& what)
        : Error(what), lambda_(lambda) {}
    [[nodiscard]] std::complex<double> lambda() const noexcept { return lambda_; }

private:
    std::complex<double> lambda_;
};

class NotAnEigenvalue : public Error {
public:
    using Error::Error;
};

class StrategyUnavailable : public Error {
public:
    using Error::Error;
};

/// Asymptotic notions need spr(T) > 0.
class NotClassifiable : public Error {
public:
    using Error::Error;
};

/// Malformed JSON descriptor; `where` names the offending field path.
class SchemaError : public Error {
public:
    SchemaError(std::string where, const std::string& what)
        : Error(where + ": " + what), where_(std::move(where)) {}
    [[nodiscard]] const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

}  // namespace evpos
