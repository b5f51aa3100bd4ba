#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gazecorr {

// Error families map onto CLI exit codes: Config -> 2, Format -> 3, Numeric -> 4.
enum class ErrorKind { Config, Format, Numeric };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Bad arguments, unusable configuration, missing input files.
class ConfigError : public Error {
public:
    explicit ConfigError(std::string message) : Error(ErrorKind::Config, std::move(message)) {}
};

// Malformed file contents; messages carry line numbers or byte offsets where known.
class FormatError : public Error {
public:
    explicit FormatError(std::string message) : Error(ErrorKind::Format, std::move(message)) {}
};

// Degenerate numerical situations: zero-norm vectors, constant sequences,
// underdetermined systems.
class NumericError : public Error {
public:
    explicit NumericError(std::string message) : Error(ErrorKind::Numeric, std::move(message)) {}
};

// A filtered pair dataset fell below the configured minimum. Callers may treat
// this as a reportable null result ("-" cell) rather than a failure.
class InsufficientPairsError : public Error {
public:
    InsufficientPairsError(std::size_t retained, std::size_t min_pairs)
        : Error(ErrorKind::Numeric,
                "only " + std::to_string(retained) + " word pairs resolvable in the space, need at least " +
                    std::to_string(min_pairs)),
          retained_(retained),
          min_pairs_(min_pairs) {}

    std::size_t retained() const noexcept { return retained_; }
    std::size_t min_pairs() const noexcept { return min_pairs_; }

private:
    std::size_t retained_;
    std::size_t min_pairs_;
};

} // namespace gazecorr
