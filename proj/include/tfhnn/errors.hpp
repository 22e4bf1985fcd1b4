#pragma once

#include <stdexcept>
#include <string>

namespace tfhnn {

// Base for every error raised by the library. Callers that only care about
// "something went wrong with the data" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class BoundsError : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
class DimensionError : public Error { using Error::Error; };
class ResourceError : public Error { using Error::Error; };
class ContractViolation : public Error { using Error::Error; };
class SamplingError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
class IoError : public Error { using Error::Error; };

class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace tfhnn
