#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pwsmooth {

// Base class for everything this library throws.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// --- expression parsing -----------------------------------------------------

class SyntaxError : public Error {
  public:
    SyntaxError(std::size_t offset, std::string expected, const std::string& what)
        : Error(what), offset(offset), expected(std::move(expected)) {}
    std::size_t offset;   // byte offset into the input string
    std::string expected; // description of what would have been accepted
};

class UnknownIdentifier : public Error {
  public:
    UnknownIdentifier(std::size_t offset, std::string name, const std::string& what)
        : Error(what), offset(offset), name(std::move(name)) {}
    std::size_t offset;
    std::string name;
};

// --- problem validation ------------------------------------------------------

enum class ValidationCode {
    InvalidDomain,
    UnorderedCuts,
    CutOutsideDomain,
    PartitionCountMismatch,
    NonFiniteAtMidpoint,
    NonPositiveSigma,
    InvalidExponent,
    InvalidParameter,
};

const char* to_string(ValidationCode code);

struct ValidationIssue {
    ValidationCode code;
    std::string message;
};

// Carries every violated invariant, not just the first one found.
class ValidationError : public Error {
  public:
    ValidationError(std::vector<ValidationIssue> issues, const std::string& what)
        : Error(what), issues(std::move(issues)) {}
    std::vector<ValidationIssue> issues;

    bool has(ValidationCode code) const {
        for (const auto& issue : issues)
            if (issue.code == code) return true;
        return false;
    }
};

// --- connectors ---------------------------------------------------------------

class DomainViolation : public Error {
  public:
    DomainViolation(double x, const std::string& what) : Error(what), x(x) {}
    double x;
};

class WrongKind : public Error {
  public:
    using Error::Error;
};

// --- quadrature ----------------------------------------------------------------

class NonFiniteSample : public Error {
  public:
    NonFiniteSample(double abscissa, const std::string& what) : Error(what), abscissa(abscissa) {}
    double abscissa;
};

// --- assembly -------------------------------------------------------------------

class ExactificationFailure : public Error {
  public:
    using Error::Error;
};

class SingularMatrix : public Error {
  public:
    using Error::Error;
};

class AssemblyError : public Error {
  public:
    using Error::Error;
};

// --- evaluation -----------------------------------------------------------------

class NonFiniteResult : public Error {
  public:
    NonFiniteResult(double x, int partition, double weight, const std::string& what)
        : Error(what), x(x), partition(partition), weight(weight) {}
    double x;
    int partition;
    double weight;
};

class NonPositiveScale : public Error {
  public:
    using Error::Error;
};

class NonFiniteState : public Error {
  public:
    NonFiniteState(double t, const std::string& what) : Error(what), t(t) {}
    double t;
};

// --- serialization ----------------------------------------------------------------

class SchemaVersionMismatch : public Error {
  public:
    using Error::Error;
};

class CorruptMatrix : public Error {
  public:
    using Error::Error;
};

class DocumentError : public Error { // malformed spec/artifact documents
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace pwsmooth
