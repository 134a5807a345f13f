#ifndef STORVAL_ERRORS_HPP
#define STORVAL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace storval {

// Invalid parameters or malformed inputs (bad horizon, ragged traces, ...).
class InvalidArgument : public std::invalid_argument {
public:
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// Market data violates a modelling assumption (p > m_alpha, degenerate gamma).
class AssumptionViolation : public std::domain_error {
public:
    explicit AssumptionViolation(const std::string& what) : std::domain_error(what) {}
};

// An operation was called outside its stated precondition.
class PreconditionError : public std::logic_error {
public:
    explicit PreconditionError(const std::string& what) : std::logic_error(what) {}
};

// A computed result failed a property it is required to satisfy.
class NumericalValidationError : public std::runtime_error {
public:
    explicit NumericalValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Trace file ingestion failure; row is the 1-based line number in the file.
class TraceFormatError : public InvalidArgument {
public:
    TraceFormatError(std::size_t row, const std::string& what);
    std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

}  // namespace storval

#endif  // STORVAL_ERRORS_HPP
