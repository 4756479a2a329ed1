#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ddbench {

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidGridError : Error {
    using Error::Error;
};

struct InvalidPartitionError : Error {
    using Error::Error;
};

// Factorization hit a pivot at or below the breakdown threshold.
struct SingularMatrixError : Error {
    SingularMatrixError(const std::string& what, int pivot, int subdomain = -1)
        : Error(what), pivot_index(pivot), subdomain(subdomain) {}
    int pivot_index;
    int subdomain;  // -1 when not raised from a subdomain solve
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

struct NonConvergenceError : Error {
    NonConvergenceError(const std::string& what, int iters, std::vector<double> history)
        : Error(what), iterations(iters), residual_history(std::move(history)) {}
    int iterations;
    std::vector<double> residual_history;  // 2-norms, one entry per iteration incl. start
};

struct InvalidTimingError : Error {
    using Error::Error;
};

struct MissingGoalError : Error {
    using Error::Error;
};

struct InconsistentGoalError : Error {
    using Error::Error;
};

struct InsufficientDataError : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& what, int line) : Error(what), line(line) {}
    int line;
};

struct MissingMonolithicError : Error {
    using Error::Error;
};

struct EmptyReportError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace ddbench
