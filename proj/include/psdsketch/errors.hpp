#pragma once

#include <stdexcept>
#include <string>

namespace psdsketch {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatchError : Error {
    using Error::Error;
};

struct NotHermitianError : Error {
    using Error::Error;
};

struct EighConvergenceError : Error {
    EighConvergenceError(int dim, int info)
        : Error("eigensolver failed to converge (dim=" + std::to_string(dim) +
                ", info=" + std::to_string(info) + ")"),
          dim(dim), info(info) {}
    int dim;
    int info;
};

struct IndefiniteMatrixError : Error {
    IndefiniteMatrixError(double min_eigenvalue, double tolerance)
        : Error("genuinely indefinite: min eigenvalue " + std::to_string(min_eigenvalue) +
                " below -" + std::to_string(tolerance)),
          min_eigenvalue(min_eigenvalue), tolerance(tolerance) {}
    double min_eigenvalue;
    double tolerance;
};

struct InvalidModelError : Error {
    using Error::Error;
};

struct InfeasibleRankError : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct NoValidTailError : Error {
    using Error::Error;
};

struct RetriesExhaustedError : Error {
    RetriesExhaustedError(int attempts, double best_max_violation_ratio)
        : Error("retries exhausted after " + std::to_string(attempts) +
                " attempts; best attempt max violation ratio " +
                std::to_string(best_max_violation_ratio)),
          attempts(attempts),
          best_max_violation_ratio(best_max_violation_ratio) {}
    int attempts;
    double best_max_violation_ratio;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace psdsketch
