#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Dense>

#ifndef lapack_complex_float
#define lapack_complex_float std::complex<float>
#endif
#ifndef lapack_complex_double
#define lapack_complex_double std::complex<double>
#endif
#include <lapacke.h>

#include "psdsketch/errors.hpp"
#include "psdsketch/tolerances.hpp"

namespace psdsketch {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Dense complex square matrix constrained to be Hermitian at construction.
/// Inputs whose asymmetry exceeds tol::herm relative to the largest entry are
/// rejected rather than symmetrized.
class HermitianMatrix {
public:
    explicit HermitianMatrix(Matrix m) : m_(std::move(m)) {
        if (m_.rows() != m_.cols())
            throw DimensionMismatchError("HermitianMatrix requires a square matrix");
        const double scale = m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff();
        const double dev = m_.size() == 0 ? 0.0 : (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
        if (dev > tol::herm * scale)
            throw NotHermitianError("matrix is not Hermitian: max |H - H^dag| = " +
                                    std::to_string(dev));
    }

    // For matrices Hermitian by construction (congruences, diagonal builds).
    static HermitianMatrix unchecked(Matrix m) { return HermitianMatrix(std::move(m), Unchecked{}); }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Matrix& matrix() const { return m_; }
    double trace() const { return m_.trace().real(); }

private:
    struct Unchecked {};
    HermitianMatrix(Matrix m, Unchecked) : m_(std::move(m)) {}
    Matrix m_;
};

/// Eigenvalues sorted descending, eigenvector columns in matching order.
struct EigenDecomposition {
    RealVector eigenvalues;
    Matrix eigenvectors;

    Matrix reconstruct() const {
        return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.adjoint();
    }
};

namespace detail {

inline RealVector eigh_lapack(Matrix& a, bool vectors) {
    const int n = static_cast<int>(a.rows());
    RealVector w(n);
    if (n == 0) return w;
    const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, vectors ? 'V' : 'N', 'L', n,
                                    a.data(), n, w.data());
    if (info != 0) throw EighConvergenceError(n, info);
    return w;
}

}  // namespace detail

inline EigenDecomposition eigh(const HermitianMatrix& h) {
    Matrix a = h.matrix();
    RealVector w = detail::eigh_lapack(a, true);
    // LAPACK orders ascending; flip to descending.
    return EigenDecomposition{w.reverse(), a.rowwise().reverse()};
}

/// Eigenvalues only, descending.
inline RealVector eigh_values(const HermitianMatrix& h) {
    Matrix a = h.matrix();
    RealVector w = detail::eigh_lapack(a, false);
    return w.reverse();
}

/// Re tr(AB). For Hermitian A, B the trace is real up to roundoff.
inline double trace_inner(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatchError("trace_inner: dimension mismatch " +
                                     std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
    // tr(AB) = sum_{jk} A_{jk} B_{kj}
    return a.matrix().cwiseProduct(b.matrix().transpose()).sum().real();
}

/// Operator norm = max |eigenvalue|.
inline double op_norm(const HermitianMatrix& h) {
    if (h.dim() == 0) return 0.0;
    const RealVector w = eigh_values(h);
    return std::max(std::abs(w(0)), std::abs(w(w.size() - 1)));
}

/// Trace norm = sum of |eigenvalues|.
inline double trace_norm(const HermitianMatrix& h) {
    if (h.dim() == 0) return 0.0;
    return eigh_values(h).cwiseAbs().sum();
}

/// Clips eigenvalues in [-tol, 0) to zero. Fails on eigenvalues below -tol:
/// genuinely indefinite input is an error, not something to repair silently.
inline HermitianMatrix psd_project(const HermitianMatrix& h, double tolerance) {
    const EigenDecomposition ed = eigh(h);
    const double min_ev = ed.eigenvalues.size() == 0 ? 0.0 : ed.eigenvalues(ed.eigenvalues.size() - 1);
    if (min_ev >= 0.0) return h;
    if (min_ev < -tolerance) throw IndefiniteMatrixError(min_ev, tolerance);
    RealVector clipped = ed.eigenvalues.cwiseMax(0.0);
    return HermitianMatrix::unchecked(ed.eigenvectors * clipped.asDiagonal() *
                                      ed.eigenvectors.adjoint());
}

/// Count of eigenvalues above rel_tol times the largest; zero matrix has rank 0.
inline int numerical_rank(const HermitianMatrix& h, double rel_tol = tol::rank_rel) {
    if (h.dim() == 0) return 0;
    const RealVector w = eigh_values(h);
    const double max_ev = w(0);
    if (max_ev <= 0.0) return 0;
    const double threshold = rel_tol * max_ev;
    int rank = 0;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w(i) > threshold) ++rank;
    return rank;
}

}  // namespace psdsketch
