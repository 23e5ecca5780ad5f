#pragma once

#include <cmath>

#include "psdsketch/hermitian.hpp"

namespace psdsketch::detail {

// Internal low-rank carrier: M = B B^dag, or M = I - B B^dag when
// `complement` is set. Keeps every pipeline quantity (inner products, traces,
// operator norms) at cost O(dim * r^2) instead of O(dim^3).
struct FactoredPsd {
    Matrix B;  // dim x r
    bool complement = false;

    int dim() const { return static_cast<int>(B.rows()); }
    int rank_cols() const { return static_cast<int>(B.cols()); }

    double trace() const {
        const double g = B.squaredNorm();
        return complement ? static_cast<double>(dim()) - g : g;
    }
};

inline double factored_inner(const FactoredPsd& a, const FactoredPsd& b) {
    const double cross = (a.B.adjoint() * b.B).squaredNorm();
    if (!a.complement && !b.complement) return cross;
    if (a.complement && !b.complement) return b.B.squaredNorm() - cross;
    if (!a.complement && b.complement) return a.B.squaredNorm() - cross;
    return static_cast<double>(a.dim()) - a.B.squaredNorm() - b.B.squaredNorm() + cross;
}

// Largest eigenvalue of B B^dag via the r x r Gram matrix.
inline double factored_lambda_max(const Matrix& B) {
    if (B.cols() == 0) return 0.0;
    const Matrix g = B.adjoint() * B;
    return eigh_values(HermitianMatrix::unchecked(0.5 * (g + g.adjoint()))).maxCoeff();
}

inline Matrix materialize(const FactoredPsd& f) {
    Matrix m = f.B * f.B.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
    if (f.complement) m = Matrix::Identity(f.dim(), f.dim()) - m;
    return m;
}

// Rank factor of a psd matrix: columns sqrt(lambda_k) psi_k for eigenvalues
// above a tiny relative cutoff (numerical zeros only, so the factor
// reproduces H to working precision).
inline Matrix psd_factor(const HermitianMatrix& h, double rel_cutoff = 1e-14) {
    const EigenDecomposition ed = eigh(h);
    const int n = h.dim();
    if (n == 0) return Matrix(0, 0);
    const double top = ed.eigenvalues.size() ? ed.eigenvalues(0) : 0.0;
    const double cutoff = rel_cutoff * std::max(top, 1e-300);
    int r = 0;
    while (r < n && ed.eigenvalues(r) > cutoff) ++r;
    Matrix b(n, r);
    for (int k = 0; k < r; ++k)
        b.col(k) = ed.eigenvectors.col(k) * std::sqrt(ed.eigenvalues(k));
    return b;
}

}  // namespace psdsketch::detail
