#pragma once

#include <cstdint>

#include "psdsketch/model.hpp"
#include "psdsketch/rng.hpp"

namespace psdsketch {

namespace detail {

// Wishart-style psd matrix of the requested rank, unit trace.
inline HermitianMatrix random_unit_trace_psd(int dim, int rank, std::uint64_t stream) {
    Matrix v = rng::complex_gaussian(dim, rank, stream);
    Matrix w = v * v.adjoint();
    w /= w.trace().real();
    return HermitianMatrix::unchecked(std::move(w));
}

// Wishart-style psd matrix scaled to operator norm 1.
inline HermitianMatrix random_unit_norm_psd(int dim, int rank, std::uint64_t stream) {
    Matrix v = rng::complex_gaussian(dim, rank, stream);
    HermitianMatrix w = HermitianMatrix::unchecked(v * v.adjoint());
    const double top = op_norm(w);
    return HermitianMatrix::unchecked(w.matrix() / top);
}

}  // namespace detail

/// Deterministic random quantum model. States are normalized Wisharts of rank
/// `state_rank`; POVM elements z < Z are rank-`povm_rank` psd with operator
/// norm <= 1, and the last element is built by subtraction. If the subtraction
/// would be indefinite the z < Z elements are shrunk uniformly by the smallest
/// factor restoring psd-ness, so no rejection sampling is needed.
/// Rank 0 requests full rank.
inline QuantumModel random_model(int X, int Y, int Z, int D, int state_rank, int povm_rank,
                                 std::uint64_t seed) {
    if (X < 1 || Y < 1 || Z < 1 || D < 1)
        throw PreconditionError("random_model: shape must be positive");
    if (state_rank == 0) state_rank = D;
    if (povm_rank == 0) povm_rank = D;
    if (state_rank < 1 || state_rank > D)
        throw InfeasibleRankError("random_model: state rank " + std::to_string(state_rank) +
                                  " not in [1, " + std::to_string(D) + "]");
    if (povm_rank < 1 || povm_rank > D)
        throw InfeasibleRankError("random_model: povm rank " + std::to_string(povm_rank) +
                                  " not in [1, " + std::to_string(D) + "]");

    QuantumModel m;
    m.dim = D;
    for (int x = 0; x < X; ++x)
        m.states.push_back(
            detail::random_unit_trace_psd(D, state_rank, rng::derive_stream(seed, rng::kDomainState, x)));

    m.povms.resize(Y);
    for (int y = 0; y < Y; ++y) {
        std::vector<HermitianMatrix> elems;
        Matrix sum = Matrix::Zero(D, D);
        for (int z = 0; z + 1 < Z; ++z) {
            HermitianMatrix e = detail::random_unit_norm_psd(
                D, povm_rank, rng::derive_stream(seed, rng::kDomainPovm, static_cast<std::uint64_t>(y) * Z + z));
            sum += e.matrix();
            elems.push_back(std::move(e));
        }
        double shrink = 1.0;
        if (Z > 1) {
            const double top = op_norm(HermitianMatrix::unchecked(sum));
            if (top > 1.0) shrink = 1.0 / top;
        }
        m.povms[y].reserve(Z);
        Matrix shrunk_sum = Matrix::Zero(D, D);
        for (auto& e : elems) {
            Matrix s = e.matrix() * shrink;
            shrunk_sum += s;
            m.povms[y].push_back(HermitianMatrix::unchecked(std::move(s)));
        }
        m.povms[y].push_back(HermitianMatrix::unchecked(Matrix::Identity(D, D) - shrunk_sum));
    }
    return m;
}

/// Deterministic random psd factorization; all matrices unit trace of the
/// requested rank (0 = full).
inline PsdFactorization random_psd_factorization(int N, int M, int D, int rank,
                                                 std::uint64_t seed) {
    if (N < 1 || M < 1 || D < 1)
        throw PreconditionError("random_psd_factorization: shape must be positive");
    if (rank == 0) rank = D;
    if (rank < 1 || rank > D)
        throw InfeasibleRankError("random_psd_factorization: rank " + std::to_string(rank) +
                                  " not in [1, " + std::to_string(D) + "]");
    PsdFactorization f;
    f.dim = D;
    for (int n = 0; n < N; ++n)
        f.left.push_back(
            detail::random_unit_trace_psd(D, rank, rng::derive_stream(seed, rng::kDomainState, n)));
    for (int mi = 0; mi < M; ++mi)
        f.right.push_back(detail::random_unit_trace_psd(
            D, rank, rng::derive_stream(seed, rng::kDomainPovm, mi)));
    return f;
}

}  // namespace psdsketch
