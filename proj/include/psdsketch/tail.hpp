#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "psdsketch/hermitian.hpp"

namespace psdsketch {

/// Spectral-tail certificate for a descending spectrum s[0] >= s[1] >= ...:
/// s[j* + j] <= e^{-b j} for every j >= 1 inside the spectrum. The constraint
/// leaves s[0..j*] untouched.
struct TailProfile {
    std::int64_t j_star = 0;
    double b = tol::b_max;

    bool holds_for(const RealVector& spectrum) const {
        if (!(b > 0.0)) return false;
        for (Eigen::Index idx = j_star + 1; idx < spectrum.size(); ++idx) {
            const double j = static_cast<double>(idx - j_star);
            if (spectrum(idx) > std::exp(-b * j)) return false;
        }
        return true;
    }
};

namespace detail {

inline void require_descending_nonneg(const RealVector& s) {
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) < -tol::psd)
            throw PreconditionError("tail_fit: spectrum has a negative entry");
        if (i > 0 && s(i) > s(i - 1) + 1e-12)
            throw PreconditionError("tail_fit: spectrum not sorted descending");
    }
}

}  // namespace detail

/// Fits (j*, b) to a descending spectrum. With a hint, b is the minimum over
/// j >= 1 of (-ln s[j*+j]) / j across nonzero tail entries; entries >= 1 in
/// the tail make the fit impossible. Without a hint, j* is the last index
/// holding an entry >= 1 (0 when all entries are below 1). An all-zero tail
/// yields the b_max sentinel. The stored invariant holds exactly on the input.
inline TailProfile tail_fit(const RealVector& spectrum,
                            std::optional<std::int64_t> j_star_hint = std::nullopt) {
    const Eigen::Index n = spectrum.size();
    if (n == 0) throw PreconditionError("tail_fit: empty spectrum");
    detail::require_descending_nonneg(spectrum);

    std::int64_t j_star;
    if (j_star_hint) {
        j_star = *j_star_hint;
        if (j_star < 0) throw PreconditionError("tail_fit: j_star hint must be >= 0");
    } else {
        j_star = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (spectrum(i) >= 1.0) j_star = i;
        if (j_star == n - 1 && spectrum(n - 1) >= 1.0)
            throw NoValidTailError("tail_fit: no valid (j*, b): spectrum never drops below 1");
    }

    double b = tol::b_max;
    bool any = false;
    for (Eigen::Index idx = j_star + 1; idx < n; ++idx) {
        const double v = spectrum(idx);
        if (v <= 0.0) continue;
        if (v >= 1.0)
            throw NoValidTailError("tail_fit: no valid (j*, b): entry " + std::to_string(idx) +
                                   " is >= 1 beyond j* = " + std::to_string(j_star));
        const double j = static_cast<double>(idx - j_star);
        b = std::min(b, -std::log(v) / j);
        any = true;
    }
    (void)any;

    TailProfile profile{j_star, b};
    // The min-ratio b can overshoot by an ulp through the exp/log round trip;
    // nudge down until the invariant scan passes.
    for (int guard = 0; guard < 64 && !profile.holds_for(spectrum); ++guard)
        profile.b = std::nextafter(profile.b, 0.0);
    if (!profile.holds_for(spectrum))
        throw NoValidTailError("tail_fit: fitted profile fails its own invariant");
    return profile;
}

/// The proof's block decomposition: E^(0) holds the top j*+r eigenpairs,
/// E^(i) the next r each. Diagnostic; blocks sum to E and are mutually
/// orthogonal.
inline std::vector<HermitianMatrix> block_split(const HermitianMatrix& e, std::int64_t j_star,
                                                std::int64_t r) {
    if (j_star < 0) throw PreconditionError("block_split: j_star must be >= 0");
    if (r < 1) throw PreconditionError("block_split: r must be >= 1");
    const EigenDecomposition ed = eigh(e);
    const int n = e.dim();
    const double top = n > 0 ? std::max(ed.eigenvalues(0), 0.0) : 0.0;
    const double cutoff = 1e-14 * std::max(top, 1.0);
    int rank = 0;
    while (rank < n && ed.eigenvalues(rank) > cutoff) ++rank;

    auto assemble = [&](int lo, int hi) {  // eigenpair indices [lo, hi)
        Matrix block = Matrix::Zero(n, n);
        for (int k = lo; k < hi; ++k)
            block += ed.eigenvalues(k) *
                     (ed.eigenvectors.col(k) * ed.eigenvectors.col(k).adjoint());
        return HermitianMatrix::unchecked(0.5 * (block + block.adjoint()));
    };

    std::vector<HermitianMatrix> blocks;
    const int head = static_cast<int>(std::min<std::int64_t>(j_star + r, rank));
    blocks.push_back(assemble(0, head));
    for (int lo = head; lo < rank; lo += static_cast<int>(r))
        blocks.push_back(assemble(lo, std::min(lo + static_cast<int>(r), rank)));
    return blocks;
}

}  // namespace psdsketch
