#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "psdsketch/hermitian.hpp"
#include "psdsketch/rng.hpp"

namespace psdsketch {

/// The d x D complex Gaussian sketch Pi = G / sqrt(2d), G_{jk} = S + iT with
/// S, T iid standard normal. Normalized so E[Pi] = 0 and E[Pi^dag Pi] = I_D.
/// Re-sampling with the stored seed reproduces the entries bitwise.
struct ProjectionMatrix {
    int d = 0;
    int D = 0;
    Matrix entries;
    std::uint64_t seed = 0;
};

inline ProjectionMatrix sample_projection(int d, int D, std::uint64_t seed) {
    if (d < 1 || D < 1) throw PreconditionError("sample_projection: d, D must be >= 1");
    const std::uint64_t stream = rng::derive_stream(seed, rng::kDomainProjection, 0);
    Matrix g = rng::complex_gaussian(d, D, stream);
    g /= std::sqrt(2.0 * d);
    return ProjectionMatrix{d, D, std::move(g), seed};
}

/// Projection seed for retry attempt k of a pipeline keyed by cfg_seed.
inline std::uint64_t attempt_seed(std::uint64_t cfg_seed, int attempt) {
    return rng::derive_stream(cfg_seed, rng::kDomainAttempt, attempt);
}

struct CompressionConfig {
    double epsilon = 0.5;
    std::uint64_t seed = 0;
    int max_retries = 64;

    CompressionConfig(double epsilon, std::uint64_t seed, int max_retries = 64)
        : epsilon(epsilon), seed(seed), max_retries(max_retries) {
        if (!(epsilon > 0.0 && epsilon <= 0.5))
            throw PreconditionError("CompressionConfig: epsilon must lie in (0, 1/2]");
        if (max_retries < 1)
            throw PreconditionError("CompressionConfig: max_retries must be >= 1");
    }
};

// ---------------------------------------------------------------------------
// JL check on the polar family
// ---------------------------------------------------------------------------

struct JlCondition {
    enum class Kind { Single, Plus, Minus, PlusI, MinusI };
    Kind kind;
    int i;
    int j;  // -1 for singles
    double input_norm;
    double sketched_norm;
    bool vacuous;  // input norm below tol::vacuous_norm
    bool pass;
};

struct JlReport {
    std::vector<JlCondition> conditions;
    int failures = 0;
    bool all_pass = true;
};

/// Evaluates all five polar-family conditions
/// (v_i; v_i +- v_j; v_i +- i v_j for i < j) against
/// ||Pi w|| in [(1-eps)||w||, (1+eps)||w||]. Zero vectors pass vacuously.
inline JlReport jl_check(const ProjectionMatrix& p, const std::vector<Vector>& vectors,
                         double epsilon) {
    const int S = static_cast<int>(vectors.size());
    for (const auto& v : vectors)
        if (v.size() != p.D)
            throw DimensionMismatchError("jl_check: vector dimension mismatch");

    // Sketch the base family once; polar combinations reduce to column sums.
    Matrix base(p.D, S);
    for (int i = 0; i < S; ++i) base.col(i) = vectors[i];
    const Matrix sketched = p.entries * base;

    JlReport report;
    const Complex iu(0.0, 1.0);
    auto add = [&](JlCondition::Kind kind, int i, int j, double in_norm, double out_norm) {
        JlCondition c{kind, i, j, in_norm, out_norm, false, true};
        if (in_norm < tol::vacuous_norm) {
            c.vacuous = true;
        } else {
            c.pass = out_norm >= (1.0 - epsilon) * in_norm && out_norm <= (1.0 + epsilon) * in_norm;
        }
        if (!c.pass) {
            ++report.failures;
            report.all_pass = false;
        }
        report.conditions.push_back(c);
    };

    for (int i = 0; i < S; ++i)
        add(JlCondition::Kind::Single, i, -1, vectors[i].norm(), sketched.col(i).norm());
    for (int i = 0; i < S; ++i)
        for (int j = i + 1; j < S; ++j) {
            add(JlCondition::Kind::Plus, i, j, (vectors[i] + vectors[j]).norm(),
                (sketched.col(i) + sketched.col(j)).norm());
            add(JlCondition::Kind::Minus, i, j, (vectors[i] - vectors[j]).norm(),
                (sketched.col(i) - sketched.col(j)).norm());
            add(JlCondition::Kind::PlusI, i, j, (vectors[i] + iu * vectors[j]).norm(),
                (sketched.col(i) + iu * sketched.col(j)).norm());
            add(JlCondition::Kind::MinusI, i, j, (vectors[i] - iu * vectors[j]).norm(),
                (sketched.col(i) - iu * sketched.col(j)).norm());
        }
    return report;
}

// ---------------------------------------------------------------------------
// Dimension formulas
// ---------------------------------------------------------------------------

namespace detail {

inline std::int64_t strictly_above(double v) {
    auto n = static_cast<std::int64_t>(std::floor(v)) + 1;
    while (static_cast<double>(n) <= v) ++n;
    return n;
}

inline std::int64_t at_least(double v) {
    return static_cast<std::int64_t>(std::ceil(v));
}

inline void require_epsilon_half(double eps) {
    if (!(eps > 0.0 && eps <= 0.5))
        throw PreconditionError("epsilon must lie in (0, 1/2]");
}

}  // namespace detail

/// Smallest d with d > (16/eps^2) ln(2JD).
inline std::int64_t dim_for_psd(double epsilon, std::int64_t J, std::int64_t D) {
    detail::require_epsilon_half(epsilon);
    if (J < 1 || D < 1) throw PreconditionError("dim_for_psd: J, D must be >= 1");
    return detail::strictly_above(16.0 / (epsilon * epsilon) *
                                  std::log(2.0 * static_cast<double>(J) * static_cast<double>(D)));
}

/// Smallest d with d > (32/eps^2) ln(4JD) and d > (32/eps^2) max_rank.
inline std::int64_t dim_for_model(double epsilon, std::int64_t J, std::int64_t D,
                                  std::int64_t max_rank) {
    detail::require_epsilon_half(epsilon);
    if (J < 1 || D < 1) throw PreconditionError("dim_for_model: J, D must be >= 1");
    if (max_rank < 0) throw PreconditionError("dim_for_model: max_rank must be >= 0");
    const double c = 32.0 / (epsilon * epsilon);
    const double a = c * std::log(4.0 * static_cast<double>(J) * static_cast<double>(D));
    const double b = c * static_cast<double>(max_rank);
    return std::max(detail::strictly_above(a), detail::strictly_above(b));
}

/// Smallest d with d >= (128/eps^2) ln(4JD) and
/// d >= (128/eps^2) (j* + (1/b) ln(8/eps)).
inline std::int64_t dim_for_tail(double epsilon, std::int64_t J, std::int64_t D,
                                 std::int64_t j_star, double b) {
    detail::require_epsilon_half(epsilon);
    if (J < 1 || D < 1) throw PreconditionError("dim_for_tail: J, D must be >= 1");
    if (j_star < 0) throw PreconditionError("dim_for_tail: j_star must be >= 0");
    if (!(b > 0.0)) throw PreconditionError("dim_for_tail: b must be positive");
    const double c = 128.0 / (epsilon * epsilon);
    const double a = c * std::log(4.0 * static_cast<double>(J) * static_cast<double>(D));
    const double t = c * (static_cast<double>(j_star) + std::log(8.0 / epsilon) / b);
    return std::max(detail::at_least(a), detail::at_least(t));
}

/// Smallest d with d >= (1280000 r^2 / eps1^2) max(ln(4 (2^n + 2^{m+1}) D), r).
inline std::int64_t dim_for_comm(double epsilon1, int n, int m, std::int64_t D, std::int64_t r) {
    if (!(epsilon1 > 0.0 && epsilon1 < 1.0))
        throw PreconditionError("dim_for_comm: epsilon1 must lie in (0, 1)");
    if (n < 1 || m < 1) throw PreconditionError("dim_for_comm: n, m must be >= 1");
    if (D < 1 || r < 1) throw PreconditionError("dim_for_comm: D, r must be >= 1");
    const double inputs = std::pow(2.0, n) + std::pow(2.0, m + 1);
    const double v = 1280000.0 * static_cast<double>(r) * static_cast<double>(r) /
                     (epsilon1 * epsilon1) *
                     std::max(std::log(4.0 * inputs * static_cast<double>(D)),
                              static_cast<double>(r));
    return detail::at_least(v);
}

// ---------------------------------------------------------------------------
// Effective epsilon: inversion of the dimension formulas
// ---------------------------------------------------------------------------

enum class Regime { psd, model, tail };

inline const char* regime_name(Regime r) {
    switch (r) {
        case Regime::psd: return "psd";
        case Regime::model: return "model";
        case Regime::tail: return "tail";
    }
    return "?";
}

struct EffectiveEpsilon {
    double value = 0.0;
    // False when the inverse exceeds the theorems' epsilon <= 1/2 hypothesis;
    // the raw value is reported either way.
    bool within_theorem_range = true;
};

/// The epsilon a given d buys under the selected theorem's constants; for the
/// model regime the optional rank branch makes this the binding constraint's
/// epsilon.
inline EffectiveEpsilon epsilon_for_dim(std::int64_t d, std::int64_t J, std::int64_t D,
                                        Regime regime, std::int64_t max_rank = 0) {
    if (d < 1 || J < 1 || D < 1) throw PreconditionError("epsilon_for_dim: d, J, D must be >= 1");
    const double logjd = std::log((regime == Regime::psd ? 2.0 : 4.0) *
                                  static_cast<double>(J) * static_cast<double>(D));
    double c = 16.0;
    if (regime == Regime::model) c = 32.0;
    if (regime == Regime::tail) c = 128.0;
    double eps = std::sqrt(c / static_cast<double>(d) * logjd);
    if (regime == Regime::model && max_rank > 0)
        eps = std::max(eps, std::sqrt(32.0 / static_cast<double>(d) *
                                      static_cast<double>(max_rank)));
    return EffectiveEpsilon{eps, eps <= 0.5};
}

/// Tail-regime inversion including the (j*, b) branch; the branch is
/// transcendental in epsilon, solved by fixed-point iteration.
inline EffectiveEpsilon epsilon_for_dim_tail(std::int64_t d, std::int64_t J, std::int64_t D,
                                             std::int64_t j_star, double b) {
    EffectiveEpsilon base = epsilon_for_dim(d, J, D, Regime::tail);
    if (!(b > 0.0)) throw PreconditionError("epsilon_for_dim_tail: b must be positive");
    const double c = 128.0 / static_cast<double>(d);
    double eps = std::max(base.value, 1e-9);
    for (int it = 0; it < 200; ++it) {
        const double arg = std::max(8.0 / std::min(eps, 7.999), 1.0 + 1e-12);
        const double next =
            std::sqrt(c * (static_cast<double>(j_star) + std::log(arg) / b));
        if (std::abs(next - eps) < 1e-14) {
            eps = next;
            break;
        }
        eps = 0.5 * (eps + next);
    }
    const double v = std::max(base.value, eps);
    return EffectiveEpsilon{v, v <= 0.5};
}

}  // namespace psdsketch
