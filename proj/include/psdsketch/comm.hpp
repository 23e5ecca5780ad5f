#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "psdsketch/compress.hpp"

namespace psdsketch {

/// One-way communication compression plan for a Boolean function protocol.
/// The protocol encodes states rho_x and binary POVMs (E_y, I - E_y) with the
/// accept element at z = 1; the plan records the outcome permutations that
/// move each low-rank element to z < Z as the compressor requires.
struct CommPlan {
    int n = 0, m = 0;          // input sizes: X = 2^n, Y = 2^m
    RealMatrix f_table;        // X x Y 0/1 truth table
    std::int64_t D = 0;
    std::int64_t r = 0;        // max_y min_z rank(E_yz)
    double eps0 = 0.0;
    double eps1 = 0.0;
    std::int64_t d = 0;        // dim_for_comm(eps1, n, m, D, r)
    std::vector<bool> swap_outcomes;  // per y: accept element moved to z = 2
};

namespace detail {

inline int exact_log2(int v) {
    int n = 0;
    while ((1 << n) < v) ++n;
    return (1 << n) == v ? n : -1;
}

}  // namespace detail

/// Verifies the protocol against the truth table at worst-case error eps0,
/// computes the unbalanced rank r, and sizes the compressed dimension.
inline CommPlan comm_plan(const RealMatrix& f_table, const QuantumModel& protocol, double eps0,
                          double eps1) {
    const auto violations = validate_model(protocol);
    if (!violations.empty())
        throw PreconditionError("comm_plan: invalid protocol: " + violations.front().describe());
    if (protocol.num_outcomes() != 2)
        throw PreconditionError("comm_plan: protocol must use binary POVMs");
    const int X = protocol.num_states();
    const int Y = protocol.num_measurements();
    if (f_table.rows() != X || f_table.cols() != Y)
        throw DimensionMismatchError("comm_plan: truth table shape mismatch");
    const int n = detail::exact_log2(X);
    const int m = detail::exact_log2(Y);
    if (n < 1 || m < 1)
        throw PreconditionError("comm_plan: X and Y must be powers of two >= 2");
    if (!(eps0 >= 0.0 && eps1 > 0.0 && eps0 + eps1 < 0.5))
        throw PreconditionError("comm_plan: need eps0 >= 0, eps1 > 0, eps0 + eps1 < 1/2");

    for (int x = 0; x < X; ++x)
        for (int y = 0; y < Y; ++y) {
            const double f = f_table(x, y);
            if (f != 0.0 && f != 1.0)
                throw PreconditionError("comm_plan: truth table entries must be 0/1");
            const double p = trace_inner(protocol.states[x], protocol.povms[y][0]);
            const double slack = 1e-12;
            if (f == 1.0 ? p < 1.0 - eps0 - slack : p > eps0 + slack)
                throw PreconditionError("comm_plan: protocol violates the eps0 promise at (x=" +
                                        std::to_string(x) + ",y=" + std::to_string(y) +
                                        "): p = " + std::to_string(p));
        }

    CommPlan plan;
    plan.n = n;
    plan.m = m;
    plan.f_table = f_table;
    plan.D = protocol.dim;
    plan.eps0 = eps0;
    plan.eps1 = eps1;
    plan.swap_outcomes.resize(Y);
    std::int64_t r = 1;
    for (int y = 0; y < Y; ++y) {
        const int r1 = numerical_rank(protocol.povms[y][0]);
        const int r2 = numerical_rank(protocol.povms[y][1]);
        r = std::max<std::int64_t>(r, std::min(r1, r2));
        plan.swap_outcomes[y] = r1 > r2;
    }
    plan.r = r;
    plan.d = dim_for_comm(eps1, n, m, protocol.dim, r);
    return plan;
}

struct CommCompressResult {
    QuantumModel model;
    CompressionCertificate certificate;
    CompressionReport report;
    RealMatrix accept_probs;        // compressed tr(rho'_x E'_y) for the accept element
    double worst_case_error = 0.0;  // vs. the truth table
    double worst_pair_deviation = 0.0;  // max |tr(rho' E') - tr(rho E)|
};

/// Runs the model compressor with the Corollary's internal epsilon
/// eps1 / (200 r) and accepts a sketch only when, in addition to the norm
/// events, every pairwise probability moved by at most eps1 — so accepted
/// outputs achieve worst-case protocol error <= eps0 + eps1.
inline CommCompressResult comm_compress(const CommPlan& plan, const QuantumModel& protocol,
                                        const CompressionConfig& cfg,
                                        std::int64_t d_override = 0) {
    const int X = protocol.num_states();
    const int Y = protocol.num_measurements();
    if (static_cast<int>(plan.swap_outcomes.size()) != Y || plan.f_table.rows() != X)
        throw PreconditionError("comm_compress: plan does not match protocol");

    QuantumModel permuted = protocol;
    for (int y = 0; y < Y; ++y)
        if (plan.swap_outcomes[y]) std::swap(permuted.povms[y][0], permuted.povms[y][1]);

    const double eps_internal = plan.eps1 / (200.0 * static_cast<double>(plan.r));
    const CompressionConfig inner(eps_internal, cfg.seed, cfg.max_retries);
    const std::int64_t d = d_override > 0 ? d_override : plan.d;

    ModelCompressor compressor(permuted);
    ModelCompressionResult res =
        compressor.run(inner, d, Regime::model, nullptr, true, plan.eps1);

    CommCompressResult out;
    out.certificate = std::move(res.certificate);
    out.report = std::move(res.report);
    out.model = std::move(res.model);
    out.accept_probs = RealMatrix(X, Y);
    for (int x = 0; x < X; ++x)
        for (int y = 0; y < Y; ++y) {
            const int accept_z = plan.swap_outcomes[y] ? 1 : 0;
            const double p = trace_inner(out.model.states[x], out.model.povms[y][accept_z]);
            out.accept_probs(x, y) = p;
            const double err = plan.f_table(x, y) == 1.0 ? 1.0 - p : p;
            out.worst_case_error = std::max(out.worst_case_error, err);
        }
    for (const auto& row : out.report.state_meas)
        out.worst_pair_deviation = std::max(out.worst_pair_deviation, row.abs_error);
    return out;
}

/// Truth table of n-bit equality; with basis_identification_model(2^n, 2^n, 2^n)
/// it forms the zero-error basis protocol.
inline RealMatrix equality_table(int bits) {
    const int size = 1 << bits;
    return RealMatrix::Identity(size, size);
}

}  // namespace psdsketch
