#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "psdsketch/projection.hpp"

namespace psdsketch {

/// Record of which probabilistic events held for the sampled sketch, plus the
/// achieved-vs-promised error summary. A returned certificate has all
/// recorded events true and max_violation_ratio <= 1.
struct CompressionCertificate {
    std::uint64_t seed = 0;             // pipeline seed (attempt streams derive from it)
    std::uint64_t projection_seed = 0;  // seed of the accepted sketch
    int attempts = 0;
    bool jl_event_held = false;         // certified by direct bound verification
    std::vector<bool> norm_events;      // per-y events E_y (empty for psd runs)
    double promised_bound_constant = 0.0;  // 192 (psd) or 200 (model regimes)
    double max_violation_ratio = 0.0;
    bool formula_satisfied = false;  // d meets the theorem inequality at the requested epsilon
    double epsilon_requested = 0.0;
    double epsilon_used = 0.0;  // max(requested, effective epsilon for this d)
    std::int64_t d = 0;
    std::int64_t D = 0;
    std::string regime;
};

struct PairErrorRow {
    // State indices or (y,z) pairs; unused fields stay -1.
    int x = -1, x2 = -1, y = -1, z = -1, y2 = -1, z2 = -1;
    double original_ip = 0.0;
    double compressed_ip = 0.0;
    double abs_error = 0.0;
    double bound = 0.0;
    double ratio = 0.0;
    bool pass = true;
};

namespace detail {

inline void finish_row(PairErrorRow& row) {
    row.abs_error = std::abs(row.compressed_ip - row.original_ip);
    if (row.bound > 0.0) {
        row.ratio = row.abs_error / row.bound;
        row.pass = row.ratio <= 1.0;
    } else if (row.abs_error <= tol::zero_bound_slack) {
        row.ratio = 0.0;
        row.pass = true;
    } else {
        row.ratio = std::numeric_limits<double>::infinity();
        row.pass = false;
    }
}

}  // namespace detail

/// Per-pair tables of original vs compressed inner products, grouped by pair
/// class, each flagged against its promised bound (the 192e bounds rounded up
/// to 200e). z = Z rows derive their bound from the z < Z rows.
struct CompressionReport {
    double epsilon_used = 0.0;
    double bound_constant = 200.0;
    std::vector<PairErrorRow> state_state;
    std::vector<PairErrorRow> state_meas;
    std::vector<PairErrorRow> meas_meas;
    double max_violation_ratio = 0.0;
    double max_abs_error_state_state = 0.0;
    double max_abs_error_state_meas = 0.0;
    double max_abs_error_meas_meas = 0.0;
    bool all_pass = true;

    void finalize() {
        max_violation_ratio = 0.0;
        max_abs_error_state_state = max_abs_error_state_meas = max_abs_error_meas_meas = 0.0;
        all_pass = true;
        auto scan = [&](const std::vector<PairErrorRow>& rows, double& max_abs) {
            for (const auto& r : rows) {
                max_abs = std::max(max_abs, r.abs_error);
                max_violation_ratio = std::max(max_violation_ratio, r.ratio);
                all_pass = all_pass && r.pass;
            }
        };
        scan(state_state, max_abs_error_state_state);
        scan(state_meas, max_abs_error_state_meas);
        scan(meas_meas, max_abs_error_meas_meas);
    }
};

namespace detail {

// Builds the full report from inner-product and trace providers, so the
// factored pipeline path and the dense standalone path share the formulas.
//
// original/compressed index n: states first (n = x), then POVM elements
// (n = X + y*Z + z). tr_orig(n) is the original-model trace.
struct ReportInputs {
    int X, Y, Z;
    std::int64_t D;
    std::function<double(int, int)> ip_orig;
    std::function<double(int, int)> ip_comp;
    std::function<double(int)> tr_orig;
};

inline CompressionReport build_report(const ReportInputs& in, double epsilon) {
    CompressionReport rep;
    rep.epsilon_used = epsilon;
    rep.bound_constant = 200.0;
    const int X = in.X, Y = in.Y, Z = in.Z;
    auto meas_index = [&](int y, int z) { return X + y * Z + z; };
    auto tr_small_side = [&](int y) {       // tr(I - E_yZ)
        return std::max(0.0, static_cast<double>(in.D) - in.tr_orig(meas_index(y, Z - 1)));
    };

    for (int x = 0; x < X; ++x)
        for (int x2 = x; x2 < X; ++x2) {
            PairErrorRow row;
            row.x = x;
            row.x2 = x2;
            row.original_ip = in.ip_orig(x, x2);
            row.compressed_ip = in.ip_comp(x, x2);
            row.bound = 200.0 * epsilon;  // state traces are 1
            detail::finish_row(row);
            rep.state_state.push_back(row);
        }

    for (int x = 0; x < X; ++x)
        for (int y = 0; y < Y; ++y)
            for (int z = 0; z < Z; ++z) {
                PairErrorRow row;
                row.x = x;
                row.y = y;
                row.z = z;
                const int n = meas_index(y, z);
                row.original_ip = in.ip_orig(x, n);
                row.compressed_ip = in.ip_comp(x, n);
                row.bound = 200.0 * epsilon *
                            (z + 1 < Z ? in.tr_orig(n) : tr_small_side(y));
                detail::finish_row(row);
                rep.state_meas.push_back(row);
            }

    // Measurement-measurement rows. Pairs with both outcomes equal to Z are
    // not tabulated: their values are pinned by normalization and shift with
    // the ambient dimension, so no preservation statement exists for them.
    for (int y = 0; y < Y; ++y)
        for (int z = 0; z < Z; ++z)
            for (int y2 = y; y2 < Y; ++y2)
                for (int z2 = (y2 == y ? z : 0); z2 < Z; ++z2) {
                    const bool aZ = (z == Z - 1) && Z > 1;
                    const bool bZ = (z2 == Z - 1) && Z > 1;
                    if (Z == 1 || (aZ && bZ)) continue;
                    PairErrorRow row;
                    row.y = y;
                    row.z = z;
                    row.y2 = y2;
                    row.z2 = z2;
                    const int na = meas_index(y, z);
                    const int nb = meas_index(y2, z2);
                    row.original_ip = in.ip_orig(na, nb);
                    row.compressed_ip = in.ip_comp(na, nb);
                    if (!aZ && !bZ) {
                        row.bound = 200.0 * epsilon * in.tr_orig(na) * in.tr_orig(nb);
                    } else {
                        // One index at z = Z: bound derived from the z < Z
                        // rows plus the trace-preservation term.
                        const int small = aZ ? nb : na;
                        const int yZ = aZ ? y : y2;
                        row.bound =
                            200.0 * epsilon * in.tr_orig(small) * (1.0 + tr_small_side(yZ));
                    }
                    detail::finish_row(row);
                    rep.meas_meas.push_back(row);
                }

    rep.finalize();
    return rep;
}

}  // namespace detail
}  // namespace psdsketch
