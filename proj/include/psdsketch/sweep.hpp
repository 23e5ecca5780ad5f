#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "psdsketch/compress.hpp"
#include "psdsketch/detail/format.hpp"

namespace psdsketch {

struct SweepCell {
    std::int64_t d = 0;
    std::uint64_t seed = 0;
    bool accepted = false;
    int attempts = 0;
    double max_err_state_state = 0.0;
    double max_err_state_meas = 0.0;
    double max_err_meas_meas = 0.0;
};

struct SweepRow {
    std::int64_t d = 0;
    double epsilon_eff = 0.0;
    int seeds = 0;
    int accepted = 0;
    double acceptance_rate = 0.0;
    double median_max_err_state_state = 0.0;
    double median_max_err_state_meas = 0.0;
    double median_max_err_meas_meas = 0.0;
    double max_err_state_state = 0.0;
    double max_err_state_meas = 0.0;
    double max_err_meas_meas = 0.0;
    double mean_attempts = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepCell> cells;  // one per (d, seed), in grid-major order
};

namespace detail {

inline double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

/// Empirical error-vs-d scaling for one model: every (d, seed) cell runs the
/// model pipeline in sweep mode and contributes its per-class max absolute
/// errors. Error statistics aggregate over accepted cells in fixed seed
/// order, so the CSV is deterministic in (model, grid, epsilon, base_seed).
inline SweepResult run_sweep(const QuantumModel& model, const std::vector<std::int64_t>& d_grid,
                             double epsilon, std::uint64_t base_seed, int seeds,
                             int max_retries = 64) {
    if (seeds < 1) throw PreconditionError("run_sweep: seeds must be >= 1");
    if (d_grid.empty()) throw PreconditionError("run_sweep: empty d grid");
    ModelCompressor compressor(model);
    SweepResult result;
    for (const std::int64_t d : d_grid) {
        SweepRow row;
        row.d = d;
        row.epsilon_eff =
            epsilon_for_dim(d, compressor.J(), compressor.D(), Regime::model).value;
        row.seeds = seeds;
        std::vector<double> ss, sm, mm;
        long total_attempts = 0;
        for (int s = 0; s < seeds; ++s) {
            SweepCell cell;
            cell.d = d;
            cell.seed = rng::derive_stream(base_seed, rng::kDomainSweep, s);
            try {
                const CompressionConfig cfg(epsilon, cell.seed, max_retries);
                ModelCompressionResult r =
                    compressor.run(cfg, d, Regime::model, nullptr, /*materialize=*/false);
                cell.accepted = true;
                cell.attempts = r.certificate.attempts;
                cell.max_err_state_state = r.report.max_abs_error_state_state;
                cell.max_err_state_meas = r.report.max_abs_error_state_meas;
                cell.max_err_meas_meas = r.report.max_abs_error_meas_meas;
                ss.push_back(cell.max_err_state_state);
                sm.push_back(cell.max_err_state_meas);
                mm.push_back(cell.max_err_meas_meas);
                ++row.accepted;
            } catch (const RetriesExhaustedError& e) {
                cell.accepted = false;
                cell.attempts = e.attempts;
            }
            total_attempts += cell.attempts;
            result.cells.push_back(cell);
        }
        row.acceptance_rate = static_cast<double>(row.accepted) / seeds;
        row.mean_attempts = static_cast<double>(total_attempts) / seeds;
        row.median_max_err_state_state = detail::median(ss);
        row.median_max_err_state_meas = detail::median(sm);
        row.median_max_err_meas_meas = detail::median(mm);
        row.max_err_state_state = ss.empty() ? std::numeric_limits<double>::quiet_NaN()
                                             : *std::max_element(ss.begin(), ss.end());
        row.max_err_state_meas = sm.empty() ? std::numeric_limits<double>::quiet_NaN()
                                            : *std::max_element(sm.begin(), sm.end());
        row.max_err_meas_meas = mm.empty() ? std::numeric_limits<double>::quiet_NaN()
                                           : *std::max_element(mm.begin(), mm.end());
        result.rows.push_back(row);
    }
    return result;
}

inline const char* sweep_csv_header() {
    return "d,epsilon_eff,seeds,accepted,acceptance_rate,"
           "median_max_err_state_state,median_max_err_state_meas,median_max_err_meas_meas,"
           "max_err_state_state,max_err_state_meas,max_err_meas_meas,mean_attempts";
}

inline std::string sweep_csv(const SweepResult& result) {
    std::ostringstream os;
    os << sweep_csv_header() << '\n';
    for (const auto& r : result.rows) {
        os << r.d << ',' << detail::format_double(r.epsilon_eff) << ',' << r.seeds << ','
           << r.accepted << ',' << detail::format_double(r.acceptance_rate) << ','
           << detail::format_double(r.median_max_err_state_state) << ','
           << detail::format_double(r.median_max_err_state_meas) << ','
           << detail::format_double(r.median_max_err_meas_meas) << ','
           << detail::format_double(r.max_err_state_state) << ','
           << detail::format_double(r.max_err_state_meas) << ','
           << detail::format_double(r.max_err_meas_meas) << ','
           << detail::format_double(r.mean_attempts) << '\n';
    }
    return os.str();
}

}  // namespace psdsketch
