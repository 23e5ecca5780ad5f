#pragma once

namespace psdsketch::tol {

// Hermiticity check, relative to the largest entry magnitude.
inline constexpr double herm = 1e-10;

// Psd checks, relative to max(1, trace).
inline constexpr double psd = 1e-9;

// Eigendecomposition reconstruction and related identities.
inline constexpr double recon = 1e-10;

// Default relative threshold for numerical_rank.
inline constexpr double rank_rel = 1e-9;

// Model normalization (state traces, POVM completeness, table row sums).
inline constexpr double norm = 1e-8;

// Vector norms below this are treated as vacuous in JL checks.
inline constexpr double vacuous_norm = 1e-14;

// Sketched state traces below this trigger a resample.
inline constexpr double degenerate_trace = 1e-12;

// Cap for the +inf sentinel in tail fits; e^{-50} underflows every
// tolerance in play.
inline constexpr double b_max = 50.0;

// Slack used when a promised bound is exactly zero.
inline constexpr double zero_bound_slack = 1e-12;

}  // namespace psdsketch::tol
