#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace psdsketch::rng {

// Counter-based generator: Philox4x32-10. Every draw is a pure function of
// (stream key, counter), so sub-streams never overlap and sampling order is
// irrelevant for reproducibility.

namespace detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

struct Philox4x32State {
    std::array<std::uint32_t, 4> ctr;
    std::array<std::uint32_t, 2> key;
};

inline void philox_round(Philox4x32State& s) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * s.ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * s.ctr[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    s.ctr = {hi1 ^ s.ctr[1] ^ s.key[0], lo1, hi0 ^ s.ctr[3] ^ s.key[1], lo0};
}

inline std::array<std::uint32_t, 4> philox4x32_10(std::array<std::uint32_t, 4> ctr,
                                                  std::array<std::uint32_t, 2> key) {
    Philox4x32State s{ctr, key};
    philox_round(s);
    for (int r = 1; r < 10; ++r) {
        s.key[0] += kPhiloxW0;
        s.key[1] += kPhiloxW1;
        philox_round(s);
    }
    return s.ctr;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

}  // namespace detail

// One 128-bit Philox block -> two 64-bit words.
inline std::array<std::uint64_t, 2> philox_block(std::uint64_t stream, std::uint64_t counter,
                                                 std::uint32_t slot, std::uint32_t domain = 0) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32), slot, domain};
    const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(stream),
                                              static_cast<std::uint32_t>(stream >> 32)};
    const auto out = detail::philox4x32_10(ctr, key);
    return {(static_cast<std::uint64_t>(out[1]) << 32) | out[0],
            (static_cast<std::uint64_t>(out[3]) << 32) | out[2]};
}

// Splittable sub-stream derivation: hash(seed, a, b).
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t k = detail::splitmix64(seed);
    k = detail::splitmix64(k ^ detail::splitmix64(a ^ 0x8000000000000001ull));
    k = detail::splitmix64(k ^ detail::splitmix64(b ^ 0x4000000000000002ull));
    return k;
}

// Stream domain tags (argument `a` of derive_stream).
inline constexpr std::uint64_t kDomainProjection = 1;
inline constexpr std::uint64_t kDomainState = 2;
inline constexpr std::uint64_t kDomainPovm = 3;
inline constexpr std::uint64_t kDomainAttempt = 4;
inline constexpr std::uint64_t kDomainSweep = 5;
inline constexpr std::uint64_t kDomainTest = 6;

// u64 -> double in (0,1), never exactly 0 or 1.
inline double uniform_open(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal pair via the Marsaglia polar method. `index` addresses the
// pair; rejected proposals advance the slot counter, so consumption stays
// local to the pair and independent draws never interleave.
inline std::pair<double, double> normal_pair(std::uint64_t stream, std::uint64_t index,
                                             std::uint32_t domain = 0) {
    for (std::uint32_t slot = 0;; ++slot) {
        const auto words = philox_block(stream, index, slot, domain);
        const double u = 2.0 * uniform_open(words[0]) - 1.0;
        const double v = 2.0 * uniform_open(words[1]) - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) {
            const double f = std::sqrt(-2.0 * std::log(s) / s);
            return {u * f, v * f};
        }
    }
}

// Column-major matrix of iid standard complex Gaussians S + iT.
inline Eigen::MatrixXcd complex_gaussian(int rows, int cols, std::uint64_t stream,
                                         std::uint32_t domain = 0) {
    Eigen::MatrixXcd m(rows, cols);
    std::uint64_t index = 0;
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i, ++index) {
            const auto [re, im] = normal_pair(stream, index, domain);
            m(i, j) = std::complex<double>(re, im);
        }
    }
    return m;
}

inline Eigen::VectorXcd complex_gaussian_vector(int dim, std::uint64_t stream,
                                                std::uint32_t domain = 0) {
    return complex_gaussian(dim, 1, stream, domain);
}

inline Eigen::VectorXcd random_unit_vector(int dim, std::uint64_t stream,
                                           std::uint32_t domain = 0) {
    Eigen::VectorXcd v = complex_gaussian_vector(dim, stream, domain);
    return v / v.norm();
}

// Uniform double in [0,1) addressed by index.
inline double uniform_at(std::uint64_t stream, std::uint64_t index, std::uint32_t domain = 0) {
    return uniform_open(philox_block(stream, index, 0, domain)[0]);
}

}  // namespace psdsketch::rng
