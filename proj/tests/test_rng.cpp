#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace psdsketch;

TEST_CASE("philox4x32-10 known-answer vector") {
    // Random123 KAT: zero counter, zero key.
    const auto out = rng::detail::philox4x32_10({0, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
}

TEST_CASE("philox blocks are deterministic and counter-sensitive") {
    const auto a = rng::philox_block(42, 0, 0);
    const auto b = rng::philox_block(42, 0, 0);
    CHECK(a == b);
    CHECK(rng::philox_block(42, 1, 0) != a);
    CHECK(rng::philox_block(42, 0, 1) != a);
    CHECK(rng::philox_block(43, 0, 0) != a);
}

TEST_CASE("derived sub-streams separate") {
    CHECK(rng::derive_stream(1, 2, 3) != rng::derive_stream(1, 3, 2));
    CHECK(rng::derive_stream(1, 2, 3) != rng::derive_stream(2, 2, 3));
    CHECK(rng::derive_stream(1, 2, 3) == rng::derive_stream(1, 2, 3));
}

TEST_CASE("polar normals have unit variance and zero mean") {
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n / 2; ++i) {
        const auto [a, b] = rng::normal_pair(/*stream=*/7, i);
        sum += a + b;
        sumsq += a * a + b * b;
    }
    const double mean = sum / n;
    const double var = sumsq / n - mean * mean;
    // 3 sigma bands for n draws.
    CHECK(std::abs(mean) < 3.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

TEST_CASE("complex gaussian matrices reproduce bitwise") {
    const Matrix a = rng::complex_gaussian(5, 7, 99);
    const Matrix b = rng::complex_gaussian(5, 7, 99);
    REQUIRE(a.size() == b.size());
    CHECK(std::memcmp(a.data(), b.data(), sizeof(Complex) * a.size()) == 0);
    const Matrix c = rng::complex_gaussian(5, 7, 100);
    CHECK(std::memcmp(a.data(), c.data(), sizeof(Complex) * a.size()) != 0);
}
