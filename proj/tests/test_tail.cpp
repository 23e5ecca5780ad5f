#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace psdsketch;

namespace {
RealVector from(std::initializer_list<double> v) {
    RealVector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}
}  // namespace

TEST_CASE("tail_fit hinted geometric decay") {
    // Entries e^{-0.5 j} past the top; every index gives the same ratio.
    const RealVector s =
        from({1.0, std::exp(-0.5), std::exp(-1.0), std::exp(-1.5)});
    const TailProfile p = tail_fit(s, 0);
    CHECK(p.j_star == 0);
    CHECK(p.b == Catch::Approx(0.5).margin(1e-12));
    CHECK(p.holds_for(s));
}

TEST_CASE("tail_fit zero tail returns the b_max sentinel") {
    const TailProfile p = tail_fit(from({1.0, 1.0, 1.0, 0.0, 0.0}), 3);
    CHECK(p.j_star == 3);
    CHECK(p.b == tol::b_max);
    CHECK(p.holds_for(from({1.0, 1.0, 1.0, 0.0, 0.0})));
}

TEST_CASE("tail_fit constant geometric ratio is set by the worst index") {
    const RealVector s = from({1.0, 0.9, 0.81, 0.729});
    const TailProfile p = tail_fit(s, 0);
    CHECK(p.b == Catch::Approx(-std::log(0.9)).margin(1e-12));
    CHECK(p.holds_for(s));

    // A flat tail binds at the deepest index instead.
    const RealVector flat = from({1.0, 0.9, 0.9, 0.9});
    const TailProfile q = tail_fit(flat, 0);
    CHECK(q.b == Catch::Approx(-std::log(0.9) / 3.0).margin(1e-12));
    CHECK(q.holds_for(flat));
}

TEST_CASE("tail_fit auto j* and error cases") {
    // j* lands on the last entry >= 1.
    const RealVector s = from({1.0, 1.0, std::exp(-1.0), std::exp(-2.0)});
    const TailProfile p = tail_fit(s);
    CHECK(p.j_star == 1);
    CHECK(p.b == Catch::Approx(1.0).margin(1e-12));

    CHECK_THROWS_AS(tail_fit(from({1.0, 1.0, 1.0})), NoValidTailError);
    CHECK_THROWS_AS(tail_fit(from({1.0, 1.0, 0.5}), 0), NoValidTailError);  // 1.0 in the tail
    CHECK_THROWS_AS(tail_fit(from({0.5, 0.9})), PreconditionError);         // not descending
}

TEST_CASE("tail_fit invariant holds exactly on the fitted spectrum") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const std::uint64_t stream = rng::derive_stream(301, rng::kDomainTest, seed);
        RealVector s(20);
        double cur = 1.0;
        for (int i = 0; i < 20; ++i) {
            cur *= 0.3 + 0.69 * rng::uniform_at(stream, i);
            s(i) = cur;
        }
        const TailProfile p = tail_fit(s);
        CHECK(p.holds_for(s));
        // Tampering with b upward breaks the invariant unless the tail is slack.
        TailProfile bad = p;
        bad.b = p.b * 1.5;
        if (p.b < tol::b_max) CHECK_FALSE(bad.holds_for(s));
    }
}

TEST_CASE("block_split index arithmetic") {
    Matrix e = Matrix::Zero(4, 4);
    e.diagonal() << 1.0, 0.5, 0.25, 0.125;
    const auto blocks = block_split(HermitianMatrix::unchecked(e), 1, 1);
    REQUIRE(blocks.size() == 3);
    CHECK(numerical_rank(blocks[0]) == 2);
    CHECK(numerical_rank(blocks[1]) == 1);
    CHECK(numerical_rank(blocks[2]) == 1);

    // Low rank collapses to a single block equal to E.
    const HermitianMatrix p = testsupport::random_psd(6, 2, rng::derive_stream(91, rng::kDomainTest, 1));
    const auto single = block_split(p, 1, 3);
    REQUIRE(single.size() == 1);
    CHECK((single[0].matrix() - p.matrix()).cwiseAbs().maxCoeff() <= 1e-10 * (1 + op_norm(p)));
}

TEST_CASE("block_split reconstructs and blocks are orthogonal") {
    const HermitianMatrix e = testsupport::random_psd(12, 12, rng::derive_stream(92, rng::kDomainTest, 2));
    const auto blocks = block_split(e, 2, 3);
    Matrix sum = Matrix::Zero(12, 12);
    for (const auto& b : blocks) sum += b.matrix();
    CHECK((sum - e.matrix()).cwiseAbs().maxCoeff() <= 1e-10 * (1 + op_norm(e)));
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (std::size_t j = i + 1; j < blocks.size(); ++j)
            CHECK(std::abs(trace_inner(blocks[i], blocks[j])) <=
                  tol::recon * (1 + op_norm(blocks[i])) * (1 + op_norm(blocks[j])));
}
