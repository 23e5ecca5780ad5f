#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

using namespace psdsketch;
using testsupport::random_normalized_table;
using testsupport::random_psd;

TEST_CASE("validate_model accepts the basis model and localizes violations") {
    QuantumModel m = basis_identification_model(3, 2, 8);
    CHECK(validate_model(m).empty());

    // Scaling one POVM element breaks completeness at that y.
    QuantumModel bad = m;
    bad.povms[1][0] = HermitianMatrix::unchecked(1.5 * bad.povms[1][0].matrix());
    const auto v1 = validate_model(bad);
    REQUIRE_FALSE(v1.empty());
    CHECK(v1.front().kind == Violation::Kind::PovmNotComplete);
    CHECK(v1.front().y == 1);

    // A state of trace 0.9 is flagged at its x.
    QuantumModel bad2 = m;
    bad2.states[2] = HermitianMatrix::unchecked(0.9 * bad2.states[2].matrix());
    const auto v2 = validate_model(bad2);
    REQUIRE_FALSE(v2.empty());
    CHECK(v2.front().kind == Violation::Kind::StateTrace);
    CHECK(v2.front().x == 2);
}

TEST_CASE("data_table of the D=16 basis instance is the identity") {
    // D basis states against the single D-outcome basis measurement.
    const int D = 16;
    QuantumModel m;
    m.dim = D;
    m.povms.resize(1);
    for (int i = 0; i < D; ++i) {
        Matrix p = Matrix::Zero(D, D);
        p(i, i) = 1.0;
        m.states.push_back(HermitianMatrix::unchecked(p));
        m.povms[0].push_back(HermitianMatrix::unchecked(std::move(p)));
    }
    const DataTable t = data_table(m);
    CHECK(t.X() == D);
    CHECK(t.Z() == D);
    for (int x = 0; x < D; ++x)
        for (int z = 0; z < D; ++z) CHECK(t.at(x, 0, z) == (x == z ? 1.0 : 0.0));
}

TEST_CASE("data_table entry of maximally mixed state is tr(E)/D") {
    const int D = 6;
    QuantumModel m;
    m.dim = D;
    m.states.push_back(HermitianMatrix::unchecked(Matrix::Identity(D, D) / D));
    m.povms.resize(1);
    Matrix e = Matrix::Zero(D, D);
    e(0, 0) = 1.0;
    e(1, 1) = 0.5;
    m.povms[0].push_back(HermitianMatrix::unchecked(e));
    m.povms[0].push_back(HermitianMatrix::unchecked(Matrix::Identity(D, D) - e));
    const DataTable t = data_table(m);
    CHECK(t.at(0, 0, 0) == Catch::Approx(1.5 / D).margin(1e-14));
}

TEST_CASE("data_table rows are normalized for random valid models") {
    for (std::uint64_t s = 0; s < 5; ++s) {
        const QuantumModel m = random_model(3, 2, 3, 12, 2, 2, 1000 + s);
        REQUIRE(validate_model(m).empty());
        const DataTable t = data_table(m);
        for (int x = 0; x < t.X(); ++x)
            for (int y = 0; y < t.Y(); ++y) {
                double sum = 0.0;
                for (int z = 0; z < t.Z(); ++z) sum += t.at(x, y, z);
                CHECK(std::abs(sum - 1.0) <= 1e-9);
            }
    }
}

TEST_CASE("trivial_model") {
    SECTION("identity table gives basis projectors") {
        const QuantumModel m = trivial_model(identity_table(3));
        CHECK(m.dim == 3);
        CHECK(validate_model(m).empty());
        for (int z = 0; z < 3; ++z) {
            Matrix expected = Matrix::Zero(3, 3);
            expected(z, z) = 1.0;
            CHECK((m.povms[0][z].matrix() - expected).cwiseAbs().maxCoeff() == 0.0);
        }
    }
    SECTION("constant table gives I/Z") {
        const QuantumModel m = trivial_model(constant_table(4, 1, 2));
        for (int z = 0; z < 2; ++z)
            CHECK((m.povms[0][z].matrix() - 0.5 * Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() ==
                  0.0);
    }
    SECTION("data_table round-trips random normalized tables") {
        for (std::uint64_t s = 0; s < 6; ++s) {
            const DataTable t =
                random_normalized_table(4, 2, 3, rng::derive_stream(61, rng::kDomainTest, s));
            const DataTable back = data_table(trivial_model(t));
            CHECK((back.entries() - t.entries()).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
    SECTION("unnormalized table rejected") {
        RealMatrix e(1, 2);
        e << 2.0, 3.0;
        const DataTable t(1, 1, 2, e, false);
        CHECK_THROWS_AS(trivial_model(t), PreconditionError);
    }
}

TEST_CASE("gram") {
    std::vector<HermitianMatrix> projs;
    for (int i = 0; i < 2; ++i) {
        Matrix p = Matrix::Zero(2, 2);
        p(i, i) = 1.0;
        projs.emplace_back(HermitianMatrix::unchecked(std::move(p)));
    }
    const GramMatrix g = gram(projs);
    CHECK(g(0, 0) == Catch::Approx(1.0));
    CHECK(g(0, 1) == Catch::Approx(0.0).margin(1e-15));

    std::vector<HermitianMatrix> ident(2, HermitianMatrix(Matrix::Identity(2, 2)));
    const GramMatrix g2 = gram(ident);
    CHECK(g2(0, 0) == Catch::Approx(2.0));
    CHECK(g2(1, 0) == Catch::Approx(2.0));

    // Random psd triple: symmetric, matches pairwise trace_inner, and is psd
    // as a real matrix.
    std::vector<HermitianMatrix> mats;
    for (std::uint64_t s = 0; s < 3; ++s)
        mats.push_back(random_psd(7, 3, rng::derive_stream(71, rng::kDomainTest, s)));
    const GramMatrix g3 = gram(mats);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            CHECK(g3(i, j) == Catch::Approx(g3(j, i)));
            CHECK(g3(i, j) == Catch::Approx(trace_inner(mats[i], mats[j])).margin(1e-12));
        }
    const Eigen::SelfAdjointEigenSolver<RealMatrix> es(g3);
    CHECK(es.eigenvalues().minCoeff() >= -1e-9 * g3.trace());
}

TEST_CASE("random_model determinism, ranks, and validity") {
    const QuantumModel a = random_model(2, 1, 2, 4, 1, 1, 7);
    const QuantumModel b = random_model(2, 1, 2, 4, 1, 1, 7);
    CHECK(testsupport::hash_model(a) == testsupport::hash_model(b));
    CHECK(validate_model(a).empty());
    CHECK(numerical_rank(a.povms[0][0]) == 1);

    const QuantumModel c = random_model(2, 1, 1, 5, 2, 2, 9);
    REQUIRE(c.num_outcomes() == 1);
    CHECK((c.povms[0][0].matrix() - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(random_model(2, 1, 2, 4, 5, 1, 0), InfeasibleRankError);
    CHECK_THROWS_AS(random_model(2, 1, 2, 4, 1, 9, 0), InfeasibleRankError);

    // Spec invariant: 100 seeds at (X,Y,Z,D) = (4,3,3,16) all validate.
    std::vector<int> bad(100, 0);
    testsupport::parallel_for_indices(100, [&](int s) {
        const QuantumModel m = random_model(4, 3, 3, 16, 2, 2, 5000 + s);
        bad[s] = validate_model(m).empty() ? 0 : 1;
    });
    int total = 0;
    for (int v : bad) total += v;
    CHECK(total == 0);
}

TEST_CASE("random_psd_factorization") {
    const PsdFactorization f = random_psd_factorization(1, 1, 2, 1, 0);
    CHECK(f.left.size() == 1);
    CHECK(f.right.size() == 1);
    for (const auto& m : {f.left[0], f.right[0]}) {
        CHECK(m.trace() == Catch::Approx(1.0).margin(1e-12));
        CHECK(numerical_rank(m) == 1);
        CHECK(detail::min_eigenvalue(m) >= -tol::psd);
    }
    const PsdFactorization g = random_psd_factorization(1, 1, 2, 1, 0);
    CHECK((f.left[0].matrix() - g.left[0].matrix()).cwiseAbs().maxCoeff() == 0.0);

    const PsdFactorization full = random_psd_factorization(1, 1, 6, 0, 3);
    CHECK(detail::min_eigenvalue(full.left[0]) > 0.0);
    CHECK(numerical_rank(full.left[0]) == 6);
}
