#include "invrep/montecarlo.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace invrep;
using namespace invrep::montecarlo;
using numerics::CMatrix;
using numerics::CVector;

TEST_CASE("sample_state basics") {
    const HalfInt h = HalfInt::from_twice(1);
    auto singlet = su2rep::near_invariant_basis(h, 2, 1, HalfInt(0));

    RngStream rng = RngStream::substream(42, 0);
    CVector psi = sample_state(singlet.coeffs, rng);
    CHECK(psi.norm() == Catch::Approx(1.0));
    // 1-dim span: the basis vector up to phase
    const numerics::Cplx overlap = (singlet.coeffs.col(0).adjoint() * psi)(0);
    CHECK(std::abs(overlap) == Catch::Approx(1.0));

    // samples stay in the span
    auto basis = su2rep::near_invariant_basis(h, 4, 2, HalfInt(1));
    for (int t = 0; t < 10; ++t) {
        RngStream r2 = RngStream::substream(7, static_cast<std::uint64_t>(t));
        CVector v = sample_state(basis.coeffs, r2);
        const CVector proj = basis.coeffs * (basis.coeffs.adjoint() * v);
        CHECK((v - proj).norm() < 1e-10);
    }

    CHECK_THROWS_AS(sample_state(CMatrix::Zero(4, 0), rng), EmptySubspace);
}

TEST_CASE("uniform moments: E|<b_1|phi>|^2 = 1/dInv") {
    const HalfInt h = HalfInt::from_twice(1);
    auto basis = su2rep::near_invariant_basis(h, 4, 2, HalfInt(2)); // several dims
    const Eigen::Index k = basis.size();
    REQUIRE(k > 1);
    const long long N = 100000;
    double acc = 0, acc2 = 0;
    for (long long t = 0; t < N; ++t) {
        RngStream rng = RngStream::substream(2024, static_cast<std::uint64_t>(t));
        CVector v = sample_state(basis.coeffs, rng);
        const double w = std::norm((basis.coeffs.col(0).adjoint() * v)(0));
        acc += w;
        acc2 += w * w;
    }
    const double mean = acc / N;
    const double var = acc2 / N - mean * mean;
    const double se = std::sqrt(var / N);
    CHECK(std::abs(mean - 1.0 / static_cast<double>(k)) < 3 * se + 1e-6);
}

TEST_CASE("run_experiment: singlet instance has eta exactly 1") {
    ExperimentConfig cfg;
    cfg.d = 2;
    cfg.s = HalfInt::from_twice(1);
    cfg.n = 2;
    cfg.p = 1;
    cfg.j0 = HalfInt(0);
    cfg.trials = 64;
    cfg.seed = 5;
    auto st = run_experiment(cfg);
    CHECK(st.dInv == 1);
    CHECK(st.etaMean == Catch::Approx(1.0));
    CHECK(st.tailFraction == 0.0);
    CHECK(st.mcVar == Catch::Approx(0.0).margin(1e-20));
    CHECK(st.exactMean == Catch::Approx(0.5));
}

TEST_CASE("run_experiment: MC mean matches the exact mean") {
    ExperimentConfig cfg;
    cfg.d = 2;
    cfg.s = HalfInt::from_twice(1);
    cfg.n = 4;
    cfg.p = 2;
    cfg.j0 = HalfInt(0);
    cfg.trials = 10000;
    cfg.seed = 7;
    auto st = run_experiment(cfg);
    const double se = std::sqrt(st.mcVar / static_cast<double>(st.samples));
    CHECK(std::abs(st.mcMean - st.exactMean) <= 3 * se);
}

TEST_CASE("run_experiment: deterministic across thread counts") {
    ExperimentConfig cfg;
    cfg.d = 2;
    cfg.s = HalfInt::from_twice(2);
    cfg.n = 3;
    cfg.p = 1;
    cfg.j0 = HalfInt(0);
    cfg.trials = 501;
    cfg.seed = 12345;
    cfg.threads = 1;
    auto a = run_experiment(cfg);
    cfg.threads = 4;
    auto b = run_experiment(cfg);
    CHECK(a.mcMean == b.mcMean);
    CHECK(a.mcVar == b.mcVar);
    CHECK(a.etaMean == b.etaMean);
    CHECK(a.tailFraction == b.tailFraction);
}

TEST_CASE("run_experiment: empty subspace errors name the obstruction") {
    ExperimentConfig cfg;
    cfg.d = 2;
    cfg.s = HalfInt::from_twice(1);
    cfg.n = 3;
    cfg.p = 1;
    cfg.j0 = HalfInt(0);
    CHECK_THROWS_MATCHES(run_experiment(cfg), EmptySubspace,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("parity")));

    ExperimentConfig sud;
    sud.d = 3;
    sud.s = HalfInt(1);
    sud.n = 4;
    sud.p = 2;
    sud.trials = 10;
    CHECK_THROWS_MATCHES(run_experiment(sud), EmptySubspace,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("divisib")));
}

TEST_CASE("run_experiment on the SU(d) route") {
    ExperimentConfig cfg;
    cfg.d = 3;
    cfg.s = HalfInt(1);
    cfg.n = 3;
    cfg.p = 1;
    cfg.trials = 200;
    cfg.seed = 3;
    auto st = run_experiment(cfg);
    CHECK(st.dInv == 1);
    CHECK(st.exactMean == Catch::Approx(1.0 / 3.0));
    CHECK(st.etaMean == Catch::Approx(1.0)); // maximally entangled across 1|2
}

TEST_CASE("MC mean within 4 sigma for 50 seeds") {
    ExperimentConfig cfg;
    cfg.d = 2;
    cfg.s = HalfInt::from_twice(1);
    cfg.n = 4;
    cfg.p = 2;
    cfg.j0 = HalfInt(0);
    cfg.trials = 2000;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        cfg.seed = seed;
        auto st = run_experiment(cfg);
        const double se = std::sqrt(st.mcVar / static_cast<double>(st.samples));
        if (std::abs(st.mcMean - st.exactMean) <= 4 * se) ++hits;
    }
    CHECK(hits >= 49);
}
