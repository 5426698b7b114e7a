#include "invrep/entangle.hpp"

#include "invrep/montecarlo.hpp"
#include "invrep/su2rep.hpp"
#include "invrep/sudrep.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <numeric>
#include <random>

using namespace invrep;
using namespace invrep::entangle;
using numerics::CMatrix;
using numerics::Cplx;
using numerics::CVector;

namespace {

CMatrix random_basis(Eigen::Index dim, Eigen::Index k, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    CMatrix m(dim, k);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < k; ++j) m(i, j) = Cplx(g(rng), g(rng));
    Eigen::HouseholderQR<CMatrix> qr(m);
    return CMatrix(qr.householderQ()).leftCols(k);
}

CMatrix random_unitary(Eigen::Index n, std::uint32_t seed) { return random_basis(n, n, seed); }

// literal double sums from the definition, as an independent route
std::pair<double, double> swap_traces_literal(const CMatrix& basis, const BipartiteSplit& split) {
    const Eigen::Index k = basis.cols();
    double id2 = 0, swp = 0;
    for (Eigen::Index i = 0; i < k; ++i)
        for (Eigen::Index j = 0; j < k; ++j) {
            CVector bi = basis.col(i), bj = basis.col(j);
            const CMatrix mii = numerics::cross_reduce(bi, bi, split.dimA(), split.dimB());
            const CMatrix mjj = numerics::cross_reduce(bj, bj, split.dimA(), split.dimB());
            const CMatrix mij = numerics::cross_reduce(bi, bj, split.dimA(), split.dimB());
            const CMatrix mji = numerics::cross_reduce(bj, bi, split.dimA(), split.dimB());
            id2 += (mii * mjj).trace().real();
            swp += (mij * mji).trace().real();
        }
    return {id2, swp};
}

// dense oracle: build the four-copy vectors and apply W^A_(12) W^A_(34) W_pi
// by raw index manipulation
double fourth_moment_dense_oracle(const CMatrix& basis, const BipartiteSplit& split,
                                  std::vector<std::pair<std::array<int, 4>, double>>* perms = nullptr) {
    const Eigen::Index k = basis.cols();
    const Eigen::Index dA = split.dimA(), dB = split.dimB();
    const Eigen::Index dim = dA * dB;

    auto component = [&](const CVector& v, Eigen::Index a, Eigen::Index b) { return v(a * dB + b); };

    std::array<int, 4> img{0, 1, 2, 3};
    double total = 0;
    do {
        // tr((W12^A W34^A) W_pi) with W_pi acting on basis labels
        Cplx acc = 0;
        std::vector<Eigen::Index> idx(4);
        for (idx[0] = 0; idx[0] < k; ++idx[0])
            for (idx[1] = 0; idx[1] < k; ++idx[1])
                for (idx[2] = 0; idx[2] < k; ++idx[2])
                    for (idx[3] = 0; idx[3] < k; ++idx[3]) {
                        // bra = (i1,i2,i3,i4), ket = (i_{sigma(t)}) with the A
                        // parts of copies (1,2) and (3,4) swapped
                        Cplx term = 0;
                        // contract over a1,a2,a3,a4,b1..b4 via matrices:
                        // <b_{i_t}| has components conj(v_t[a_t, b_t]);
                        // ket contributes v_{sigma(t)}[a_{swap(t)}, b_t]
                        // do it with cross reductions to keep the oracle O(dA^2 dB^2)
                        const CVector v1 = basis.col(idx[0]), v2 = basis.col(idx[1]),
                                      v3 = basis.col(idx[2]), v4 = basis.col(idx[3]);
                        const CVector k1 = basis.col(idx[static_cast<std::size_t>(img[0])]),
                                      k2 = basis.col(idx[static_cast<std::size_t>(img[1])]),
                                      k3 = basis.col(idx[static_cast<std::size_t>(img[2])]),
                                      k4 = basis.col(idx[static_cast<std::size_t>(img[3])]);
                        Cplx t1 = 0, t2 = 0;
                        for (Eigen::Index a1 = 0; a1 < dA; ++a1)
                            for (Eigen::Index a2 = 0; a2 < dA; ++a2)
                                for (Eigen::Index b1 = 0; b1 < dB; ++b1)
                                    for (Eigen::Index b2 = 0; b2 < dB; ++b2)
                                        t1 += std::conj(component(v1, a1, b1) * component(v2, a2, b2)) *
                                              component(k1, a2, b1) * component(k2, a1, b2);
                        for (Eigen::Index a3 = 0; a3 < dA; ++a3)
                            for (Eigen::Index a4 = 0; a4 < dA; ++a4)
                                for (Eigen::Index b3 = 0; b3 < dB; ++b3)
                                    for (Eigen::Index b4 = 0; b4 < dB; ++b4)
                                        t2 += std::conj(component(v3, a3, b3) * component(v4, a4, b4)) *
                                              component(k3, a4, b3) * component(k4, a3, b4);
                        term = t1 * t2;
                        acc += term;
                    }
        if (perms) perms->push_back({img, acc.real()});
        total += acc.real();
    } while (std::next_permutation(img.begin(), img.end()));
    (void)dim;
    const double kk = static_cast<double>(k);
    return total / (kk * (kk + 1) * (kk + 2) * (kk + 3));
}

} // namespace

TEST_CASE("renyi2 and eta") {
    CMatrix pure = CMatrix::Zero(3, 3);
    pure(0, 0) = 1;
    CHECK(renyi2(pure) == Catch::Approx(0.0).margin(1e-14));
    CHECK(renyi2(CMatrix::Identity(5, 5) / 5.0) == Catch::Approx(std::log(5.0)));
    CHECK_THROWS_AS(renyi2(CMatrix::Zero(2, 3)), std::invalid_argument);

    CVector singlet = CVector::Zero(4);
    singlet(1) = 1 / std::sqrt(2.0);
    singlet(2) = -1 / std::sqrt(2.0);
    CHECK(renyi2(numerics::partial_trace_b(singlet, 2, 2)) == Catch::Approx(std::log(2.0)));
    CHECK(eta(singlet, {1, 1, 2}) == Catch::Approx(1.0));

    CVector prod = CVector::Zero(4);
    prod(0) = 1;
    CHECK(eta(prod, {1, 1, 2}) == Catch::Approx(0.0).margin(1e-14));
}

TEST_CASE("h_max") {
    CHECK(h_max(2, 2, 1) == Catch::Approx(std::log(3.0))); // spin 1: ln(2s+1)
    CHECK(h_max(3, 2, 2) == Catch::Approx(2 * std::log(6.0)));
    CHECK(h_max(4, 1, 0) == 0.0);
}

TEST_CASE("exact mean purity: examples and literal-sum agreement") {
    // 1-dim basis: mean purity is that state's purity
    const HalfInt h = HalfInt::from_twice(1);
    auto singlet = su2rep::near_invariant_basis(h, 2, 1, HalfInt(0));
    auto ps = exact_mean_purity(singlet.coeffs, {1, 1, 2});
    CHECK(ps.dInv == 1);
    CHECK(ps.meanPurity == Catch::Approx(0.5));

    // d=2 spin-1/2, n=4, p=2 on the j0=0 space
    auto inv4 = su2rep::near_invariant_basis(h, 4, 2, HalfInt(0));
    auto p4 = exact_mean_purity(inv4.coeffs, {2, 2, 2});
    auto [id2, swp] = swap_traces_literal(inv4.coeffs, {2, 2, 2});
    CHECK(p4.trW_id2 == Catch::Approx(id2));
    CHECK(p4.trW_swap == Catch::Approx(swp));
    CHECK(p4.meanPurity == Catch::Approx((id2 + swp) / 6.0));

    // random subspaces: literal sums match the contracted route
    for (std::uint32_t seed : {3u, 4u}) {
        CMatrix b = random_basis(16, 3, seed);
        const BipartiteSplit split{1, 1, 4};
        auto got = exact_mean_purity(b, split);
        auto [lid2, lswp] = swap_traces_literal(b, split);
        CHECK(got.trW_id2 == Catch::Approx(lid2));
        CHECK(got.trW_swap == Catch::Approx(lswp));
    }

    CHECK_THROWS_AS(exact_mean_purity(CMatrix::Zero(4, 0), BipartiteSplit{1, 1, 2}), EmptySubspace);
}

TEST_CASE("exact mean purity is basis independent") {
    const HalfInt one(1);
    auto basis = su2rep::near_invariant_basis(one, 3, 1, HalfInt(1));
    REQUIRE(basis.size() > 1);
    BipartiteSplit split{1, 2, 3};
    auto a = exact_mean_purity(basis.coeffs, split);
    const CMatrix rotated = basis.coeffs * random_unitary(basis.size(), 99);
    auto b = exact_mean_purity(rotated, split);
    CHECK(std::abs(a.meanPurity - b.meanPurity) < 1e-9);
    CHECK(std::abs(a.trW_id2 - b.trW_id2) < 1e-9);
    CHECK(std::abs(a.trW_swap - b.trW_swap) < 1e-9);
}

TEST_CASE("closed-form mean purity") {
    // d=3, s=1, p=1, q=2: the antisymmetric singlet, rho_A = I/3
    auto cf = closed_form_mean_purity(3, 1, 1, 2);
    CHECK(cf.dInv == 1);
    CHECK(cf.meanPurity == Catch::Approx(1.0 / 3.0));

    // agreement with the basis route wherever both are computable
    for (auto [d, s, n] : std::vector<std::array<long long, 3>>{
             {2, 1, 2}, {2, 1, 4}, {2, 1, 6}, {2, 2, 2}, {2, 2, 4}, {2, 3, 2}, {3, 1, 3}, {3, 1, 6},
             {3, 2, 3}, {4, 1, 4}, {3, 3, 2}}) {
        combinat::Partition ys(static_cast<std::size_t>(d), 0);
        ys[0] = s;
        const double dloc = to_double(combinat::weyl_dim(ys));
        if (std::pow(dloc, static_cast<double>(n)) > 1500) continue;
        CMatrix basis = sudrep::invariant_subspace(static_cast<int>(d), s, static_cast<int>(n));
        if (basis.cols() == 0) continue;
        for (int p = 1; p < n; ++p) {
            BipartiteSplit split{p, static_cast<int>(n) - p, static_cast<Eigen::Index>(dloc)};
            auto exact = exact_mean_purity(basis, split);
            auto closed = closed_form_mean_purity(static_cast<int>(d), s, p, static_cast<int>(n) - p);
            CHECK(exact.dInv == closed.dInv);
            CHECK(std::abs(exact.meanPurity - closed.meanPurity) < 1e-8);
        }
    }

    CHECK_THROWS_AS(closed_form_mean_purity(3, 1, 1, 1), EmptySubspace);
}

TEST_CASE("SU(2) CGC-sum route agrees with the basis and lambda-sum routes") {
    // j0 = 0 instances against the lambda route
    for (long long s = 1; s <= 4; ++s) {
        auto su2 = su2_swap_trace_sums(HalfInt(s), 2, 2, HalfInt(0));
        auto sud = closed_form_mean_purity(2, 2 * s, 2, 2);
        CHECK(Int(sud.dInv) == su2.dInv);
        CHECK(std::abs(to_double(su2.meanPurity) - sud.meanPurity) < 1e-10);
    }
    // j0 > 0 instances against the explicit basis
    const std::vector<std::array<long long, 4>> cases{{1, 4, 2, 2}, {1, 5, 2, 1}, {2, 3, 1, 2},
                                                      {1, 3, 1, 1}, {3, 3, 1, 1}};
    for (const auto& c : cases) {
        const HalfInt s = HalfInt::from_twice(c[0]);
        const int n = static_cast<int>(c[1]), p = static_cast<int>(c[2]);
        const HalfInt j0 = HalfInt::from_twice(c[3]);
        auto basis = su2rep::near_invariant_basis(s, n, p, j0);
        if (basis.size() == 0) continue;
        BipartiteSplit split{p, n - p, static_cast<Eigen::Index>(c[0] + 1)};
        auto exact = exact_mean_purity(basis.coeffs, split);
        auto sums = su2_swap_trace_sums(s, p, n - p, j0);
        CHECK(Int(exact.dInv) == sums.dInv);
        CHECK(std::abs(exact.trW_id2 - to_double(sums.trW_id2)) < 1e-8);
        CHECK(std::abs(exact.trW_swap - to_double(sums.trW_swap)) < 1e-8);
        CHECK(std::abs(exact.meanPurity - to_double(sums.meanPurity)) < 1e-8);
    }
}

TEST_CASE("second moment: 1-dim and inequality") {
    const HalfInt h = HalfInt::from_twice(1);
    auto singlet = su2rep::near_invariant_basis(h, 2, 1, HalfInt(0));
    auto fm = second_moment_purity(singlet.coeffs, {1, 1, 2});
    CHECK(fm.second_moment == Catch::Approx(0.25)); // (tr rho^2)^2 = (1/2)^2

    for (std::uint32_t seed : {11u, 12u, 13u}) {
        CMatrix b = random_basis(16, 3, seed);
        BipartiteSplit split{1, 1, 4};
        auto mean = exact_mean_purity(b, split);
        auto second = second_moment_purity(b, split);
        CHECK(second.second_moment >= mean.meanPurity * mean.meanPurity - 1e-10);
    }
}

TEST_CASE("second moment matches the dense permutation oracle") {
    // d=2 spin-1/2, n=4, p=2 on the invariant space (the spec's instance)
    const HalfInt h = HalfInt::from_twice(1);
    auto inv4 = su2rep::near_invariant_basis(h, 4, 2, HalfInt(0));
    BipartiteSplit split{2, 2, 2};
    std::vector<std::pair<std::array<int, 4>, double>> oraclePerms;
    const double oracle = fourth_moment_dense_oracle(inv4.coeffs, split, &oraclePerms);
    auto fm = second_moment_purity(inv4.coeffs, split);
    CHECK(fm.second_moment == Catch::Approx(oracle));
    REQUIRE(fm.perm_traces.size() == 24);
    for (std::size_t i = 0; i < 24; ++i) {
        CHECK(fm.perm_traces[i].first == oraclePerms[i].first);
        CHECK(fm.perm_traces[i].second == Catch::Approx(oraclePerms[i].second).margin(1e-9));
    }

    // with and without group labels; and on a random subspace
    std::vector<int> groups;
    for (const auto& l : inv4.labels) groups.push_back(l.bgroup);
    auto fmg = second_moment_purity(inv4.coeffs, split, groups);
    CHECK(fmg.second_moment == Catch::Approx(fm.second_moment).epsilon(1e-10));

    CMatrix rb = random_basis(16, 4, 77);
    auto rOracle = fourth_moment_dense_oracle(rb, split);
    auto rFast = second_moment_purity(rb, split);
    CHECK(rFast.second_moment == Catch::Approx(rOracle));
}

TEST_CASE("second moment fluctuation identity") {
    // ratio - 1 = (-4d-6)/((d+2)(d+3)) + [sum over S4 minus S2xS2] / (d^{4}) / mean^2
    const HalfInt one(1);
    auto basis = su2rep::near_invariant_basis(one, 4, 2, HalfInt(0));
    BipartiteSplit split{2, 2, 3};
    auto mean = exact_mean_purity(basis.coeffs, split);
    std::vector<int> groups;
    for (const auto& l : basis.labels) groups.push_back(l.bgroup);
    auto fm = second_moment_purity(basis.coeffs, split, groups);
    const double d = static_cast<double>(mean.dInv);
    double rest = 0;
    for (const auto& [img, val] : fm.perm_traces) {
        const bool block = (img[0] == 0 || img[0] == 1) && (img[1] == 0 || img[1] == 1);
        if (!block) rest += val;
    }
    const double lhs = fm.second_moment / (mean.meanPurity * mean.meanPurity) - 1.0;
    const double rhs = (-4 * d - 6) / ((d + 2) * (d + 3)) +
                       rest / (d * (d + 1) * (d + 2) * (d + 3)) /
                           (mean.meanPurity * mean.meanPurity);
    CHECK(lhs == Catch::Approx(rhs).margin(1e-10));
}

TEST_CASE("werner coefficients") {
    const CMatrix i4 = CMatrix::Identity(4, 4);
    CMatrix w = CMatrix::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) w(j * 2 + i, i * 2 + j) = 1;

    auto [c1, c2] = werner_coeffs(i4, 2);
    CHECK(std::abs(c1 - 1.0) < 1e-12);
    CHECK(std::abs(c2) < 1e-12);

    auto [d1, d2] = werner_coeffs(w, 2);
    CHECK(std::abs(d1) < 1e-12);
    CHECK(std::abs(d2 - 1.0) < 1e-12);

    CMatrix p00 = CMatrix::Zero(4, 4);
    p00(0, 0) = 1; // |00><00|: twirl = (1 + W)/6
    auto [e1, e2] = werner_coeffs(p00, 2);
    CHECK(std::abs(e1 - 1.0 / 6) < 1e-12);
    CHECK(std::abs(e2 - 1.0 / 6) < 1e-12);

    CHECK_THROWS_AS(werner_coeffs(i4, 1), std::invalid_argument);
}

TEST_CASE("moment operator") {
    CHECK((moment_operator(1, 3) - CMatrix::Identity(3, 3) / 3.0).norm() < 1e-14);

    const int D = 3;
    CMatrix w = CMatrix::Zero(9, 9);
    for (int i = 0; i < D; ++i)
        for (int j = 0; j < D; ++j) w(j * D + i, i * D + j) = 1;
    const CMatrix expect = (CMatrix::Identity(9, 9) + w) / (D * (D + 1.0));
    CHECK((moment_operator(2, D) - expect).norm() < 1e-13);

    for (auto [n, dd] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {3, 3}, {4, 2}}) {
        const CMatrix m = moment_operator(n, dd);
        CHECK(std::abs(m.trace().real() - 1.0) < 1e-12); // rising-factorial normalization
        Eigen::SelfAdjointEigenSolver<CMatrix> es(m);
        CHECK(es.eigenvalues().minCoeff() > -1e-12); // PSD
    }
}
