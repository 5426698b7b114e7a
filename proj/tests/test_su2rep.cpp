#include "invrep/su2rep.hpp"

#include "invrep/combinat.hpp"
#include "invrep/numerics.hpp"
#include "invrep/sudrep.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <map>

using namespace invrep;
using namespace invrep::su2rep;
using numerics::CMatrix;
using numerics::CVector;
using numerics::SparseOp;

namespace {

SparseOp sparse_from_dense(const CMatrix& d) {
    SparseOp op;
    op.dim = d.rows();
    for (Eigen::Index r = 0; r < d.rows(); ++r)
        for (Eigen::Index c = 0; c < d.cols(); ++c)
            if (d(r, c) != 0.0) op.add(r, c, d(r, c));
    return op;
}

// collective one-site operator on n factors, built independently via kron
CMatrix collective_dense(const CMatrix& op, int n) {
    const Eigen::Index d = op.rows();
    CMatrix total;
    for (int t = 0; t < n; ++t) {
        CMatrix term = CMatrix::Identity(1, 1);
        for (int u = 0; u < n; ++u)
            term = numerics::kron(term, u == t ? op : CMatrix::Identity(d, d));
        total = t == 0 ? term : CMatrix(total + term);
    }
    return total;
}

} // namespace

TEST_CASE("spin operators") {
    auto half = spin_ops(HalfInt::from_twice(1));
    CHECK(half.jz(0, 0) == numerics::Cplx(0.5, 0));
    CHECK(half.jz(1, 1) == numerics::Cplx(-0.5, 0));
    CHECK(half.jplus(0, 1) == numerics::Cplx(1.0, 0)); // J+|1/2,-1/2> = |1/2,1/2>

    for (long long jt : {1LL, 2LL, 3LL, 5LL, 9LL}) {
        auto s = spin_ops(HalfInt::from_twice(jt));
        const CMatrix comm = s.jplus * s.jminus - s.jminus * s.jplus;
        CHECK((comm - 2.0 * s.jz).norm() < 1e-12);
        CHECK((s.jz * s.jplus - s.jplus * s.jz - s.jplus).norm() < 1e-12);
        CHECK((s.jminus - s.jplus.adjoint()).norm() == 0.0);
    }
}

TEST_CASE("Racah CGC values") {
    const HalfInt h = HalfInt::from_twice(1);
    // m mismatch
    CHECK(racah_cgc(h, h, HalfInt(1), h, h, HalfInt(0)) == 0.0);
    // stretched
    for (auto [j1t, j2t] : std::vector<std::pair<long long, long long>>{{1, 1}, {2, 3}, {4, 2}}) {
        const HalfInt j1 = HalfInt::from_twice(j1t), j2 = HalfInt::from_twice(j2t);
        CHECK(racah_cgc(j1, j2, j1 + j2, j1, j2, j1 + j2) == Catch::Approx(1.0));
    }
    // singlet coefficient 1/sqrt(2) with Condon-Shortley sign
    CHECK(racah_cgc(h, h, HalfInt(0), h, -h, HalfInt(0)) == Catch::Approx(1 / std::sqrt(2.0)));
    CHECK(racah_cgc(h, h, HalfInt(0), -h, h, HalfInt(0)) == Catch::Approx(-1 / std::sqrt(2.0)));
    // closed form for the singlet column: C^{j,j,0}_{m,-m,0} = (-1)^{j-m}/sqrt(2j+1)
    for (long long jt : {2LL, 3LL, 7LL}) {
        const HalfInt j = HalfInt::from_twice(jt);
        for (long long mt = -jt; mt <= jt; mt += 2) {
            const HalfInt m = HalfInt::from_twice(mt);
            const double expect = (((jt - mt) / 2) % 2 == 0 ? 1.0 : -1.0) / std::sqrt(jt + 1.0);
            CHECK(racah_cgc(j, j, HalfInt(0), m, -m, HalfInt(0)) == Catch::Approx(expect));
        }
    }
}

TEST_CASE("Racah CGC orthogonality for j1, j2 <= 4") {
    for (long long j1t = 0; j1t <= 8; ++j1t)
        for (long long j2t = 0; j2t <= 8; ++j2t) {
            const HalfInt j1 = HalfInt::from_twice(j1t), j2 = HalfInt::from_twice(j2t);
            for (long long jt = std::abs(j1t - j2t); jt <= j1t + j2t; jt += 2)
                for (long long jpt = std::abs(j1t - j2t); jpt <= j1t + j2t; jpt += 2)
                    for (long long mt = -std::min(jt, jpt); mt <= std::min(jt, jpt); mt += 2) {
                        double acc = 0;
                        for (long long m1t = -j1t; m1t <= j1t; m1t += 2) {
                            const HalfInt m1 = HalfInt::from_twice(m1t);
                            const HalfInt m2 = HalfInt::from_twice(mt - m1t);
                            acc += racah_cgc(j1, j2, HalfInt::from_twice(jt), m1, m2,
                                             HalfInt::from_twice(mt)) *
                                   racah_cgc(j1, j2, HalfInt::from_twice(jpt), m1, m2,
                                             HalfInt::from_twice(mt));
                        }
                        CHECK(acc == Catch::Approx(jt == jpt ? 1.0 : 0.0).margin(1e-12));
                    }
        }
}

TEST_CASE("exact CGC stays finite at large spins") {
    // j1 = 40 factorials overflow doubles; the exact route must not care
    const HalfInt j1(40), j2(40);
    const double c = racah_cgc(j1, j2, HalfInt(0), HalfInt(7), HalfInt(-7), HalfInt(0));
    CHECK(std::abs(c) == Catch::Approx(1 / std::sqrt(81.0)));
}

TEST_CASE("coupled chain") {
    const HalfInt h = HalfInt::from_twice(1);
    auto b1 = couple_chain(h, 1);
    REQUIRE(b1.chains.size() == 1);
    CHECK((b1.matrix() - CMatrix::Identity(2, 2)).norm() == 0.0);

    auto b2 = couple_chain(h, 2);
    bool found = false;
    for (const auto& c : b2.chains)
        if (c.j == HalfInt(0)) {
            found = true;
            CVector v = c.cols.col(0); // singlet (|01> - |10>)/sqrt(2) up to sign
            CHECK(std::abs(v(1) - 1 / std::sqrt(2.0)) < 1e-12);
            CHECK(std::abs(v(2) + 1 / std::sqrt(2.0)) < 1e-12);
        }
    CHECK(found);

    for (auto [st, n] : std::vector<std::pair<long long, int>>{{1, 3}, {1, 4}, {2, 3}, {3, 2}}) {
        const HalfInt s = HalfInt::from_twice(st);
        auto basis = couple_chain(s, n);
        std::map<long long, int> counts;
        for (const auto& c : basis.chains) ++counts[c.j.twice];
        for (const auto& [jt, cnt] : counts)
            CHECK(Int(cnt) == combinat::mult_su2(n, HalfInt::from_twice(jt), s));

        const CMatrix m = basis.matrix();
        REQUIRE(m.cols() == m.rows());
        CHECK((m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols())).norm() < 1e-10);

        auto ops = spin_ops(s);
        const CMatrix jzc = collective_dense(ops.jz, n);
        const CMatrix jpc = collective_dense(ops.jplus, n);
        const CMatrix jmc = collective_dense(ops.jminus, n);
        const CMatrix jsq = jmc * jpc + jzc * jzc + jzc;
        Eigen::Index at = 0;
        for (const auto& c : basis.chains) {
            for (HalfInt mq = c.j; mq >= -c.j; mq -= HalfInt(1)) {
                const CVector v = m.col(at++);
                CHECK((jzc * v - mq.value() * v).norm() < 1e-10);
                CHECK((jsq * v - c.j.value() * (c.j.value() + 1) * v).norm() < 1e-9);
            }
        }
    }

    // multiplicity example: s=1/2, n=3 -> {1/2: 2, 3/2: 1}
    auto b3 = couple_chain(h, 3);
    std::map<long long, int> mult;
    for (const auto& c : b3.chains) ++mult[c.j.twice];
    CHECK(mult[1] == 2);
    CHECK(mult[3] == 1);
}

TEST_CASE("near-invariant basis: examples") {
    const HalfInt h = HalfInt::from_twice(1);

    auto singlet = near_invariant_basis(h, 2, 1, HalfInt(0));
    REQUIRE(singlet.size() == 1);
    CHECK(std::abs(std::abs(singlet.coeffs(1, 0)) - 1 / std::sqrt(2.0)) < 1e-12);

    auto empty = near_invariant_basis(h, 3, 1, HalfInt(0));
    CHECK(empty.size() == 0); // odd number of half-integer spins

    auto two = near_invariant_basis(h, 4, 2, HalfInt(0));
    CHECK(two.size() == 2);
    CHECK(Int(2) == combinat::mult_su2(4, HalfInt(0), h));
}

TEST_CASE("near-invariant basis: dimension formula and orthonormality") {
    const std::vector<std::array<long long, 4>> cases{{1, 4, 2, 0}, {1, 4, 2, 2}, {1, 5, 2, 1},
                                                      {2, 3, 1, 0}, {2, 3, 1, 2}, {3, 3, 2, 1},
                                                      {1, 6, 3, 0}};
    for (const auto& c : cases) {
        const HalfInt s = HalfInt::from_twice(c[0]);
        const int n = static_cast<int>(c[1]);
        const int p = static_cast<int>(c[2]);
        const HalfInt j0 = HalfInt::from_twice(c[3]);
        auto basis = near_invariant_basis(s, n, p, j0);
        CHECK(Int(basis.size()) == near_invariant_dim(s, n, p, j0));
        if (basis.size() > 0) {
            const CMatrix& m = basis.coeffs;
            CHECK((m.adjoint() * m - CMatrix::Identity(m.cols(), m.cols())).norm() < 1e-10);
        }
    }
}

TEST_CASE("near-invariant basis: invariance and J^2 window") {
    const std::vector<std::array<long long, 4>> cases{{1, 4, 2, 0}, {1, 4, 1, 2}, {2, 3, 1, 2},
                                                      {1, 5, 2, 1}};
    for (const auto& c : cases) {
        const HalfInt s = HalfInt::from_twice(c[0]);
        const int n = static_cast<int>(c[1]);
        const int p = static_cast<int>(c[2]);
        const HalfInt j0 = HalfInt::from_twice(c[3]);
        auto basis = near_invariant_basis(s, n, p, j0);
        if (basis.size() == 0) continue;
        auto ops = spin_ops(s);
        const CMatrix jzc = collective_dense(ops.jz, n);
        const CMatrix jpc = collective_dense(ops.jplus, n);
        const CMatrix jmc = collective_dense(ops.jminus, n);
        const CMatrix jsq = jmc * jpc + jzc * jzc + jzc;

        if (c[3] == 0) {
            CHECK((jzc * basis.coeffs).norm() < 1e-9);
            CHECK((jpc * basis.coeffs).norm() < 1e-9);
            CHECK((jmc * basis.coeffs).norm() < 1e-9);
        } else {
            const CMatrix r = basis.coeffs.adjoint() * jsq * basis.coeffs;
            Eigen::SelfAdjointEigenSolver<CMatrix> es(r);
            CHECK(es.eigenvalues().maxCoeff() <= j0.value() * (j0.value() + 1) + 1e-9);
            // the span contains every state with J^2 below the cutoff
            Eigen::SelfAdjointEigenSolver<CMatrix> full(jsq);
            Eigen::Index below = 0;
            for (Eigen::Index i = 0; i < full.eigenvalues().size(); ++i)
                if (full.eigenvalues()(i) <= j0.value() * (j0.value() + 1) + 1e-6) ++below;
            CHECK(below == basis.size());
        }
    }
}

TEST_CASE("near-invariant basis at j0=0 equals the joint-kernel oracle") {
    std::vector<std::array<long long, 3>> cases;
    for (long long st = 1; st <= 6; ++st)
        for (int n = 2; n <= 10; ++n) {
            const double dim = std::pow(static_cast<double>(st) + 1.0, n);
            if (dim > 1024 || ((n * st) % 2) != 0) continue;
            cases.push_back({st, n, n / 2});
        }
    cases.push_back({1, 12, 6}); // (2s+1)^n = 4096 spot check

    for (const auto& c : cases) {
        const HalfInt s = HalfInt::from_twice(c[0]);
        const int n = static_cast<int>(c[1]);
        const int p = static_cast<int>(c[2]);
        auto basis = near_invariant_basis(s, n, p, HalfInt(0));

        auto ops = spin_ops(s);
        std::vector<SparseOp> coll{sudrep::collective(sparse_from_dense(ops.jz), n),
                                   sudrep::collective(sparse_from_dense(ops.jplus), n),
                                   sudrep::collective(sparse_from_dense(ops.jminus), n)};
        CMatrix oracle = numerics::null_space_orthonormal(coll, basis.coeffs.rows());
        REQUIRE(oracle.cols() == basis.size());
        if (basis.size() == 0) continue;
        const CMatrix resid = oracle - basis.coeffs * (basis.coeffs.adjoint() * oracle);
        CHECK(resid.norm() < 1e-8);
    }
}
