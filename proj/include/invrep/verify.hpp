#pragma once

#include "invrep/asymptotics.hpp"
#include "invrep/combinat.hpp"
#include "invrep/entangle.hpp"
#include "invrep/montecarlo.hpp"
#include "invrep/numerics.hpp"
#include "invrep/sudrep.hpp"

#include <Eigen/SparseCore>

#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace invrep::verify {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

using Suite = std::vector<CheckResult>;

namespace detail {

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

inline CheckResult from_report(const asymptotics::ScalingReport& r) {
    std::string d = "slope " + fmt(r.slope) + " vs target " + fmt(r.target) + " (tol " +
                    fmt(r.tolerance) + ")";
    if (!r.detail.empty()) d += "; " + r.detail;
    if (!r.asserted) d += " [not asserted: outside hypothesis]";
    return {r.name, r.pass, d};
}

// Canonical SU(d) labels (last part zero) with dim <= dimCap, complete:
// enumerate consecutive gaps g_i = lam_i - lam_{i+1}; the (d-1)-row choices of
// a GT pattern alone number prod(g_i + 1), so prod(g_i + 1) <= dim prunes safely.
inline std::vector<combinat::Partition> partitions_with_dim_at_most(int d, long long dimCap) {
    std::vector<combinat::Partition> out;
    std::vector<long long> gaps(static_cast<std::size_t>(d - 1), 0);
    auto rec = [&](auto&& self, int slot, long long prodSoFar) -> void {
        if (slot == d - 1) {
            combinat::Partition lam(static_cast<std::size_t>(d), 0);
            for (int i = d - 2; i >= 0; --i)
                lam[static_cast<std::size_t>(i)] = lam[static_cast<std::size_t>(i + 1)] + gaps[static_cast<std::size_t>(i)];
            if (combinat::weyl_dim(lam) <= Int(dimCap)) out.push_back(lam);
            return;
        }
        for (long long g = 0; prodSoFar * (g + 1) <= dimCap; ++g) {
            gaps[static_cast<std::size_t>(slot)] = g;
            self(self, slot + 1, prodSoFar * (g + 1));
        }
        gaps[static_cast<std::size_t>(slot)] = 0;
    };
    rec(rec, 0, 1);
    return out;
}

} // namespace detail

// Eq.-level exactness of the alternating-sum identity for all 1 <= t,r <= 20.
inline Suite suite_f_identity() {
    Suite s;
    bool ok = true;
    std::string bad;
    for (long long t = 1; t <= 20; ++t)
        for (long long r = 1; r <= 20; ++r) {
            auto f = combinat::f_identity(t, r);
            if (!f.equal()) {
                ok = false;
                bad = "t=" + std::to_string(t) + ", r=" + std::to_string(r);
            }
        }
    s.push_back({"f_identity exact for 1<=t,r<=20", ok, ok ? "all 400 pairs equal" : ("first failure " + bad)});
    return s;
}

// gl(d) commutation relations and Casimir scalarity on every irrep with
// dim <= dimCap, d <= dMax.
inline Suite suite_commutators(int dMax = 4, long long dimCap = 500) {
    Suite s;
    using SpMat = Eigen::SparseMatrix<numerics::Cplx>;
    for (int d = 2; d <= dMax; ++d) {
        double worstComm = 0, worstCas = 0;
        int count = 0;
        for (const auto& lam : detail::partitions_with_dim_at_most(d, dimCap)) {
            const auto rep = sudrep::irrep_action(lam);
            const Eigen::Index dim = rep.dim();
            std::vector<SpMat> up, dn, dg;
            for (const auto& o : rep.raising) up.push_back(o.to_eigen());
            for (const auto& o : rep.lowering) dn.push_back(o.to_eigen());
            for (const auto& o : rep.diag) dg.push_back(o.to_eigen());
            for (int a = 0; a < d - 1; ++a)
                for (int b = 0; b < d - 1; ++b) {
                    SpMat comm = (up[static_cast<std::size_t>(a)] * dn[static_cast<std::size_t>(b)] -
                                  dn[static_cast<std::size_t>(b)] * up[static_cast<std::size_t>(a)]);
                    if (a == b) comm = comm - (dg[static_cast<std::size_t>(a)] - dg[static_cast<std::size_t>(a + 1)]);
                    worstComm = std::max(worstComm, comm.norm());
                }
            // all E^{ij} via nested commutators, then C2 = sum E^{ij} E^{ji}
            std::vector<std::vector<SpMat>> E(static_cast<std::size_t>(d),
                                              std::vector<SpMat>(static_cast<std::size_t>(d)));
            for (int l = 0; l < d; ++l) E[static_cast<std::size_t>(l)][static_cast<std::size_t>(l)] = dg[static_cast<std::size_t>(l)];
            for (int l = 0; l < d - 1; ++l) {
                E[static_cast<std::size_t>(l)][static_cast<std::size_t>(l + 1)] = up[static_cast<std::size_t>(l)];
                E[static_cast<std::size_t>(l + 1)][static_cast<std::size_t>(l)] = dn[static_cast<std::size_t>(l)];
            }
            for (int gap = 2; gap <= d - 1; ++gap)
                for (int i = 0; i + gap <= d - 1; ++i) {
                    const int j = i + gap;
                    E[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                        SpMat(E[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)] * E[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(j)] -
                              E[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(j)] * E[static_cast<std::size_t>(i)][static_cast<std::size_t>(j - 1)]);
                    E[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] =
                        SpMat(E[static_cast<std::size_t>(j)][static_cast<std::size_t>(j - 1)] * E[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i)] -
                              E[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(i)] * E[static_cast<std::size_t>(j)][static_cast<std::size_t>(j - 1)]);
                }
            SpMat c2(dim, dim);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j)
                    c2 = c2 + SpMat(E[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * E[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
            // expected scalar <lam, lam + 2 rho>
            double expect = 0;
            for (int i = 0; i < d; ++i) {
                const double li = static_cast<double>(lam[static_cast<std::size_t>(i)]);
                expect += li * (li + d + 1 - 2 * (i + 1));
            }
            numerics::CMatrix dense = numerics::CMatrix(c2) - expect * numerics::CMatrix::Identity(dim, dim);
            worstCas = std::max(worstCas, dense.cwiseAbs().maxCoeff());
            ++count;
        }
        s.push_back({"gl(" + std::to_string(d) + ") commutators on " + std::to_string(count) + " irreps",
                     worstComm <= 1e-9, "max residual " + detail::fmt(worstComm)});
        s.push_back({"gl(" + std::to_string(d) + ") Casimir scalar on " + std::to_string(count) + " irreps",
                     worstCas <= 1e-8, "max diag spread " + detail::fmt(worstCas)});
    }
    return s;
}

// Duality bookkeeping: involution, GT-dual uniqueness, divisibility zeros.
inline Suite suite_duality() {
    Suite s;
    bool invOk = true, gtOk = true, divOk = true;
    for (int d = 2; d <= 4; ++d)
        for (long long total = 0; total <= 6; ++total)
            for (const auto& lam : combinat::partitions(total, d)) {
                for (long long other = 0; other <= 8; ++other) {
                    auto mu = combinat::dual_partition(lam, other);
                    if (!mu) continue;
                    if (!combinat::is_dual(lam, *mu)) invOk = false;
                    auto back = combinat::dual_partition(*mu, total);
                    if (!back || *back != lam) invOk = false;
                    // every pattern has exactly one dual in GT(mu)
                    if (combinat::weyl_dim(lam) <= 20 && combinat::weyl_dim(*mu) <= 400) {
                        for (const auto& p : combinat::gt_patterns(lam)) {
                            auto dq = combinat::dual_gt_pattern(p, *mu);
                            int found = 0;
                            for (const auto& q : combinat::gt_patterns(*mu))
                                if (combinat::is_dual_gt(p, q)) {
                                    ++found;
                                    if (!dq || *dq != q) gtOk = false;
                                }
                            if (found != 1) gtOk = false;
                            if (dq && !combinat::is_dual_gt(*dq, p)) gtOk = false; // symmetry
                        }
                    }
                }
            }
    for (int d = 2; d <= 5; ++d)
        for (long long s1 = 1; s1 <= 4; ++s1)
            for (int p = 1; p <= 3; ++p)
                for (int q = p; q <= 3; ++q)
                    if (((p + q) * s1) % d != 0 && combinat::d_inv_count(d, s1, p, q) != 0) divOk = false;
    s.push_back({"dual_partition involution", invOk, ""});
    s.push_back({"dual GT pattern uniqueness and symmetry", gtOk, ""});
    s.push_back({"d_inv_count vanishes without divisibility", divOk, ""});
    return s;
}

// Lemma 6 window: exact bounds and the s^{n-2} growth of the max multiplicity.
inline Suite suite_lemma6() {
    Suite s;
    const std::vector<HalfInt> gridInt{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    std::vector<HalfInt> gridHalf;
    for (long long t = 2; t <= 20; t += 3) gridHalf.push_back(HalfInt::from_twice(t));
    s.push_back(detail::from_report(asymptotics::check_mult_window(2, gridInt)));
    s.push_back(detail::from_report(asymptotics::check_mult_window(3, gridInt)));
    s.push_back(detail::from_report(asymptotics::check_mult_window(4, gridInt)));
    s.push_back(detail::from_report(asymptotics::check_mult_window(5, {1, 2, 3, 4, 5, 6, 7, 8})));
    s.push_back(detail::from_report(asymptotics::check_mult_window(4, gridHalf)));
    return s;
}

// Lemma 7 CGC asymptotics plus the Lemma 8 power-sum slope.
inline Suite suite_lemma7() {
    Suite s;
    auto grid = [](long long lo, long long hi, long long step) {
        std::vector<HalfInt> g;
        for (long long v = lo; v <= hi; v += step) g.push_back(HalfInt(v));
        return g;
    };
    s.push_back(detail::from_report(asymptotics::check_cgc_asymptotics(HalfInt(0), HalfInt(0), grid(5, 40, 5))));
    s.push_back(detail::from_report(asymptotics::check_cgc_asymptotics(HalfInt(1), HalfInt(0), grid(5, 60, 5))));
    s.push_back(detail::from_report(asymptotics::check_cgc_asymptotics(HalfInt(1), HalfInt(1), grid(5, 40, 5))));
    s.push_back(detail::from_report(asymptotics::check_cgc_asymptotics(HalfInt(2), HalfInt(1), grid(6, 30, 4))));
    s.push_back(detail::from_report(asymptotics::check_cgc_upper_bound(HalfInt(1), HalfInt(1), HalfInt(0), grid(5, 30, 5))));
    s.push_back(detail::from_report(asymptotics::check_power_sum_slope(1, 1, {16, 32, 64, 128, 256})));
    s.push_back(detail::from_report(asymptotics::check_power_sum_slope(2, 3, {16, 32, 64, 128, 256})));
    s.push_back(detail::from_report(asymptotics::check_power_sum_slope(0, 2, {16, 32, 64, 128, 256})));
    return s;
}

// Lemma 9: dual-pair singlet support and coefficient modulus, every dual pair
// with dim V_lam <= dimCap and d <= dMax (canonical labels).
inline Suite suite_lemma9(int dMax = 4, long long dimCap = 50) {
    Suite s;
    int pairs = 0;
    bool ok = true;
    std::string bad;
    double worst = 0;
    for (int d = 2; d <= dMax && ok; ++d) {
        for (const auto& lam : detail::partitions_with_dim_at_most(d, dimCap)) {
            const long long canonicalTotal = static_cast<long long>(d) * lam[0] - combinat::partition_total(lam);
            auto mu = combinat::dual_partition(lam, canonicalTotal);
            if (!mu) continue;
            const auto v = sudrep::singlet_in_pair(lam, *mu);
            const auto basisL = combinat::gt_patterns(lam);
            const auto basisM = combinat::gt_patterns(*mu);
            const double expect = 1.0 / std::sqrt(to_double(combinat::weyl_dim(lam)));
            for (std::size_t a = 0; a < basisL.size(); ++a)
                for (std::size_t b = 0; b < basisM.size(); ++b) {
                    const double mag = std::abs(v(static_cast<Eigen::Index>(a * basisM.size() + b)));
                    const bool dual = combinat::is_dual_gt(basisL[a], basisM[b]);
                    if (dual) {
                        worst = std::max(worst, std::abs(mag - expect));
                        if (std::abs(mag - expect) > 1e-9) ok = false;
                    } else if (mag > 1e-12) {
                        ok = false;
                    }
                    if (!ok && bad.empty()) bad = "lam top= " + std::to_string(lam[0]) + " d=" + std::to_string(d);
                }
            ++pairs;
        }
    }
    s.push_back({"singlet coefficients |C| = dim^{-1/2} exactly on dual GT pairs (" +
                     std::to_string(pairs) + " dual pairs)",
                 ok, ok ? "max |C|-deviation " + detail::fmt(worst) : bad});
    return s;
}

inline Suite suite_lemma10_11() {
    Suite s;
    {
        // Lemma 10(iii) bounded case + Lemma 11(ii)/(iii) boundary (target 3)
        auto r = asymptotics::check_mult_exponents_sud(3, 2, 4, {6, 12, 18, 24, 30, 36});
        s.push_back(detail::from_report(r.primal));
        s.push_back(detail::from_report(r.dual));
    }
    {
        // Lemma 10(ii): (d-1)(d-2)/2 + (d-1)(p-d) = 2
        auto r = asymptotics::check_mult_exponents_sud(2, 4, 4, {4, 8, 12, 16, 20, 24, 28, 32});
        s.push_back(detail::from_report(r.primal));
        s.push_back(detail::from_report(r.dual));
    }
    {
        // Lemma 10(i) at p = d (target 1) and Lemma 11(i) (target 1)
        auto r = asymptotics::check_mult_exponents_sud(3, 3, 3, {6, 12, 18, 24, 30, 36});
        s.push_back(detail::from_report(r.primal));
        s.push_back(detail::from_report(r.dual));
    }
    {
        // t <= 0: dual side must vanish identically
        auto r = asymptotics::check_mult_exponents_sud(6, 2, 3, {6, 12});
        s.push_back(detail::from_report(r.dual));
    }
    return s;
}

inline Suite suite_purity_scaling() {
    Suite s;
    s.push_back(detail::from_report(
        asymptotics::check_purity_scaling(2, 2, 3, {1, 2, 3, 4, 5, 6, 7, 8})));
    s.push_back(detail::from_report(
        asymptotics::check_purity_scaling(3, 3, 3, {1, 2, 3, 4, 5, 6})));
    // route agreement at j0=0 on shared instances
    bool agree = true;
    double worst = 0;
    for (long long spin = 1; spin <= 4; ++spin) {
        auto su2 = entangle::su2_swap_trace_sums(HalfInt(spin), 2, 2, HalfInt(0));
        auto sud = entangle::closed_form_mean_purity(2, 2 * spin, 2, 2);
        const double diff = std::abs(to_double(su2.meanPurity) - sud.meanPurity);
        worst = std::max(worst, diff);
        if (diff > 1e-8) agree = false;
    }
    s.push_back({"SU(2) CGC-sum route = SU(d=2) lambda-sum route", agree, "max diff " + detail::fmt(worst)});
    return s;
}

inline Suite suite_fluctuation() {
    Suite s;
    std::vector<HalfInt> spins{HalfInt::from_twice(1), HalfInt::from_twice(3), HalfInt::from_twice(5)};
    s.push_back(detail::from_report(asymptotics::check_fluctuation_decay(2, 2, 3, spins)));
    // dInv = 1 instance: deterministic state, ratio - 1 = 0 exactly
    {
        montecarlo::ExperimentConfig cfg;
        cfg.d = 2;
        cfg.s = HalfInt::from_twice(1);
        cfg.n = 2;
        cfg.p = 1;
        cfg.j0 = HalfInt(0);
        auto sub = montecarlo::build_subspace(cfg);
        auto mean = entangle::exact_mean_purity(sub.basis, sub.split);
        auto second = entangle::second_moment_purity(sub.basis, sub.split, sub.bgroups);
        const double ratio = second.second_moment / (mean.meanPurity * mean.meanPurity) - 1.0;
        s.push_back({"dInv=1 instance has zero fluctuation", mean.dInv == 1 && std::abs(ratio) <= 1e-10,
                     "ratio-1 = " + detail::fmt(ratio)});
    }
    // outside Proposition 3's hypothesis: emitted but not asserted
    s.push_back(detail::from_report(
        asymptotics::check_fluctuation_decay(2, 2, 2, {HalfInt::from_twice(1), HalfInt::from_twice(2),
                                                       HalfInt::from_twice(3), HalfInt::from_twice(4)})));
    return s;
}

// Haar Monte Carlo against the two twirling identities.
inline Suite suite_twirl(long long wernerSamples = 10000, long long momentSamples = 100000) {
    Suite s;
    using numerics::CMatrix;
    using numerics::Cplx;

    auto haar_unitary = [](int dim, montecarlo::RngStream& rng) {
        CMatrix g(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) g(i, j) = Cplx(rng.gaussian(), rng.gaussian());
        Eigen::HouseholderQR<CMatrix> qr(g);
        CMatrix q = qr.householderQ();
        CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int i = 0; i < dim; ++i) {
            const Cplx d = r(i, i);
            q.col(i) *= (d == Cplx(0) ? Cplx(1) : d / std::abs(d));
        }
        return q;
    };

    for (int d : {2, 3}) {
        montecarlo::RngStream rng = montecarlo::RngStream::substream(20220504, static_cast<std::uint64_t>(d));
        const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
        CMatrix x(dd, dd); // random Hermitian
        for (Eigen::Index i = 0; i < dd; ++i)
            for (Eigen::Index j = 0; j < dd; ++j) x(i, j) = Cplx(rng.gaussian(), rng.gaussian());
        x = CMatrix((x + x.adjoint()) / 2);
        CMatrix acc = CMatrix::Zero(dd, dd);
        for (long long t = 0; t < wernerSamples; ++t) {
            CMatrix u = haar_unitary(d, rng);
            CMatrix uu = numerics::kron(u, u);
            acc += uu * x * uu.adjoint();
        }
        acc /= static_cast<double>(wernerSamples);
        auto [c1, c2] = entangle::werner_coeffs(x, d);
        CMatrix w = CMatrix::Zero(dd, dd);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) w(j * d + i, i * d + j) = 1.0;
        const double err = (acc - (c1 * CMatrix::Identity(dd, dd) + c2 * w)).norm();
        s.push_back({"werner_coeffs vs Haar twirl Monte Carlo (d=" + std::to_string(d) + ")",
                     err <= 5e-2, "Frobenius error " + detail::fmt(err)});
    }

    {
        const int D = 3, n = 3;
        montecarlo::RngStream rng = montecarlo::RngStream::substream(20210825, 3);
        const Eigen::Index full = 27;
        CMatrix acc = CMatrix::Zero(full, full);
        for (long long t = 0; t < momentSamples; ++t) {
            numerics::CVector phi(D);
            for (int i = 0; i < D; ++i) phi(i) = Cplx(rng.gaussian(), rng.gaussian());
            phi /= phi.norm();
            numerics::CVector p3 = numerics::kron_vec(numerics::kron_vec(phi, phi), phi);
            acc.noalias() += p3 * p3.adjoint();
        }
        acc /= static_cast<double>(momentSamples);
        const double err = (acc - entangle::moment_operator(n, D)).norm();
        s.push_back({"moment_operator(3,3) vs state-moment Monte Carlo", err <= 5e-2,
                     "Frobenius error " + detail::fmt(err)});
    }
    return s;
}

inline const std::map<std::string, std::function<Suite()>>& suites() {
    static const std::map<std::string, std::function<Suite()>> table{
        {"commutators", [] { return suite_commutators(); }},
        {"duality", [] { return suite_duality(); }},
        {"f-identity", [] { return suite_f_identity(); }},
        {"lemma6", [] { return suite_lemma6(); }},
        {"lemma7", [] { return suite_lemma7(); }},
        {"lemma9", [] { return suite_lemma9(); }},
        {"lemma10-11", [] { return suite_lemma10_11(); }},
        {"purity-scaling", [] { return suite_purity_scaling(); }},
        {"fluctuation", [] { return suite_fluctuation(); }},
        {"twirl", [] { return suite_twirl(); }},
    };
    return table;
}

} // namespace invrep::verify
