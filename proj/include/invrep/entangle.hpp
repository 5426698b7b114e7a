#pragma once

#include "invrep/combinat.hpp"
#include "invrep/config.hpp"
#include "invrep/exact.hpp"
#include "invrep/numerics.hpp"
#include "invrep/su2rep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace invrep::entangle {

using numerics::CMatrix;
using numerics::Cplx;
using numerics::CVector;

// The A|B cut: A holds the first p factors, B the remaining q, each of
// dimension dimLocal.
struct BipartiteSplit {
    int p = 1, q = 1;
    Eigen::Index dimLocal = 2;

    Eigen::Index dimA() const { return ipow(p); }
    Eigen::Index dimB() const { return ipow(q); }

private:
    Eigen::Index ipow(int e) const {
        double guess = 1;
        for (int t = 0; t < e; ++t) guess *= static_cast<double>(dimLocal);
        if (guess > static_cast<double>(max_entries())) throw CapExceeded("BipartiteSplit: dim overflow");
        Eigen::Index r = 1;
        for (int t = 0; t < e; ++t) r *= dimLocal;
        return r;
    }
};

struct PuritySummary {
    long long dInv = 0;
    double trW_id2 = 0, trW_swap = 0;
    double meanPurity = 0;
    double hMax = 0;
};

inline double renyi2(const CMatrix& rho) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("renyi2: non-square input");
    const double p2 = rho.cwiseProduct(rho.transpose()).sum().real();
    return -std::log(p2);
}

// ln dim(Y_(s)^{otimes p}) = p ln binom(s+d-1, d-1); for d=2 the caller passes
// the doubled-spin convention (s = 2*spin) so this is p ln(2*spin+1).
inline double h_max(int d, long long s, int p) {
    if (p == 0) return 0.0;
    return p * std::log(to_double(binomial(s + d - 1, d - 1)));
}

inline double eta(const CVector& psi, const BipartiteSplit& split) {
    const double hmax = split.p * std::log(static_cast<double>(split.dimLocal));
    return renyi2(numerics::partial_trace_b(psi, split.dimA(), split.dimB())) / hmax;
}

// Mean purity of a Haar-random state of the span:
//   E tr rho_A^2 = (tr(W_AA' 1^2) + tr(W_AA' W)) / (d_inv^2 + d_inv)
// with tr(W_AA' 1^2) = sum_ij tr(M_ii M_jj) = tr((tr_B 1)^2) and
// tr(W_AA' W) = sum_ij tr(M_ij M_ji) = tr((tr_A 1)^2), M_ij = tr_B |b_i><b_j|.
inline PuritySummary exact_mean_purity(const CMatrix& basis, const BipartiteSplit& split) {
    const Eigen::Index dimA = split.dimA(), dimB = split.dimB();
    if (basis.rows() != dimA * dimB)
        throw std::invalid_argument("exact_mean_purity: basis rows != dimA*dimB");
    const Eigen::Index k = basis.cols();
    if (k == 0) throw EmptySubspace("exact_mean_purity: no invariant states");

    CMatrix S = CMatrix::Zero(dimA, dimA);
    CMatrix T = CMatrix::Zero(dimB, dimB);
    for (Eigen::Index i = 0; i < k; ++i) {
        CVector b = basis.col(i);
        auto u = numerics::as_bipartite(b, dimA, dimB);
        S.noalias() += u * u.adjoint();
        T.noalias() += u.adjoint() * u;
    }
    PuritySummary out;
    out.dInv = static_cast<long long>(k);
    out.trW_id2 = S.cwiseProduct(S.transpose()).sum().real();
    out.trW_swap = T.cwiseProduct(T.transpose()).sum().real();
    out.meanPurity = (out.trW_id2 + out.trW_swap) / (static_cast<double>(k) * k + k);
    out.hMax = split.p * std::log(static_cast<double>(split.dimLocal));
    return out;
}

// Closed form over dual partition pairs (the lambda-sum route):
//   tr(W_AA' 1^2) = sum_lam N(lam) N(lam_*)^2 / dim V_lam,
//   tr(W_AA' W)   = sum_lam N(lam)^2 N(lam_*) / dim V_lam,
// carried in exact rationals until the final conversion.
inline PuritySummary closed_form_mean_purity(int d, long long s, int p, int q) {
    if (((p + q) * s) % d != 0)
        throw EmptySubspace("closed_form_mean_purity: (p+q)s = " + std::to_string((p + q) * s) +
                            " not divisible by d = " + std::to_string(d));
    const auto decP = combinat::symmetric_power_decomposition(s, p, d);
    const auto decQ = combinat::symmetric_power_decomposition(s, q, d);
    Int dinv = 0;
    Rat id2 = 0, swap = 0;
    for (const auto& [lam, nl] : decP) {
        auto mu = combinat::dual_partition(lam, static_cast<long long>(q) * s);
        if (!mu) continue;
        auto it = decQ.find(*mu);
        if (it == decQ.end()) continue;
        const Int& nm = it->second;
        const Int dimL = combinat::weyl_dim(lam);
        dinv += nl * nm;
        id2 += Rat(nl * nm * nm, dimL);
        swap += Rat(nl * nl * nm, dimL);
    }
    if (dinv == 0)
        throw EmptySubspace("closed_form_mean_purity: no dual pairs with nonzero multiplicity for d=" +
                            std::to_string(d) + ", s=" + std::to_string(s) + ", p=" + std::to_string(p) +
                            ", q=" + std::to_string(q));
    PuritySummary out;
    out.dInv = dinv.convert_to<long long>();
    out.trW_id2 = to_double(id2);
    out.trW_swap = to_double(swap);
    out.meanPurity = to_double(Rat(id2 + swap) / Rat(dinv * dinv + dinv));
    out.hMax = h_max(d, s, p);
    return out;
}

// SU(2) route: the same two swap traces evaluated through the coupled-basis
// CGC sums (valid for any cutoff j0), exact rationals throughout.
struct ExactPuritySums {
    Int dInv = 0;
    Rat trW_id2 = 0, trW_swap = 0;
    Rat meanPurity = 0;
};

inline ExactPuritySums su2_swap_trace_sums(HalfInt s, int p, int q, HalfInt j0) {
    using combinat::mult_su2;
    const int n = p + q;
    std::map<long long, Int> np, nq; // doubled j -> multiplicity
    for (long long jt = (p * s.twice) % 2; jt <= p * s.twice; jt += 2) {
        Int m = mult_su2(p, HalfInt::from_twice(jt), s);
        if (m != 0) np[jt] = m;
    }
    for (long long jt = (q * s.twice) % 2; jt <= q * s.twice; jt += 2) {
        Int m = mult_su2(q, HalfInt::from_twice(jt), s);
        if (m != 0) nq[jt] = m;
    }
    const long long parity = (n * s.twice) % 2;

    ExactPuritySums out;
    for (long long jt = parity; jt <= j0.twice; jt += 2)
        for (const auto& [j1t, n1] : np)
            for (const auto& [j2t, n2] : nq)
                if (jt >= std::abs(j1t - j2t) && jt <= j1t + j2t) out.dInv += Int(jt + 1) * n1 * n2;
    if (out.dInv == 0) return out;

    auto cgc2 = [](HalfInt j1, HalfInt j2, HalfInt j, HalfInt m1, HalfInt m2, HalfInt m) -> Rat {
        return su2rep::racah_cgc_exact(j1, j2, j, m1, m2, m).squared();
    };

    // tr(W_AA' 1_inv^2): common A labels (j1, alpha, m1); B labels independent
    for (long long jt = parity; jt <= j0.twice; jt += 2) {
        const HalfInt j = HalfInt::from_twice(jt);
        for (long long jpt = parity; jpt <= j0.twice; jpt += 2) {
            const HalfInt jp = HalfInt::from_twice(jpt);
            for (const auto& [j1t, n1] : np) {
                const HalfInt j1 = HalfInt::from_twice(j1t);
                for (const auto& [j2t, n2] : nq) {
                    if (jt < std::abs(j1t - j2t) || jt > j1t + j2t) continue;
                    const HalfInt j2 = HalfInt::from_twice(j2t);
                    for (const auto& [j2pt, n2p] : nq) {
                        if (jpt < std::abs(j1t - j2pt) || jpt > j1t + j2pt) continue;
                        const HalfInt j2p = HalfInt::from_twice(j2pt);
                        const Int weight = n1 * n2 * n2p;
                        Rat acc = 0;
                        for (long long mt = -jt; mt <= jt; mt += 2) {
                            const HalfInt m = HalfInt::from_twice(mt);
                            for (long long mpt = -jpt; mpt <= jpt; mpt += 2) {
                                const HalfInt mp = HalfInt::from_twice(mpt);
                                for (long long m1t = -j1t; m1t <= j1t; m1t += 2) {
                                    const HalfInt m1 = HalfInt::from_twice(m1t);
                                    const Rat c1 = cgc2(j1, j2, j, m1, m - m1, m);
                                    if (c1 == 0) continue;
                                    const Rat c2 = cgc2(j1, j2p, jp, m1, mp - m1, mp);
                                    if (c2 == 0) continue;
                                    acc += c1 * c2;
                                }
                            }
                        }
                        out.trW_id2 += Rat(weight) * acc;
                    }
                }
            }
        }
    }

    // tr(W_AA' W_inv): common B labels (j2, beta, m2); A labels independent
    for (long long jt = parity; jt <= j0.twice; jt += 2) {
        const HalfInt j = HalfInt::from_twice(jt);
        for (long long jpt = parity; jpt <= j0.twice; jpt += 2) {
            const HalfInt jp = HalfInt::from_twice(jpt);
            for (const auto& [j2t, n2] : nq) {
                const HalfInt j2 = HalfInt::from_twice(j2t);
                for (const auto& [j1t, n1] : np) {
                    if (jt < std::abs(j1t - j2t) || jt > j1t + j2t) continue;
                    const HalfInt j1 = HalfInt::from_twice(j1t);
                    for (const auto& [j1pt, n1p] : np) {
                        if (jpt < std::abs(j1pt - j2t) || jpt > j1pt + j2t) continue;
                        const HalfInt j1p = HalfInt::from_twice(j1pt);
                        const Int weight = n2 * n1 * n1p;
                        Rat acc = 0;
                        for (long long mt = -jt; mt <= jt; mt += 2) {
                            const HalfInt m = HalfInt::from_twice(mt);
                            for (long long mpt = -jpt; mpt <= jpt; mpt += 2) {
                                const HalfInt mp = HalfInt::from_twice(mpt);
                                for (long long m2t = -j2t; m2t <= j2t; m2t += 2) {
                                    const HalfInt m2 = HalfInt::from_twice(m2t);
                                    const Rat c1 = cgc2(j1, j2, j, m - m2, m2, m);
                                    if (c1 == 0) continue;
                                    const Rat c2 = cgc2(j1p, j2, jp, mp - m2, m2, mp);
                                    if (c2 == 0) continue;
                                    acc += c1 * c2;
                                }
                            }
                        }
                        out.trW_swap += Rat(weight) * acc;
                    }
                }
            }
        }
    }

    out.meanPurity = (out.trW_id2 + out.trW_swap) / Rat(out.dInv * out.dInv + out.dInv);
    return out;
}

inline PuritySummary closed_form_mean_purity_su2(HalfInt s, int p, int q, HalfInt j0) {
    auto ex = su2_swap_trace_sums(s, p, q, j0);
    if (ex.dInv == 0)
        throw EmptySubspace("closed_form_mean_purity_su2: near-invariant space is empty (parity)");
    PuritySummary out;
    out.dInv = ex.dInv.convert_to<long long>();
    out.trW_id2 = to_double(ex.trW_id2);
    out.trW_swap = to_double(ex.trW_swap);
    out.meanPurity = to_double(ex.meanPurity);
    out.hMax = p * std::log(static_cast<double>(s.twice + 1));
    return out;
}

namespace detail {

inline Cplx trprod(const CMatrix& x, const CMatrix& y) {
    return x.cwiseProduct(y.transpose()).sum();
}

// All M_ij = tr_B |b_i><b_j| that can be nonzero: group labels partition the
// basis by B-side sector; cross-group reductions vanish identically.
struct CrossReductions {
    Eigen::Index k = 0, dimA = 0;
    std::vector<int> group;                    // per column
    std::vector<std::vector<Eigen::Index>> members; // per group
    std::map<std::pair<Eigen::Index, Eigen::Index>, CMatrix> m;

    const CMatrix& at(Eigen::Index i, Eigen::Index j) const { return m.at({i, j}); }
    bool same(Eigen::Index i, Eigen::Index j) const {
        return group[static_cast<std::size_t>(i)] == group[static_cast<std::size_t>(j)];
    }
};

inline CrossReductions build_cross_reductions(const CMatrix& basis, const BipartiteSplit& split,
                                              const std::vector<int>& groups) {
    const Eigen::Index dimA = split.dimA(), dimB = split.dimB();
    CrossReductions cr;
    cr.k = basis.cols();
    cr.dimA = dimA;
    cr.group = groups.empty() ? std::vector<int>(static_cast<std::size_t>(cr.k), 0) : groups;
    if (static_cast<Eigen::Index>(cr.group.size()) != cr.k)
        throw std::invalid_argument("second_moment_purity: group label count mismatch");
    const int ngroups = cr.group.empty() ? 0 : *std::max_element(cr.group.begin(), cr.group.end()) + 1;
    cr.members.assign(static_cast<std::size_t>(ngroups), {});
    for (Eigen::Index i = 0; i < cr.k; ++i) cr.members[static_cast<std::size_t>(cr.group[static_cast<std::size_t>(i)])].push_back(i);

    double sum2 = 0, sum4 = 0;
    for (const auto& g : cr.members) {
        const double n = static_cast<double>(g.size());
        sum2 += n * n;
        sum4 += n * n * n * n;
    }
    const double cost = std::max(sum4, sum2 * sum2) * static_cast<double>(dimA) * static_cast<double>(dimA);
    if (cost > 4e10)
        throw CapExceeded("second_moment_purity: instance too large for the dense permutation route");

    for (const auto& g : cr.members)
        for (Eigen::Index i : g)
            for (Eigen::Index j : g) {
                CVector bi = basis.col(i), bj = basis.col(j);
                cr.m.emplace(std::make_pair(i, j),
                             numerics::cross_reduce(bi, bj, dimA, dimB));
            }
    return cr;
}

} // namespace detail

struct FourthMomentReport {
    double second_moment = 0; // E (tr rho_A^2)^2
    double sum_all = 0;       // sum over S4 of tr((W12^A W34^A) W_pi)
    std::vector<std::pair<std::array<int, 4>, double>> perm_traces;
};

// E (tr rho_A^2)^2 = [ sum_{pi in S4} tr((W^A_(12) W^A_(34)) W_pi) ] / d^{(4)}
// with d^{(4)} the rising factorial. Each permutation trace is contracted from
// the M_ij = tr_B |b_i><b_j| network. Optional group labels mark the B-side
// sector of each basis vector (cross-sector M_ij vanish), which keeps the
// quartic contractions tractable.
inline FourthMomentReport second_moment_purity(const CMatrix& basis, const BipartiteSplit& split,
                                               const std::vector<int>& groups = {}) {
    const Eigen::Index k = basis.cols();
    if (k == 0) throw EmptySubspace("second_moment_purity: empty basis");
    auto cr = detail::build_cross_reductions(basis, split, groups);
    const Eigen::Index dimA = split.dimA();

    CMatrix S = CMatrix::Zero(dimA, dimA);
    for (Eigen::Index i = 0; i < k; ++i) S += cr.at(i, i);
    const Cplx trS2 = detail::trprod(S, S);

    Cplx a2 = 0;
    for (const auto& g : cr.members)
        for (Eigen::Index i : g)
            for (Eigen::Index j : g) a2 += detail::trprod(cr.at(i, j), cr.at(j, i));

    // g[a][b] = tr(M_ab S); h1[a][b] = sum_t tr(M_ta M_bt); h2[a][b] = sum_t tr(M_at M_tb)
    CMatrix gt = CMatrix::Zero(k, k), h1 = CMatrix::Zero(k, k), h2 = CMatrix::Zero(k, k);
    for (const auto& g : cr.members)
        for (Eigen::Index a : g)
            for (Eigen::Index b : g) {
                gt(a, b) = detail::trprod(cr.at(a, b), S);
                Cplx s1 = 0, s2 = 0;
                for (Eigen::Index t : g) {
                    s1 += detail::trprod(cr.at(t, a), cr.at(b, t));
                    s2 += detail::trprod(cr.at(a, t), cr.at(t, b));
                }
                h1(a, b) = s1;
                h2(a, b) = s2;
            }

    auto sumElem = [&](const CMatrix& x, const CMatrix& y) { // sum_ab x(a,b) y(a,b)
        return x.cwiseProduct(y).sum();
    };
    auto sumElemT = [&](const CMatrix& x, const CMatrix& y) { // sum_ab x(a,b) y(b,a)
        return x.cwiseProduct(y.transpose()).sum();
    };

    // the two irreducible quartic wirings
    auto quarticSame = [&](bool variant0213) {
        Cplx acc = 0;
        for (const auto& g : cr.members)
            for (Eigen::Index i0 : g)
                for (Eigen::Index i1 : g)
                    for (Eigen::Index i2 : g)
                        for (Eigen::Index i3 : g) {
                            if (variant0213)
                                acc += detail::trprod(cr.at(i2, i0), cr.at(i3, i1)) *
                                       detail::trprod(cr.at(i1, i2), cr.at(i0, i3));
                            else
                                acc += detail::trprod(cr.at(i3, i0), cr.at(i2, i1)) *
                                       detail::trprod(cr.at(i0, i2), cr.at(i1, i3));
                        }
        return acc;
    };
    auto quarticPairs = [&](bool variant0213) {
        Cplx acc = 0;
        for (const auto& gA : cr.members)
            for (const auto& gB : cr.members)
                for (Eigen::Index x : gA)
                    for (Eigen::Index y : gA)
                        for (Eigen::Index u : gB)
                            for (Eigen::Index v : gB) {
                                if (variant0213) // (02)(13): pairs (i0,i2)=(x,y), (i1,i3)=(u,v)
                                    acc += detail::trprod(cr.at(y, x), cr.at(v, u)) *
                                           detail::trprod(cr.at(x, y), cr.at(u, v));
                                else // (03)(12): pairs (i0,i3)=(x,y), (i1,i2)=(u,v)
                                    acc += detail::trprod(cr.at(y, x), cr.at(v, u)) *
                                           detail::trprod(cr.at(u, v), cr.at(x, y));
                            }
        return acc;
    };

    FourthMomentReport rep;
    Cplx total = 0;
    std::array<int, 4> perm{0, 1, 2, 3};
    std::vector<std::array<int, 4>> perms;
    do {
        perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));

    for (const auto& img : perms) {
        Cplx value;
        if (img == std::array<int, 4>{0, 1, 2, 3}) value = trS2 * trS2;
        else if (img == std::array<int, 4>{1, 0, 2, 3}) value = a2 * trS2;
        else if (img == std::array<int, 4>{0, 1, 3, 2}) value = trS2 * a2;
        else if (img == std::array<int, 4>{1, 0, 3, 2}) value = a2 * a2;
        else if (img == std::array<int, 4>{2, 1, 0, 3} || img == std::array<int, 4>{3, 1, 2, 0} ||
                 img == std::array<int, 4>{0, 2, 1, 3} || img == std::array<int, 4>{0, 3, 2, 1})
            value = sumElemT(gt, gt);
        else if (img == std::array<int, 4>{1, 2, 0, 3} || img == std::array<int, 4>{1, 3, 2, 0} ||
                 img == std::array<int, 4>{2, 1, 3, 0} || img == std::array<int, 4>{0, 2, 3, 1})
            value = sumElem(h1, gt);
        else if (img == std::array<int, 4>{2, 0, 1, 3} || img == std::array<int, 4>{3, 0, 2, 1} ||
                 img == std::array<int, 4>{3, 1, 0, 2} || img == std::array<int, 4>{0, 3, 1, 2})
            value = sumElemT(h2, gt);
        else if (img == std::array<int, 4>{1, 2, 3, 0}) value = sumElemT(h1, h1);
        else if (img == std::array<int, 4>{3, 0, 1, 2}) value = sumElemT(h2, h2);
        else if (img == std::array<int, 4>{1, 3, 0, 2} || img == std::array<int, 4>{2, 0, 3, 1})
            value = sumElem(h1, h2);
        else if (img == std::array<int, 4>{2, 3, 1, 0}) value = quarticSame(true);   // cycle (0213)
        else if (img == std::array<int, 4>{3, 2, 0, 1}) value = quarticSame(false);  // cycle (0312)
        else if (img == std::array<int, 4>{2, 3, 0, 1}) value = quarticPairs(true);  // (02)(13)
        else if (img == std::array<int, 4>{3, 2, 1, 0}) value = quarticPairs(false); // (03)(12)
        else throw std::logic_error("second_moment_purity: unhandled permutation");
        total += value;
        rep.perm_traces.push_back({img, value.real()});
    }
    rep.sum_all = total.real();
    const double kk = static_cast<double>(k);
    rep.second_moment = rep.sum_all / (kk * (kk + 1) * (kk + 2) * (kk + 3));
    return rep;
}

// Coefficients of the two-copy twirl: int U^2 X (U+)^2 dU = c1 1 + c2 W,
// fixed by tr X = c1 d^2 + c2 d and tr(WX) = c1 d + c2 d^2.
inline std::pair<Cplx, Cplx> werner_coeffs(const CMatrix& x, int d) {
    if (d <= 1) throw std::invalid_argument("werner_coeffs: d >= 2 required");
    const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
    if (x.rows() != dd || x.cols() != dd) throw std::invalid_argument("werner_coeffs: X must be d^2 x d^2");
    Cplx trX = x.trace();
    Cplx trWX = 0;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) trWX += x(j * d + i, i * d + j);
    const double den = static_cast<double>(d) * (static_cast<double>(d) * d - 1);
    return {(static_cast<double>(d) * trX - trWX) / den, (static_cast<double>(d) * trWX - trX) / den};
}

// sum_{pi in S_n} W_pi / D^{(n)} : the n-th moment of a Haar-random pure state
// on C^D (rising-factorial normalization).
inline CMatrix moment_operator(int n, int D) {
    if (n < 1 || D < 1) throw std::invalid_argument("moment_operator: n, D >= 1");
    double total = 1;
    for (int t = 0; t < n; ++t) total *= static_cast<double>(D);
    check_entries(static_cast<std::size_t>(total), static_cast<std::size_t>(total), "moment_operator");
    const Eigen::Index full = static_cast<Eigen::Index>(total);

    CMatrix out = CMatrix::Zero(full, full);
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<Eigen::Index> digits(static_cast<std::size_t>(n)), rd(static_cast<std::size_t>(n));
    do {
        std::vector<int> inv(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) inv[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])] = t;
        for (Eigen::Index c = 0; c < full; ++c) {
            Eigen::Index g = c;
            for (int t = n - 1; t >= 0; --t) {
                digits[static_cast<std::size_t>(t)] = g % D;
                g /= D;
            }
            for (int t = 0; t < n; ++t) rd[static_cast<std::size_t>(t)] = digits[static_cast<std::size_t>(inv[static_cast<std::size_t>(t)])];
            Eigen::Index r = 0;
            for (int t = 0; t < n; ++t) r = r * D + rd[static_cast<std::size_t>(t)];
            out(r, c) += 1.0;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    double rising = 1;
    for (int t = 0; t < n; ++t) rising *= static_cast<double>(D + t);
    return out / rising;
}

} // namespace invrep::entangle
