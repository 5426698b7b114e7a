#pragma once

#include "invrep/combinat.hpp"
#include "invrep/config.hpp"
#include "invrep/exact.hpp"
#include "invrep/halfint.hpp"
#include "invrep/numerics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace invrep::su2rep {

using numerics::CMatrix;
using numerics::CVector;

// Jz, J+, J- on the (2j+1)-dim irrep, basis |j,j>, |j,j-1>, ..., |j,-j>.
struct SpinOps {
    HalfInt j;
    CMatrix jz, jplus, jminus;
};

inline SpinOps spin_ops(HalfInt j) {
    if (j < HalfInt(0)) throw std::invalid_argument("spin_ops: j >= 0 required");
    const Eigen::Index dim = j.twice + 1;
    SpinOps out{j, CMatrix::Zero(dim, dim), CMatrix::Zero(dim, dim), CMatrix::Zero(dim, dim)};
    for (Eigen::Index i = 0; i < dim; ++i) {
        const HalfInt m = HalfInt::from_twice(j.twice - 2 * i);
        out.jz(i, i) = m.value();
        if (i > 0) { // J+ |j,m> = sqrt((j-m)(j+m+1)) |j,m+1>
            const double c = std::sqrt((j - m).value() * (j + m + HalfInt(1)).value());
            out.jplus(i - 1, i) = c;
        }
        if (i < dim - 1) { // J- |j,m> = sqrt((j+m)(j-m+1)) |j,m-1>
            const double c = std::sqrt((j + m).value() * (j - m + HalfInt(1)).value());
            out.jminus(i + 1, i) = c;
        }
    }
    return out;
}

// Clebsch-Gordan coefficient C^{j1,j2,j}_{m1,m2,m} by Racah's closed form,
// evaluated exactly as sign * sqrt(rational). Out-of-range arguments give 0.
inline SqrtRat racah_cgc_exact(HalfInt j1, HalfInt j2, HalfInt j, HalfInt m1, HalfInt m2, HalfInt m) {
    if (m.twice != m1.twice + m2.twice) return SqrtRat::zero();
    if (j1 < HalfInt(0) || j2 < HalfInt(0) || j < HalfInt(0)) return SqrtRat::zero();
    if (!j1.admits_projection(m1) || !j2.admits_projection(m2) || !j.admits_projection(m))
        return SqrtRat::zero();
    // triangle condition with integral perimeter
    if ((j1 + j2 + j).twice % 2 != 0) return SqrtRat::zero();
    if (j > j1 + j2 || j < HalfInt::from_twice(std::abs((j1 - j2).twice))) return SqrtRat::zero();

    const long long a1 = (j + j1 - j2).as_integer();
    const long long a2 = (j - j1 + j2).as_integer();
    const long long a3 = (j1 + j2 - j).as_integer();
    const long long a4 = (j1 + j2 + j).as_integer() + 1;

    Rat b1 = Rat(Int(j.twice + 1) * factorial(a1) * factorial(a2) * factorial(a3), factorial(a4));
    Rat b2 = Rat(factorial((j + m).as_integer()) * factorial((j - m).as_integer()) *
                 factorial((j1 + m1).as_integer()) * factorial((j1 - m1).as_integer()) *
                 factorial((j2 + m2).as_integer()) * factorial((j2 - m2).as_integer()));

    const long long t1 = (j1 - m1).as_integer();       // j1 - m1 - k >= 0
    const long long t2 = (j2 + m2).as_integer();       // j2 + m2 - k >= 0
    const long long u1 = (j - j2 + m1).as_integer();   // j - j2 + m1 + k >= 0
    const long long u2 = (j - j1 - m2).as_integer();   // j - j1 - m2 + k >= 0
    const long long kLo = std::max({0LL, -u1, -u2});
    const long long kHi = std::min({a3, t1, t2});

    Rat sum = 0;
    for (long long k = kLo; k <= kHi; ++k) {
        Int fk = factorial(k) * factorial(a3 - k) * factorial(t1 - k) * factorial(t2 - k) *
                 factorial(u1 + k) * factorial(u2 + k);
        Rat term(Int(1), fk);
        sum += (k % 2 == 0) ? term : -term;
    }
    if (sum == 0) return SqrtRat::zero();
    SqrtRat out;
    out.sign = sum < 0 ? -1 : 1;
    out.mag2 = b1 * b2 * sum * sum;
    return out;
}

inline double racah_cgc(HalfInt j1, HalfInt j2, HalfInt j, HalfInt m1, HalfInt m2, HalfInt m) {
    return racah_cgc_exact(j1, j2, j, m1, m2, m).value();
}

// One total-spin block of a sequentially coupled tensor power: the coupling
// path (intermediate total spins after factors 2..n) is the multiplicity
// label. Columns hold m = j, j-1, ..., -j.
struct CoupledChain {
    HalfInt j;
    std::vector<HalfInt> path;
    CMatrix cols; // (2s+1)^n x (2j+1)
    Eigen::Index col_of(HalfInt m) const { return (j - m).twice / 2; }
};

struct CoupledBasis {
    HalfInt s;
    int n = 0;
    std::vector<CoupledChain> chains;

    Eigen::Index dim() const { return chains.empty() ? 0 : chains.front().cols.rows(); }
    Eigen::Index size() const {
        Eigen::Index t = 0;
        for (const auto& c : chains) t += c.cols.cols();
        return t;
    }
    // All columns side by side, chain-major, m descending within a chain.
    CMatrix matrix() const {
        CMatrix out(dim(), size());
        Eigen::Index at = 0;
        for (const auto& c : chains) {
            out.middleCols(at, c.cols.cols()) = c.cols;
            at += c.cols.cols();
        }
        return out;
    }
};

// Full coupled basis of V_(s)^{otimes n} by left-to-right sequential coupling.
inline CoupledBasis couple_chain(HalfInt s, int n) {
    if (n < 1) throw std::invalid_argument("couple_chain: n >= 1 required");
    if (s < HalfInt(0)) throw std::invalid_argument("couple_chain: s >= 0 required");
    const Eigen::Index ds = s.twice + 1;
    double sizeGuess = 1;
    for (int t = 0; t < n; ++t) sizeGuess *= static_cast<double>(ds);
    if (sizeGuess > static_cast<double>(max_entries()))
        throw CapExceeded("couple_chain: (2s+1)^n exceeds configured cap");

    CoupledBasis basis;
    basis.s = s;
    basis.n = n;
    basis.chains.push_back({s, {}, CMatrix::Identity(ds, ds)});
    for (int t = 2; t <= n; ++t) {
        std::vector<CoupledChain> next;
        for (const auto& chain : basis.chains) {
            const Eigen::Index dimOld = chain.cols.rows();
            for (HalfInt jn = HalfInt::from_twice(std::abs((chain.j - s).twice)); jn <= chain.j + s;
                 jn += HalfInt(1)) {
                CoupledChain nc;
                nc.j = jn;
                nc.path = chain.path;
                nc.path.push_back(jn);
                nc.cols = CMatrix::Zero(dimOld * ds, jn.twice + 1);
                for (HalfInt m1 = chain.j; m1 >= -chain.j; m1 -= HalfInt(1)) {
                    const auto colOld = chain.cols.col(chain.col_of(m1));
                    for (HalfInt m2 = s; m2 >= -s; m2 -= HalfInt(1)) {
                        const HalfInt m = m1 + m2;
                        if (!jn.admits_projection(m)) continue;
                        const double c = racah_cgc(chain.j, s, jn, m1, m2, m);
                        if (c == 0.0) continue;
                        const Eigen::Index off = (s - m2).twice / 2;
                        auto dst = nc.cols.col(nc.col_of(m));
                        for (Eigen::Index i = 0; i < dimOld; ++i)
                            if (colOld(i) != 0.0) dst(i * ds + off) += c * colOld(i);
                    }
                }
                next.push_back(std::move(nc));
            }
        }
        basis.chains = std::move(next);
    }
    return basis;
}

struct NearInvLabel {
    HalfInt j, m, j1, j2;
    int alpha = 0, beta = 0;
    int bgroup = 0; // index of the B-side (j2, beta) chain; tr_B kills cross terms
};

// Orthonormal basis of the near-invariant space: total spin j <= j0 across the
// p|q cut, built from the two sequentially coupled halves and one final CGC layer.
struct NearInvBasis {
    HalfInt s, j0;
    int n = 0, p = 0, q = 0;
    std::vector<NearInvLabel> labels;
    CMatrix coeffs; // (2s+1)^n x size

    Eigen::Index size() const { return coeffs.cols(); }
};

inline NearInvBasis near_invariant_basis(HalfInt s, int n, int p, HalfInt j0) {
    if (p < 1 || p > n - 1) throw std::invalid_argument("near_invariant_basis: 1 <= p <= n-1");
    if (j0 < HalfInt(0)) throw std::invalid_argument("near_invariant_basis: j0 >= 0");
    const int q = n - p;
    const auto chainsA = couple_chain(s, p);
    const auto chainsB = couple_chain(s, q);
    const Eigen::Index dimA = chainsA.dim(), dimB = chainsB.dim();
    check_entries(static_cast<std::size_t>(dimA), static_cast<std::size_t>(dimB),
                  "near_invariant_basis");

    NearInvBasis out;
    out.s = s;
    out.j0 = j0;
    out.n = n;
    out.p = p;
    out.q = q;

    // count columns first
    Eigen::Index cols = 0;
    for (const auto& ca : chainsA.chains)
        for (const auto& cb : chainsB.chains)
            for (HalfInt j = HalfInt::from_twice(std::abs((ca.j - cb.j).twice));
                 j <= ca.j + cb.j && j <= j0; j += HalfInt(1))
                cols += j.twice + 1;
    out.coeffs = CMatrix::Zero(dimA * dimB, cols);

    std::map<long long, int> alphaCount, betaCount; // multiplicity label per twice-j
    std::vector<int> alphaOf(chainsA.chains.size()), betaOf(chainsB.chains.size());
    for (std::size_t i = 0; i < chainsA.chains.size(); ++i)
        alphaOf[i] = ++alphaCount[chainsA.chains[i].j.twice];
    for (std::size_t i = 0; i < chainsB.chains.size(); ++i)
        betaOf[i] = ++betaCount[chainsB.chains[i].j.twice];

    Eigen::Index at = 0;
    for (std::size_t ia = 0; ia < chainsA.chains.size(); ++ia) {
        const auto& ca = chainsA.chains[ia];
        for (std::size_t ib = 0; ib < chainsB.chains.size(); ++ib) {
            const auto& cb = chainsB.chains[ib];
            for (HalfInt j = HalfInt::from_twice(std::abs((ca.j - cb.j).twice));
                 j <= ca.j + cb.j && j <= j0; j += HalfInt(1)) {
                for (HalfInt m = j; m >= -j; m -= HalfInt(1)) {
                    auto dst = out.coeffs.col(at);
                    for (HalfInt m1 = ca.j; m1 >= -ca.j; m1 -= HalfInt(1)) {
                        const HalfInt m2 = m - m1;
                        if (!cb.j.admits_projection(m2)) continue;
                        const double c = racah_cgc(ca.j, cb.j, j, m1, m2, m);
                        if (c == 0.0) continue;
                        const auto colA = ca.cols.col(ca.col_of(m1));
                        const auto colB = cb.cols.col(cb.col_of(m2));
                        for (Eigen::Index x = 0; x < dimA; ++x)
                            if (colA(x) != 0.0) dst.segment(x * dimB, dimB) += c * colA(x) * colB;
                    }
                    out.labels.push_back({j, m, ca.j, cb.j, alphaOf[ia], betaOf[ib],
                                          static_cast<int>(ib)});
                    ++at;
                }
            }
        }
    }
    return out;
}

// Dimension the construction must reach: sum_{j<=j0} (2j+1) sum_{triangle} N(p,j1) N(q,j2).
inline Int near_invariant_dim(HalfInt s, int n, int p, HalfInt j0) {
    const int q = n - p;
    Int total = 0;
    for (long long j1t = (p * s.twice) % 2; j1t <= p * s.twice; j1t += 2) {
        const Int np = combinat::mult_su2(p, HalfInt::from_twice(j1t), s);
        if (np == 0) continue;
        for (long long j2t = (q * s.twice) % 2; j2t <= q * s.twice; j2t += 2) {
            const Int nq = combinat::mult_su2(q, HalfInt::from_twice(j2t), s);
            if (nq == 0) continue;
            for (long long jt = std::abs(j1t - j2t); jt <= j1t + j2t && jt <= j0.twice; jt += 2)
                total += Int(jt + 1) * np * nq;
        }
    }
    return total;
}

} // namespace invrep::su2rep
