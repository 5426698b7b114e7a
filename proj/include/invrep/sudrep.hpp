#pragma once

#include "invrep/combinat.hpp"
#include "invrep/config.hpp"
#include "invrep/exact.hpp"
#include "invrep/halfint.hpp"
#include "invrep/numerics.hpp"

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace invrep::sudrep {

using combinat::GTPattern;
using combinat::Partition;
using numerics::CMatrix;
using numerics::CVector;
using numerics::SparseOp;

// gl(d) action on V_lam in the Gelfand-Tsetlin basis: diagonal E^{l,l}
// (l = 1..d) plus raising E^{l,l+1} and lowering E^{l+1,l} (l = 1..d-1),
// with E^{l+1,l} the adjoint of E^{l,l+1}.
struct IrrepAction {
    Partition lam;
    int d = 0;
    std::vector<GTPattern> basis;
    std::map<GTPattern, Eigen::Index> index;
    std::vector<SparseOp> diag;    // E^{l,l}, l = 1..d
    std::vector<SparseOp> raising; // E^{l,l+1}, l = 1..d-1
    std::vector<SparseOp> lowering;

    Eigen::Index dim() const { return static_cast<Eigen::Index>(basis.size()); }
};

namespace detail {

// raising amplitude a_{k,l}: nonzero only when p + 1^{k,l} interlaces; the
// products carry exact integers, zero factors are skipped.
inline double raise_coeff(const GTPattern& p, int k, int l) {
    // validity of the shifted pattern
    const long long v = p.at(l, k);
    if (l < p.d && v + 1 > p.at(l + 1, k)) return 0.0;
    if (k >= 2 && v + 1 > p.at(l - 1, k - 1)) return 0.0;
    Int num = 1, den = 1;
    const long long hk = p.at(l, k) - k;
    for (int i = 1; i <= l + 1; ++i) {
        const long long f = p.at(l + 1, i) - i - hk;
        if (f != 0) num *= f;
    }
    for (int i = 1; i <= l - 1; ++i) {
        const long long f = p.at(l - 1, i) - i - hk - 1;
        if (f != 0) num *= f;
    }
    for (int i = 1; i <= l; ++i) {
        if (i == k) continue;
        const long long g = p.at(l, i) - i - hk;
        if (g != 0) den *= g;
        if (g - 1 != 0) den *= g - 1;
    }
    const Rat val = -Rat(num, den);
    if (val <= 0) return 0.0;
    return sqrt_to_double(val);
}

} // namespace detail

inline IrrepAction irrep_action(const Partition& lam) {
    IrrepAction rep;
    rep.lam = lam;
    rep.d = static_cast<int>(lam.size());
    Int wd = combinat::weyl_dim(lam);
    if (wd > Int(static_cast<long long>(max_entries())))
        throw CapExceeded("irrep_action: dim V_lam exceeds configured cap");
    rep.basis = combinat::gt_patterns(lam);
    for (Eigen::Index i = 0; i < rep.dim(); ++i) rep.index[rep.basis[static_cast<std::size_t>(i)]] = i;

    const int d = rep.d;
    rep.diag.assign(static_cast<std::size_t>(d), SparseOp{});
    for (int l = 1; l <= d; ++l) {
        auto& op = rep.diag[static_cast<std::size_t>(l - 1)];
        op.dim = rep.dim();
        for (Eigen::Index i = 0; i < rep.dim(); ++i) {
            const auto& p = rep.basis[static_cast<std::size_t>(i)];
            op.add(i, i, static_cast<double>(p.row_sum(l) - p.row_sum(l - 1)));
        }
    }
    rep.raising.assign(static_cast<std::size_t>(d - 1), SparseOp{});
    rep.lowering.assign(static_cast<std::size_t>(d - 1), SparseOp{});
    for (int l = 1; l <= d - 1; ++l) {
        auto& up = rep.raising[static_cast<std::size_t>(l - 1)];
        up.dim = rep.dim();
        for (Eigen::Index i = 0; i < rep.dim(); ++i) {
            const auto& p = rep.basis[static_cast<std::size_t>(i)];
            for (int k = 1; k <= l; ++k) {
                const double a = detail::raise_coeff(p, k, l);
                if (a == 0.0) continue;
                GTPattern t = p;
                ++t.at(l, k);
                up.add(rep.index.at(t), i, a);
            }
        }
        up.canonicalize();
        rep.lowering[static_cast<std::size_t>(l - 1)] = up.adjoint();
    }
    return rep;
}

// Weight w_l = r_l - (r_{l+1} + r_{l-1})/2, l = 1..d-1 (doubled-integer exact).
inline std::vector<HalfInt> weight(const GTPattern& p) {
    std::vector<HalfInt> w;
    w.reserve(static_cast<std::size_t>(p.d - 1));
    for (int l = 1; l <= p.d - 1; ++l)
        w.push_back(HalfInt::from_twice(2 * p.row_sum(l) - p.row_sum(l + 1) - p.row_sum(l - 1)));
    return w;
}

// sum_{i=1}^n 1^{(i-1)} ot op ot 1^{(n-i)} on n factors of dimension op.dim.
inline SparseOp collective(const SparseOp& op, int n) {
    if (n < 1) throw std::invalid_argument("collective: n >= 1 required");
    const Eigen::Index D = op.dim;
    double total = 1;
    for (int t = 0; t < n; ++t) total *= static_cast<double>(D);
    if (total > static_cast<double>(max_entries())) throw CapExceeded("collective: D^n exceeds cap");
    const Eigen::Index full = static_cast<Eigen::Index>(total);

    SparseOp out;
    out.dim = full;
    for (int t = 0; t < n; ++t) {
        Eigen::Index left = 1, right = 1;
        for (int u = 0; u < t; ++u) left *= D;
        for (int u = t + 1; u < n; ++u) right *= D;
        for (const auto& e : op.entries)
            for (Eigen::Index L = 0; L < left; ++L)
                for (Eigen::Index R = 0; R < right; ++R)
                    out.add((L * D + e.row) * right + R, (L * D + e.col) * right + R, e.v);
    }
    out.canonicalize();
    return out;
}

namespace detail {

// digits of a product-basis index, most significant factor first
inline void unpack_index(Eigen::Index g, Eigen::Index D, int n, std::vector<Eigen::Index>& out) {
    out.resize(static_cast<std::size_t>(n));
    for (int t = n - 1; t >= 0; --t) {
        out[static_cast<std::size_t>(t)] = g % D;
        g /= D;
    }
}

} // namespace detail

// Orthonormal basis of the SU(d)-invariant subspace of Y_(s)^{otimes n},
// Y_(s) realized as V_{(s,0,...,0)} in its GT basis. Invariance is imposed via
// the collective Cartan differences (exact zero-weight sector selection) and
// the collective raising operators (kernel by SVD). The resulting dimension is
// cross-checked against the exact count d_inv_count; a mismatch is a hard error.
inline numerics::SubspaceBasis invariant_subspace(int d, long long s, int n, double tol = 1e-9) {
    if (d < 2 || s < 0 || n < 1) throw std::invalid_argument("invariant_subspace: bad arguments");
    Partition top(static_cast<std::size_t>(d), 0);
    top[0] = s;
    const auto rep = irrep_action(top);
    const Eigen::Index D = rep.dim();
    double totalD = 1;
    for (int t = 0; t < n; ++t) totalD *= static_cast<double>(D);
    if (totalD > static_cast<double>(max_entries()))
        throw CapExceeded("invariant_subspace: D^n exceeds configured cap");
    const Eigen::Index full = static_cast<Eigen::Index>(totalD);

    // per-GT-state doubled weights
    std::vector<std::vector<long long>> w2(static_cast<std::size_t>(D));
    for (Eigen::Index i = 0; i < D; ++i) {
        auto w = weight(rep.basis[static_cast<std::size_t>(i)]);
        auto& v = w2[static_cast<std::size_t>(i)];
        v.reserve(w.size());
        for (auto h : w) v.push_back(h.twice);
    }

    std::vector<Eigen::Index> sector;
    std::vector<Eigen::Index> digits;
    for (Eigen::Index g = 0; g < full; ++g) {
        detail::unpack_index(g, D, n, digits);
        bool zero = true;
        for (int l = 0; l < d - 1 && zero; ++l) {
            long long acc = 0;
            for (int t = 0; t < n; ++t) acc += w2[static_cast<std::size_t>(digits[static_cast<std::size_t>(t)])][static_cast<std::size_t>(l)];
            zero = acc == 0;
        }
        if (zero) sector.push_back(g);
    }

    Eigen::Index k = 0;
    CMatrix basis;
    if (!sector.empty()) {
        // collective raisings restricted to the zero-weight sector; each
        // operator gets its own block of stacked rows
        std::vector<Eigen::Triplet<numerics::Cplx>> trip;
        Eigen::Index rows = 0;
        for (int l = 0; l < d - 1; ++l) {
            const auto& op = rep.raising[static_cast<std::size_t>(l)];
            std::map<Eigen::Index, Eigen::Index> localRow;
            for (std::size_t c = 0; c < sector.size(); ++c) {
                detail::unpack_index(sector[c], D, n, digits);
                for (int t = 0; t < n; ++t) {
                    Eigen::Index right = 1;
                    for (int u = t + 1; u < n; ++u) right *= D;
                    for (const auto& e : op.entries) {
                        if (e.col != digits[static_cast<std::size_t>(t)]) continue;
                        const Eigen::Index g2 = sector[c] + (e.row - e.col) * right;
                        auto [it, fresh] = localRow.try_emplace(g2, rows);
                        if (fresh) ++rows;
                        trip.emplace_back(static_cast<int>(it->second), static_cast<int>(c), e.v);
                    }
                }
            }
        }
        CMatrix restricted = CMatrix::Zero(std::max<Eigen::Index>(rows, 1), static_cast<Eigen::Index>(sector.size()));
        for (const auto& t : trip) restricted(t.row(), t.col()) += t.value();
        CMatrix kern = numerics::dense_kernel(restricted, tol);
        k = kern.cols();
        basis = CMatrix::Zero(full, k);
        for (std::size_t c = 0; c < sector.size(); ++c) basis.row(sector[c]) = kern.row(static_cast<Eigen::Index>(c));
    } else {
        basis = CMatrix::Zero(full, 0);
    }

    if (n >= 2) {
        const Int expected = combinat::d_inv_count(d, s, 1, n - 1);
        if (Int(k) != expected)
            throw std::logic_error("invariant_subspace: numeric dimension " + std::to_string(k) +
                                   " != exact count " + expected.str());
    }
    return basis;
}

// rows collected per raising operator share one row map; that is fine for the
// kernel (stacking rows in any order does not change it), but keep the helper
// below for tests that want the raw collective operators.
inline std::vector<SparseOp> collective_invariance_ops(const IrrepAction& rep, int n,
                                                       bool include_lowering = false) {
    std::vector<SparseOp> ops;
    const int d = rep.d;
    for (int l = 0; l < d - 1; ++l) {
        SparseOp cart;
        cart.dim = rep.dim();
        for (Eigen::Index i = 0; i < rep.dim(); ++i) {
            auto w = weight(rep.basis[static_cast<std::size_t>(i)]);
            cart.add(i, i, static_cast<double>(w[static_cast<std::size_t>(l)].twice));
        }
        ops.push_back(collective(cart, n));
    }
    for (int l = 0; l < d - 1; ++l) ops.push_back(collective(rep.raising[static_cast<std::size_t>(l)], n));
    if (include_lowering)
        for (int l = 0; l < d - 1; ++l) ops.push_back(collective(rep.lowering[static_cast<std::size_t>(l)], n));
    return ops;
}

// The unique (up to phase) invariant unit vector in V_lam ot V_mu for a dual
// pair, as the joint kernel of the collective generators on the pair. Phase:
// the coefficient on (highest-weight pattern of lam, its dual in GT(mu)) is
// real positive.
inline CVector singlet_in_pair(const Partition& lam, const Partition& mu) {
    if (!combinat::is_dual(lam, mu))
        throw std::invalid_argument("singlet_in_pair: no invariant vector, partitions are not dual");
    const auto repL = irrep_action(lam);
    const auto repM = irrep_action(mu);
    const Eigen::Index dl = repL.dim(), dm = repM.dim();
    check_entries(static_cast<std::size_t>(dl), static_cast<std::size_t>(dm), "singlet_in_pair");
    const Eigen::Index dim = dl * dm;
    const int d = repL.d;

    auto pairOp = [&](const SparseOp& a, const SparseOp& b) {
        // a ot 1 + 1 ot b
        SparseOp out;
        out.dim = dim;
        for (const auto& e : a.entries)
            for (Eigen::Index r = 0; r < dm; ++r) out.add(e.row * dm + r, e.col * dm + r, e.v);
        for (const auto& e : b.entries)
            for (Eigen::Index l = 0; l < dl; ++l) out.add(l * dm + e.row, l * dm + e.col, e.v);
        out.canonicalize();
        return out;
    };

    std::vector<SparseOp> ops;
    for (int l = 0; l < d - 1; ++l) { // Cartan differences first: diagonal fast path
        SparseOp cl, cm;
        cl.dim = dl;
        cm.dim = dm;
        for (Eigen::Index i = 0; i < dl; ++i)
            cl.add(i, i, static_cast<double>(weight(repL.basis[static_cast<std::size_t>(i)])[static_cast<std::size_t>(l)].twice));
        for (Eigen::Index i = 0; i < dm; ++i)
            cm.add(i, i, static_cast<double>(weight(repM.basis[static_cast<std::size_t>(i)])[static_cast<std::size_t>(l)].twice));
        ops.push_back(pairOp(cl, cm));
    }
    for (int l = 0; l < d - 1; ++l)
        ops.push_back(pairOp(repL.raising[static_cast<std::size_t>(l)], repM.raising[static_cast<std::size_t>(l)]));

    CMatrix kernel = numerics::null_space_orthonormal(ops, dim);
    if (kernel.cols() != 1)
        throw std::logic_error("singlet_in_pair: kernel dimension " + std::to_string(kernel.cols()) +
                               ", expected 1");
    CVector v = kernel.col(0);

    const auto& highest = repL.basis.front(); // descending enumeration puts it first
    auto dual = combinat::dual_gt_pattern(highest, mu);
    if (!dual) throw std::logic_error("singlet_in_pair: missing dual of highest pattern");
    const Eigen::Index anchor = 0 * dm + repM.index.at(*dual);
    const numerics::Cplx c = v(anchor);
    if (std::abs(c) < 1e-12) throw std::logic_error("singlet_in_pair: anchor coefficient vanishes");
    v *= std::conj(c) / std::abs(c);
    return v;
}

} // namespace invrep::sudrep
