#pragma once

#include "invrep/exact.hpp"
#include "invrep/halfint.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace invrep::combinat {

// Non-increasing sequence of non-negative integers of fixed length d
// (an irrep highest weight).
using Partition = std::vector<long long>;

inline bool is_valid_partition(const Partition& lam) {
    for (std::size_t i = 0; i < lam.size(); ++i) {
        if (lam[i] < 0) return false;
        if (i + 1 < lam.size() && lam[i] < lam[i + 1]) return false;
    }
    return !lam.empty();
}

inline long long partition_total(const Partition& lam) {
    long long t = 0;
    for (long long x : lam) t += x;
    return t;
}

// Triangular array with rows l = 1..d (row l holds l entries), row d on top
// being the partition. Entries satisfy the interlacing condition
// lam^l_k >= lam^{l-1}_k >= lam^l_{k+1}.
struct GTPattern {
    int d = 0;
    std::vector<long long> e; // row l starts at l*(l-1)/2, entries k = 1..l

    long long& at(int l, int k) { return e[static_cast<std::size_t>(l) * (l - 1) / 2 + k - 1]; }
    long long at(int l, int k) const { return e[static_cast<std::size_t>(l) * (l - 1) / 2 + k - 1]; }

    Partition row(int l) const {
        Partition r(static_cast<std::size_t>(l));
        for (int k = 1; k <= l; ++k) r[static_cast<std::size_t>(k - 1)] = at(l, k);
        return r;
    }
    Partition top() const { return row(d); }

    long long row_sum(int l) const {
        if (l <= 0) return 0;
        long long s = 0;
        for (int k = 1; k <= l; ++k) s += at(l, k);
        return s;
    }

    bool valid() const {
        if (d <= 0 || e.size() != static_cast<std::size_t>(d) * (d + 1) / 2) return false;
        for (int k = 1; k < d; ++k)
            if (at(d, k) < at(d, k + 1)) return false;
        if (at(d, d) < 0) return false;
        for (int l = 2; l <= d; ++l)
            for (int k = 1; k < l; ++k)
                if (!(at(l, k) >= at(l - 1, k) && at(l - 1, k) >= at(l, k + 1))) return false;
        return true;
    }

    auto operator<=>(const GTPattern&) const = default;
};

// All partitions of n into at most k parts, padded to length k, first part
// descending (the order of the spec's examples).
inline std::vector<Partition> partitions(long long n, int k) {
    if (n < 0 || k < 1) throw std::invalid_argument("partitions: need n >= 0, k >= 1");
    std::vector<Partition> out;
    Partition cur(static_cast<std::size_t>(k), 0);
    auto rec = [&](auto&& self, long long rest, int slot, long long maxPart) -> void {
        if (slot == k) {
            if (rest == 0) out.push_back(cur);
            return;
        }
        long long slotsLeft = k - slot;
        // smallest admissible part so the remaining slots can absorb the rest
        long long lo = (rest + slotsLeft - 1) / slotsLeft;
        for (long long part = std::min(rest, maxPart); part >= lo; --part) {
            cur[static_cast<std::size_t>(slot)] = part;
            self(self, rest - part, slot + 1, part);
        }
        cur[static_cast<std::size_t>(slot)] = 0;
    };
    rec(rec, n, 0, n);
    return out;
}

// All GT patterns with top row lam; rows are enumerated depth-first from the
// top, each row in descending lexicographic order. The first pattern is the
// highest-weight one (every row a prefix of lam).
inline std::vector<GTPattern> gt_patterns(const Partition& lam) {
    if (!is_valid_partition(lam)) throw std::invalid_argument("gt_patterns: invalid partition");
    const int d = static_cast<int>(lam.size());
    std::vector<GTPattern> out;
    GTPattern cur;
    cur.d = d;
    cur.e.assign(static_cast<std::size_t>(d) * (d + 1) / 2, 0);
    for (int k = 1; k <= d; ++k) cur.at(d, k) = lam[static_cast<std::size_t>(k - 1)];

    auto rec = [&](auto&& self, int l) -> void { // fill row l from row l+1
        if (l == 0) {
            out.push_back(cur);
            return;
        }
        auto fill = [&](auto&& fillSelf, int k) -> void { // entry k of row l, descending
            if (k > l) {
                self(self, l - 1);
                return;
            }
            for (long long v = cur.at(l + 1, k); v >= cur.at(l + 1, k + 1); --v) {
                cur.at(l, k) = v;
                fillSelf(fillSelf, k + 1);
            }
        };
        fill(fill, 1);
    };
    rec(rec, d - 1);
    return out;
}

// Weyl dimension formula: prod_{i<j} (lam_i - lam_j + j - i)/(j - i), exact.
inline Int weyl_dim(const Partition& lam) {
    if (!is_valid_partition(lam)) throw std::invalid_argument("weyl_dim: invalid partition");
    const int d = static_cast<int>(lam.size());
    Int num = 1, den = 1;
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            num *= lam[static_cast<std::size_t>(i)] - lam[static_cast<std::size_t>(j)] + j - i;
            den *= j - i;
        }
    return num / den;
}

// lam and mu are dual iff lam_k + mu_{d+1-k} = lam_1 + mu_d for every k.
inline bool is_dual(const Partition& lam, const Partition& mu) {
    if (lam.size() != mu.size()) return false;
    const std::size_t d = lam.size();
    const long long c = lam[0] + mu[d - 1];
    for (std::size_t k = 0; k < d; ++k)
        if (lam[k] + mu[d - 1 - k] != c) return false;
    return true;
}

// The unique mu with |mu| = total dual to lam, or nullopt when none exists.
inline std::optional<Partition> dual_partition(const Partition& lam, long long total) {
    if (!is_valid_partition(lam) || total < 0) return std::nullopt;
    const long long d = static_cast<long long>(lam.size());
    // sum_k mu_k = d*(lam_1 + mu_d) - |lam|  =>  mu_d determined
    const long long num = total + partition_total(lam) - d * lam[0];
    if (num % d != 0) return std::nullopt;
    const long long mu_d = num / d;
    if (mu_d < 0) return std::nullopt;
    Partition mu(lam.size());
    for (std::size_t k = 0; k < lam.size(); ++k) mu[k] = lam[0] + mu_d - lam[lam.size() - 1 - k];
    return mu;
}

// Row-wise duality of patterns: lam^l_k + mu^l_{l+1-k} = lam^l_1 + mu^l_l for
// all l, k, together with the level totals r_l(p1) + r_l(p2) = l(|lam|+|mu|)/d
// (zero weight at every level). The second condition is what makes the dual of
// a pattern unique and matches the singlet support exactly.
inline bool is_dual_gt(const GTPattern& p1, const GTPattern& p2) {
    if (p1.d != p2.d) return false;
    const int d = p1.d;
    const long long grand = p1.row_sum(d) + p2.row_sum(d);
    if (grand % d != 0) return false;
    for (int l = 1; l <= d; ++l) {
        const long long c = p1.at(l, 1) + p2.at(l, l);
        for (int k = 1; k <= l; ++k)
            if (p1.at(l, k) + p2.at(l, l + 1 - k) != c) return false;
        if (p1.row_sum(l) + p2.row_sum(l) != (grand / d) * l) return false;
    }
    return true;
}

// The unique pattern in GT(mu) dual to p (unique when mu is dual to p's top
// row): row sums must satisfy r_l(p) + r_l(q) = l*(|lam|+|mu|)/d, which pins
// every row constant.
inline std::optional<GTPattern> dual_gt_pattern(const GTPattern& p, const Partition& mu) {
    const int d = p.d;
    if (static_cast<int>(mu.size()) != d) return std::nullopt;
    if (!is_dual(p.top(), mu)) return std::nullopt;
    const long long grand = partition_total(p.top()) + partition_total(mu);
    if (grand % d != 0) return std::nullopt;
    GTPattern q;
    q.d = d;
    q.e.assign(static_cast<std::size_t>(d) * (d + 1) / 2, 0);
    for (int l = 1; l <= d; ++l) {
        // q^l_{l+1-k} = q^l_l + (p^l_1 - p^l_k); the row sum l*(grand/d) - r_l(p) pins q^l_l
        long long shiftSum = 0;
        for (int k = 1; k <= l; ++k) shiftSum += p.at(l, 1) - p.at(l, k);
        const long long target = (grand / d) * l - p.row_sum(l);
        if ((target - shiftSum) % l != 0) return std::nullopt;
        const long long qll = (target - shiftSum) / l;
        for (int k = 1; k <= l; ++k) q.at(l, l + 1 - k) = qll + (p.at(l, 1) - p.at(l, k));
    }
    if (!q.valid()) return std::nullopt;
    return q;
}

// Multiplicity N(n,k) of V_(k) in V_(s)^{otimes n}. Clebsch-Gordan recursion
// N(n,k) = sum_{j in [|k-s|, k+s]} N(n-1,j).
inline Int mult_su2(int n, HalfInt k, HalfInt s) {
    if (n < 1) throw std::invalid_argument("mult_su2: n >= 1 required");
    if (s < HalfInt(0) || k < HalfInt(0)) return 0;
    // index by doubled j, parity of n*s
    const long long maxTwice = n * s.twice;
    if (k.twice > maxTwice || (maxTwice - k.twice) % 2 != 0) return 0;
    std::vector<Int> cur(static_cast<std::size_t>(maxTwice + 1), Int(0));
    cur[static_cast<std::size_t>(s.twice)] = 1; // N(1,j) = delta_{j,s}
    for (int m = 2; m <= n; ++m) {
        std::vector<Int> next(cur.size(), Int(0));
        for (long long kt = (m * s.twice) % 2; kt <= maxTwice; kt += 2) {
            Int acc = 0;
            const long long lo = std::abs(kt - s.twice);
            const long long hi = kt + s.twice;
            for (long long jt = lo; jt <= hi && jt <= maxTwice; jt += 2) acc += cur[static_cast<std::size_t>(jt)];
            if (acc != 0) next[static_cast<std::size_t>(kt)] = std::move(acc);
        }
        cur.swap(next);
    }
    return cur[static_cast<std::size_t>(k.twice)];
}

// All mu obtained from lam by adding a horizontal strip of size s within d rows.
inline std::vector<Partition> pieri_strips(const Partition& lam, long long s) {
    const int d = static_cast<int>(lam.size());
    std::vector<Partition> out;
    Partition mu(lam);
    auto rec = [&](auto&& self, int row, long long rest) -> void {
        if (row == d) {
            if (rest == 0) out.push_back(mu);
            return;
        }
        const long long lo = lam[static_cast<std::size_t>(row)];
        const long long hi = row == 0 ? lo + rest
                                      : std::min(lo + rest, lam[static_cast<std::size_t>(row - 1)]);
        for (long long v = lo; v <= hi; ++v) {
            mu[static_cast<std::size_t>(row)] = v;
            self(self, row + 1, rest - (v - lo));
        }
        mu[static_cast<std::size_t>(row)] = lo;
    };
    rec(rec, 0, s);
    return out;
}

// Decomposition of Y_(s)^{otimes k} for su(d): partition -> multiplicity,
// built by iterating the Pieri rule k times.
inline std::map<Partition, Int> symmetric_power_decomposition(long long s, int k, int d) {
    if (s < 0 || k < 0 || d < 1) throw std::invalid_argument("symmetric_power_decomposition");
    std::map<Partition, Int> level{{Partition(static_cast<std::size_t>(d), 0), Int(1)}};
    for (int t = 0; t < k; ++t) {
        std::map<Partition, Int> next;
        for (const auto& [lam, mult] : level)
            for (const auto& mu : pieri_strips(lam, s)) next[mu] += mult;
        level.swap(next);
    }
    return level;
}

// Multiplicity N(lam) of V_lam in Y_(s)^{otimes k}; 0 on size mismatch.
inline Int mult_symmetric_power(long long s, int k, int d, const Partition& lam) {
    if (static_cast<int>(lam.size()) != d || partition_total(lam) != k * s) return 0;
    auto dec = symmetric_power_decomposition(s, k, d);
    auto it = dec.find(lam);
    return it == dec.end() ? Int(0) : it->second;
}

// Littlewood-Richardson coefficient N^nu_{lam,mu}: the number of LR skew
// tableaux of shape nu/lam and content mu. Independent of the Pieri route;
// used as a cross-oracle.
inline Int mult_lr(const Partition& lam, const Partition& mu, const Partition& nu) {
    const long long total = partition_total(lam) + partition_total(mu);
    if (partition_total(nu) != total) return 0;
    // normalize lengths
    const std::size_t rows = std::max(lam.size(), nu.size());
    Partition lamp(lam), nup(nu);
    lamp.resize(rows, 0);
    nup.resize(rows, 0);
    for (std::size_t r = 0; r < rows; ++r)
        if (nup[r] < lamp[r]) return 0;
    Partition content(mu);
    while (!content.empty() && content.back() == 0) content.pop_back();
    const int vals = static_cast<int>(content.size());
    if (vals == 0) return (lamp == nup) ? Int(1) : Int(0);

    // cells in reverse reading order: rows top to bottom, right to left
    struct Cell { int r; long long c; };
    std::vector<Cell> cells;
    for (std::size_t r = 0; r < rows; ++r)
        for (long long c = nup[r]; c > lamp[r]; --c) cells.push_back({static_cast<int>(r), c - 1});
    std::map<std::pair<int, long long>, int> fill;
    std::vector<long long> used(static_cast<std::size_t>(vals), 0);
    Int count = 0;
    auto rec = [&](auto&& self, std::size_t idx) -> void {
        if (idx == cells.size()) {
            ++count;
            return;
        }
        const auto [r, c] = cells[idx];
        for (int v = 1; v <= vals; ++v) {
            if (used[static_cast<std::size_t>(v - 1)] >= content[static_cast<std::size_t>(v - 1)]) continue;
            // lattice word: after placing v, #v <= #(v-1)
            if (v > 1 && used[static_cast<std::size_t>(v - 1)] + 1 > used[static_cast<std::size_t>(v - 2)]) continue;
            // row weakly increasing left->right: cell to the right already filled
            if (auto it = fill.find({r, c + 1}); it != fill.end() && v > it->second) continue;
            // column strictly increasing downwards
            if (r > 0 && c < nup[static_cast<std::size_t>(r - 1)] && c >= lamp[static_cast<std::size_t>(r - 1)]) {
                auto it = fill.find({r - 1, c});
                if (it != fill.end() && v <= it->second) continue;
            }
            fill[{r, c}] = v;
            ++used[static_cast<std::size_t>(v - 1)];
            self(self, idx + 1);
            --used[static_cast<std::size_t>(v - 1)];
            fill.erase({r, c});
        }
    };
    rec(rec, 0);
    return count;
}

// Dimension of the SU(d)-invariant subspace of Y_(s)^{otimes(p+q)} seen across
// the p|q cut: sum over dual pairs lam |- ps, lam_* |- qs of N(lam) N(lam_*).
inline Int d_inv_count(int d, long long s, int p, int q) {
    if (p < 1 || q < 1) throw std::invalid_argument("d_inv_count: p,q >= 1 required");
    if (((p + q) * s) % d != 0) return 0;
    const auto decP = symmetric_power_decomposition(s, p, d);
    const auto decQ = symmetric_power_decomposition(s, q, d);
    Int acc = 0;
    for (const auto& [lam, nl] : decP) {
        auto mu = dual_partition(lam, q * s);
        if (!mu) continue;
        auto it = decQ.find(*mu);
        if (it == decQ.end()) continue;
        acc += nl * it->second;
    }
    return acc;
}

// F(t,r) = sum_{k=0}^r (-1)^k C(r,k)/(k+t) and its closed form 1/(t*C(r+t,t)),
// both exact; they must agree.
struct FIdentity {
    Rat alternating_sum;
    Rat closed_form;
    bool equal() const { return alternating_sum == closed_form; }
};

inline FIdentity f_identity(long long t, long long r) {
    if (t < 1 || r < 1) throw std::invalid_argument("f_identity: t,r >= 1 required");
    Rat sum = 0;
    for (long long k = 0; k <= r; ++k) {
        Rat term(binomial(r, k), Int(k + t));
        sum += (k % 2 == 0) ? term : -term;
    }
    Rat closed(Int(1), t * binomial(r + t, t));
    return {sum, closed};
}

} // namespace invrep::combinat
