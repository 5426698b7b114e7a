#pragma once

#include "invrep/combinat.hpp"
#include "invrep/entangle.hpp"
#include "invrep/exact.hpp"
#include "invrep/halfint.hpp"
#include "invrep/montecarlo.hpp"
#include "invrep/su2rep.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace invrep::asymptotics {

// One log-log scaling check: pass iff |slope - target| <= tolerance (and every
// auxiliary bound listed in `detail` holds). `asserted=false` marks reports
// emitted outside a claim's hypotheses: values are informational only.
struct ScalingReport {
    std::string name;
    std::vector<double> xs, ys;
    double slope = 0, target = 0, tolerance = 0;
    bool pass = false;
    bool asserted = true;
    std::string detail;
};

inline double fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 3)
        throw std::invalid_argument("fit_loglog: need >= 3 matched points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= 0 || ys[i] <= 0) throw std::invalid_argument("fit_loglog: non-positive value");
        const double lx = std::log(xs[i]), ly = std::log(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Multiplicity window of the su(2) tensor power: N(n,k) <= (2s+1)^{n-2} for
// every k, N(n,k) >= s^{n-2} on k in [s, (n-1)s], and max_k N grows like s^{n-2}.
inline ScalingReport check_mult_window(int n, const std::vector<HalfInt>& sGrid) {
    if (n < 2) throw std::invalid_argument("check_mult_window: n >= 2");
    ScalingReport rep;
    rep.name = "mult_window(n=" + std::to_string(n) + ")";
    rep.target = n - 2;
    rep.tolerance = 0.3;
    bool boundsOk = true;
    std::ostringstream det;
    for (HalfInt s : sGrid) {
        Int mx = 0;
        for (long long kt = (n * s.twice) % 2; kt <= n * s.twice; kt += 2)
            mx = std::max(mx, combinat::mult_su2(n, HalfInt::from_twice(kt), s));
        Int windowMin = -1;
        for (long long kt = s.twice; kt <= (n - 1) * s.twice; kt += 2) {
            if ((n * s.twice - kt) % 2 != 0) continue;
            Int v = combinat::mult_su2(n, HalfInt::from_twice(kt), s);
            if (windowMin < 0 || v < windowMin) windowMin = v;
        }
        // exact upper bound from the recursion; the window lower bound is
        // asymptotic (constants matter at the edge, e.g. N(4,3s) = (s+1)(s+2)/2),
        // so it is checked as a grid-independent ratio
        const double upper = std::pow(s.twice + 1.0, n - 2);
        const double lowerRatio =
            windowMin >= 0 ? to_double(windowMin) / std::pow(s.value(), n - 2) : 1.0;
        if (to_double(mx) > upper + 1e-9 || lowerRatio < 0.25) {
            boundsOk = false;
            det << "bound violated at s=" << s.str() << "; ";
        }
        rep.xs.push_back(s.value());
        rep.ys.push_back(to_double(mx));
    }
    if (n == 2) {
        // N(2,k) = 1 identically: slope 0
        rep.slope = 0;
        for (double y : rep.ys) boundsOk = boundsOk && y == 1.0;
        rep.pass = boundsOk;
        rep.detail = det.str();
        return rep;
    }
    rep.slope = fit_loglog(rep.xs, rep.ys);
    rep.pass = boundsOk && std::abs(rep.slope - rep.target) <= rep.tolerance;
    rep.detail = det.str();
    return rep;
}

namespace detail {

// nearest projection to j1/2 with the parity required by j1
inline HalfInt half_of(HalfInt j1) {
    long long t = j1.twice / 2;
    if ((j1.twice - t) % 2 != 0) --t;
    return HalfInt::from_twice(t);
}

} // namespace detail

// Stretched-m CGC magnitude against the model j1^{-j-1/2} (j1-m1)^{(j+D)/2}
// (j1+m1)^{(j-D)/2} for m1 = 0 and m1 ~ j1/2; the ratio must stay inside a
// fixed interval [1/c, c] with c = 4.
inline ScalingReport check_cgc_asymptotics(HalfInt j, HalfInt delta, const std::vector<HalfInt>& j1Grid) {
    if (delta.twice > j.twice || delta.twice < -j.twice)
        throw std::invalid_argument("check_cgc_asymptotics: |delta| <= j");
    ScalingReport rep;
    rep.name = "cgc_asymptotics(j=" + j.str() + ", delta=" + delta.str() + ")";
    rep.tolerance = 4.0; // interval constant, not a slope tolerance
    double cMax = 0, cMin = 1e300;
    bool ok = true;
    std::ostringstream det;
    for (HalfInt j1 : j1Grid) {
        const HalfInt j2 = j1 + delta;
        for (HalfInt m1 : {HalfInt(0), detail::half_of(j1)}) {
            if (!j1.admits_projection(m1)) continue;
            const HalfInt m2 = j - m1;
            if (!j2.admits_projection(m2)) continue;
            const double c = std::abs(su2rep::racah_cgc(j1, j2, j, m1, m2, j));
            if (c == 0) continue;
            const double model = std::pow(j1.value(), -j.value() - 0.5) *
                                 std::pow((j1 - m1).value(), (j + delta).value() / 2) *
                                 std::pow((j1 + m1).value(), (j - delta).value() / 2);
            const double ratio = c / model;
            cMax = std::max(cMax, ratio);
            cMin = std::min(cMin, ratio);
            rep.xs.push_back(j1.value());
            rep.ys.push_back(ratio);
        }
    }
    ok = ok && cMax <= rep.tolerance && cMin >= 1.0 / rep.tolerance;
    det << "ratio range [" << cMin << ", " << cMax << "]";
    rep.slope = cMax; // reported constant
    rep.target = 1.0;
    rep.pass = ok && !rep.xs.empty();
    rep.detail = det.str();
    return rep;
}

// General-m upper bound (the sum-form estimate): |C^{j1,j1+D,j}_{m1,m-m1,m}|
// <= c * j1^{-j-1/2} sum_k (j1-m1)^{j-k+(m-D)/2} (j1+m1)^{k+(D-m)/2}.
inline ScalingReport check_cgc_upper_bound(HalfInt j, HalfInt delta, HalfInt m,
                                           const std::vector<HalfInt>& j1Grid) {
    ScalingReport rep;
    rep.name = "cgc_upper_bound(j=" + j.str() + ", delta=" + delta.str() + ", m=" + m.str() + ")";
    rep.tolerance = 4.0;
    double cMax = 0;
    for (HalfInt j1 : j1Grid) {
        const HalfInt j2 = j1 + delta;
        for (long long m1t = -j1.twice; m1t <= j1.twice; m1t += 2) {
            const HalfInt m1 = HalfInt::from_twice(m1t);
            const HalfInt m2 = m - m1;
            if (!j2.admits_projection(m2)) continue;
            const double c = std::abs(su2rep::racah_cgc(j1, j2, j, m1, m2, m));
            if (c == 0) continue;
            double bound = 0;
            const double jm = (m - delta).value() / 2;
            const long long kMax = (j.twice - delta.twice) / 2;
            for (long long k = 0; k <= kMax; ++k)
                bound += std::pow((j1 - m1).value(), j.value() - k + jm) *
                         std::pow((j1 + m1).value(), k - jm);
            bound *= std::pow(j1.value(), -j.value() - 0.5);
            if (bound > 0) cMax = std::max(cMax, c / bound);
        }
        rep.xs.push_back(j1.value());
        rep.ys.push_back(cMax);
    }
    rep.slope = cMax;
    rep.target = 1.0;
    rep.pass = cMax <= rep.tolerance && cMax > 0;
    rep.detail = "max |C|/bound = " + std::to_string(cMax);
    return rep;
}

// sum_{i=1}^{n-1} i^t (n-i)^r grows like n^{t+r+1}; slope tolerance 0.1.
inline ScalingReport check_power_sum_slope(int t, int r, const std::vector<long long>& nGrid) {
    ScalingReport rep;
    rep.name = "power_sum(t=" + std::to_string(t) + ", r=" + std::to_string(r) + ")";
    rep.target = t + r + 1;
    rep.tolerance = 0.1;
    for (long long n : nGrid) {
        Int acc = 0;
        for (long long i = 1; i <= n - 1; ++i) {
            Int term = 1;
            for (int a = 0; a < t; ++a) term *= i;
            for (int a = 0; a < r; ++a) term *= (n - i);
            acc += term;
        }
        rep.xs.push_back(static_cast<double>(n));
        rep.ys.push_back(to_double(acc));
    }
    rep.slope = fit_loglog(rep.xs, rep.ys);
    rep.pass = std::abs(rep.slope - rep.target) <= rep.tolerance;
    return rep;
}

// Mean-purity scaling: slope of the closed-form mean purity against s must sit
// within 0.35 of -p (d=2, SU(2) route, j0 = parity-minimal) or -p(d-1) (d>=3,
// lambda-sum route, divisibility-filtered grid).
inline ScalingReport check_purity_scaling(int d, int p, int q, const std::vector<HalfInt>& sGrid) {
    ScalingReport rep;
    rep.name = "purity_scaling(d=" + std::to_string(d) + ", p=" + std::to_string(p) +
               ", q=" + std::to_string(q) + ")";
    rep.tolerance = 0.35;
    rep.target = d == 2 ? -p : -p * (d - 1);
    const int n = p + q;
    for (HalfInt s : sGrid) {
        if (d == 2) {
            const HalfInt j0 = HalfInt::from_twice((n * s.twice) % 2);
            auto cf = entangle::su2_swap_trace_sums(s, p, q, j0);
            if (cf.dInv == 0) continue;
            rep.xs.push_back(s.value());
            rep.ys.push_back(to_double(cf.meanPurity));
        } else {
            if (!s.is_integer()) throw std::invalid_argument("check_purity_scaling: integer s for d>=3");
            const long long si = s.as_integer();
            if ((static_cast<long long>(n) * si) % d != 0) continue; // divisibility filter
            try {
                auto cf = entangle::closed_form_mean_purity(d, si, p, q);
                rep.xs.push_back(static_cast<double>(si));
                rep.ys.push_back(cf.meanPurity);
            } catch (const EmptySubspace&) {
                continue;
            }
        }
    }
    if (rep.xs.size() < 3) throw std::invalid_argument("check_purity_scaling: empty grid after filtering");
    rep.slope = fit_loglog(rep.xs, rep.ys);
    rep.pass = std::abs(rep.slope - rep.target) <= rep.tolerance;
    return rep;
}

// Fluctuation of the purity: ratio := E(tr rho_A^2)^2 / (E tr rho_A^2)^2 - 1
// computed exactly on the dense route; decays across the grid. Asserted only
// under the hypothesis q >= p >= 2, q >= 3.
inline ScalingReport check_fluctuation_decay(int d, int p, int q, const std::vector<HalfInt>& sGrid) {
    ScalingReport rep;
    rep.name = "fluctuation_decay(d=" + std::to_string(d) + ", p=" + std::to_string(p) +
               ", q=" + std::to_string(q) + ")";
    rep.target = -0.5; // slope must be at most this
    rep.tolerance = 0.0;
    rep.asserted = q >= p && p >= 2 && q >= 3;
    const int n = p + q;
    bool strictlyDecreasing = true;
    double prev = -1;
    for (HalfInt s : sGrid) {
        montecarlo::ExperimentConfig cfg;
        cfg.d = d;
        cfg.s = s;
        cfg.n = n;
        cfg.p = p;
        cfg.j0 = HalfInt::from_twice((n * s.twice) % 2);
        montecarlo::Subspace sub;
        try {
            sub = montecarlo::build_subspace(cfg);
        } catch (const EmptySubspace&) {
            continue;
        }
        const auto mean = entangle::exact_mean_purity(sub.basis, sub.split);
        const auto second = entangle::second_moment_purity(sub.basis, sub.split, sub.bgroups);
        const double ratio = second.second_moment / (mean.meanPurity * mean.meanPurity) - 1.0;
        if (mean.dInv == 1 && std::abs(ratio) > 1e-10) strictlyDecreasing = false;
        if (!rep.ys.empty() && ratio >= prev) strictlyDecreasing = false;
        prev = ratio;
        rep.xs.push_back(s.value());
        rep.ys.push_back(ratio);
    }
    if (rep.xs.size() >= 3) {
        rep.slope = fit_loglog(rep.xs, rep.ys);
        rep.pass = strictlyDecreasing && rep.slope <= rep.target;
    } else {
        rep.slope = 0;
        rep.pass = strictlyDecreasing && !rep.xs.empty();
    }
    rep.detail = strictlyDecreasing ? "strictly decreasing" : "not strictly decreasing";
    if (!rep.asserted) rep.pass = true; // outside the hypothesis: report only
    return rep;
}

// Lemma 10/11 exponents for the multiplicity of a scaled strictly-decreasing
// profile and of its dual partition.
struct MultExponentReport {
    ScalingReport primal, dual;
};

// Strictly decreasing positive ramp summing to p with mu_1 < b: evenly spaced
// steps at 0.7 of the largest admissible gap (keeps desk-scale multiplicities
// in their asymptotic regime).
inline std::vector<double> default_profile(int p, int d, double b) {
    const int h = std::min(p, d);
    if (h == 1) return {static_cast<double>(p)};
    const double gmax = std::min(2.0 * p / (h * (h - 1.0)),
                                 2.0 * (b - static_cast<double>(p) / h) / (h - 1.0));
    const double g = 0.7 * gmax;
    std::vector<double> mu(static_cast<std::size_t>(h));
    for (int i = 0; i < h; ++i)
        mu[static_cast<std::size_t>(i)] = static_cast<double>(p) / h + g * (h - 1 - 2.0 * i) / 2.0;
    return mu;
}

inline MultExponentReport check_mult_exponents_sud(int d, int p, int q,
                                                   const std::vector<long long>& sGrid,
                                                   std::vector<double> profile = {}) {
    const double b = static_cast<double>(p + q) / d;
    const int t = p + q - d;
    if (t > 0) {
        if (profile.empty()) profile = default_profile(p, d, b);
        if (profile[0] >= b)
            throw std::invalid_argument("check_mult_exponents_sud: profile violates mu_1 < b");
    }

    MultExponentReport out;
    out.primal.name = "mult_exponent(d=" + std::to_string(d) + ", p=" + std::to_string(p) + ")";
    out.primal.tolerance = 0.4;
    out.primal.target = p <= d ? (p - 1) * (p - 2) / 2.0
                               : (d - 1) * (d - 2) / 2.0 + static_cast<double>((d - 1) * (p - d));
    out.dual.name = "dual_mult_exponent(d=" + std::to_string(d) + ", p=" + std::to_string(p) +
                    ", q=" + std::to_string(q) + ")";
    out.dual.tolerance = 0.4;
    if (t <= 0) {
        out.dual.target = 0; // N(lam_*) = 0 for every lam
    } else if (p >= d) {
        out.dual.target = (d - 1) * (d - 2) / 2.0 + static_cast<double>((d - 1) * (q - d));
    } else if (t >= d) {
        out.dual.target = (d - 1) * (d - 2) / 2.0 + static_cast<double>((d - 1) * (t - d)) +
                          (p + d - 1) * (d - p) / 2.0;
    } else if (q >= d) {
        out.dual.target = (p + t - 1) * (q - d) / 2.0 + static_cast<double>((t - 1) * (d - t)) +
                          (t - 1) * (t - 2) / 2.0;
    } else {
        out.dual.target = static_cast<double>((p - 1) * (d - p)) + (t - 1) * (t - 2) / 2.0;
    }

    bool dualAllZero = true;
    if (t <= 0) {
        // Lemma 11's t<=0 clause is unconditional in lam: no dual of any
        // lam |- ps in Par(qs) carries multiplicity
        for (long long s : sGrid)
            for (const auto& lam : combinat::partitions(p * s, std::min(p, d))) {
                combinat::Partition padded(lam);
                padded.resize(static_cast<std::size_t>(d), 0);
                auto mu = combinat::dual_partition(padded, static_cast<long long>(q) * s);
                if (!mu) continue;
                if (combinat::mult_symmetric_power(s, q, d, *mu) > 0) dualAllZero = false;
            }
        out.dual.pass = dualAllZero;
        out.dual.detail = "t <= 0: dual multiplicities must vanish";
        out.primal.pass = true;
        out.primal.detail = "t <= 0: primal side not asserted";
        return out;
    }
    for (long long s : sGrid) {
        if ((static_cast<long long>(p + q) * s) % d != 0) continue;
        // component-wise floor, remainder pushed to the largest part
        combinat::Partition lam(static_cast<std::size_t>(d), 0);
        long long placed = 0;
        for (std::size_t i = 0; i < profile.size(); ++i) {
            lam[i] = static_cast<long long>(std::floor(profile[i] * static_cast<double>(s)));
            placed += lam[i];
        }
        lam[0] += p * s - placed;
        if (!combinat::is_valid_partition(lam)) continue;
        const Int npl = combinat::mult_symmetric_power(s, p, d, lam);
        if (npl > 0) {
            out.primal.xs.push_back(static_cast<double>(s));
            out.primal.ys.push_back(to_double(npl));
        }
        auto mu = combinat::dual_partition(lam, q * s);
        if (mu) {
            const Int nd = combinat::mult_symmetric_power(s, q, d, *mu);
            if (nd > 0) {
                dualAllZero = false;
                out.dual.xs.push_back(static_cast<double>(s));
                out.dual.ys.push_back(to_double(nd));
            }
        }
    }

    if (out.primal.xs.size() >= 3) {
        out.primal.slope = fit_loglog(out.primal.xs, out.primal.ys);
        out.primal.pass = std::abs(out.primal.slope - out.primal.target) <= out.primal.tolerance;
    } else if (out.primal.target == 0 && !out.primal.ys.empty()) {
        // bounded multiplicity: accept when the values stay O(1)
        out.primal.slope = 0;
        out.primal.pass = true;
        for (double y : out.primal.ys) out.primal.pass = out.primal.pass && y >= 1;
    }
    (void)dualAllZero;
    if (out.dual.xs.size() >= 3) {
        out.dual.slope = fit_loglog(out.dual.xs, out.dual.ys);
        out.dual.pass = std::abs(out.dual.slope - out.dual.target) <= out.dual.tolerance;
    }
    return out;
}

} // namespace invrep::asymptotics
