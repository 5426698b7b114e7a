#pragma once

#include "invrep/config.hpp"
#include "invrep/entangle.hpp"
#include "invrep/halfint.hpp"
#include "invrep/numerics.hpp"
#include "invrep/su2rep.hpp"
#include "invrep/sudrep.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace invrep::montecarlo {

using numerics::CMatrix;
using numerics::CVector;

inline constexpr const char* kRngName = "splitmix64+box-muller";

// Counter-based substreams: each trial draws from its own splitmix64 stream
// seeded by (seed, trialIndex), so results do not depend on the thread schedule.
struct RngStream {
    std::uint64_t state;

    explicit RngStream(std::uint64_t s) : state(s) {}

    static RngStream substream(std::uint64_t seed, std::uint64_t trial) {
        std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (trial + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return RngStream(z ^ (z >> 31));
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform01_open() { // in (0, 1]
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    // Box-Muller pair; one standard normal per call
    double gaussian() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        const double u1 = uniform01_open();
        const double u2 = uniform01_open();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare = r * std::sin(a);
        have_spare = true;
        return r * std::cos(a);
    }

private:
    bool have_spare = false;
    double spare = 0;
};

// Haar-uniform unit vector in the span: iid standard complex Gaussian
// coefficients on the orthonormal basis, then normalized.
inline CVector sample_state(const CMatrix& basis, RngStream& rng) {
    const Eigen::Index k = basis.cols();
    if (k == 0) throw EmptySubspace("sample_state: empty basis");
    CVector c(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double re = rng.gaussian();
        const double im = rng.gaussian();
        c(i) = numerics::Cplx(re, im);
    }
    c /= c.norm();
    return basis * c;
}

struct ExperimentConfig {
    int d = 2;
    HalfInt s;          // spin for d=2 (half-integers allowed); integer required for d>=3
    int n = 0, p = 0;
    HalfInt j0{0};      // SU(2) only
    long long trials = 1;
    std::uint64_t seed = 0;
    double delta = 0.1; // tail threshold on |eta - 1|
    int threads = 1;
};

struct PurityStats {
    double mcMean = 0, mcVar = 0;
    double etaMean = 0;
    double tailFraction = 0;
    double exactMean = 0;
    double hMax = 0;
    long long dInv = 0;
    long long samples = 0;
};

// Basis of the configured subspace plus its split; throws EmptySubspace with
// the concrete obstruction when there are no states.
struct Subspace {
    CMatrix basis;
    entangle::BipartiteSplit split;
    std::vector<int> bgroups; // B-side sector labels when known (SU(2) route)
};

inline Subspace build_subspace(const ExperimentConfig& cfg) {
    if (cfg.p < 1 || cfg.p > cfg.n - 1)
        throw std::invalid_argument("build_subspace: 1 <= p <= n-1 required");
    Subspace out;
    if (cfg.d == 2) {
        const long long parity = (cfg.n * cfg.s.twice) % 2;
        if (cfg.j0.twice < parity)
            throw EmptySubspace("near-invariant space is empty: total spin of " +
                                std::to_string(cfg.n) + " spin-" + cfg.s.str() +
                                " systems is half-integer, so no j <= " + cfg.j0.str() +
                                " states exist (parity obstruction)");
        auto ni = su2rep::near_invariant_basis(cfg.s, cfg.n, cfg.p, cfg.j0);
        if (ni.size() == 0)
            throw EmptySubspace("near-invariant space is empty for s=" + cfg.s.str() +
                                ", n=" + std::to_string(cfg.n) + ", j0=" + cfg.j0.str());
        out.basis = std::move(ni.coeffs);
        out.bgroups.reserve(ni.labels.size());
        for (const auto& l : ni.labels) out.bgroups.push_back(l.bgroup);
        out.split = {cfg.p, cfg.n - cfg.p, static_cast<Eigen::Index>(cfg.s.twice + 1)};
    } else {
        if (!cfg.s.is_integer())
            throw std::invalid_argument("build_subspace: integer s required for d >= 3");
        const long long s = cfg.s.as_integer();
        if ((cfg.n * s) % cfg.d != 0)
            throw EmptySubspace("invariant space is empty: n*s = " + std::to_string(cfg.n * s) +
                                " is not divisible by d = " + std::to_string(cfg.d) +
                                " (divisibility obstruction)");
        out.basis = sudrep::invariant_subspace(cfg.d, s, cfg.n);
        if (out.basis.cols() == 0)
            throw EmptySubspace("invariant space is empty: no dual partition pairs with nonzero "
                                "multiplicity for d=" + std::to_string(cfg.d) + ", s=" +
                                std::to_string(s) + ", n=" + std::to_string(cfg.n));
        combinat::Partition top(static_cast<std::size_t>(cfg.d), 0);
        top[0] = s;
        out.split = {cfg.p, cfg.n - cfg.p,
                     static_cast<Eigen::Index>(combinat::weyl_dim(top).convert_to<long long>())};
    }
    return out;
}

// Runs `trials` Haar samples in the configured subspace. Deterministic for a
// given (cfg.seed, trial count): per-trial substreams, reduction in trial order.
inline PurityStats run_experiment(const ExperimentConfig& cfg) {
    if (cfg.trials < 1) throw std::invalid_argument("run_experiment: trials >= 1 required");
    const Subspace sub = build_subspace(cfg);
    const auto exact = entangle::exact_mean_purity(sub.basis, sub.split);

    const Eigen::Index dimA = sub.split.dimA(), dimB = sub.split.dimB();
    const long long N = cfg.trials;
    std::vector<double> purity(static_cast<std::size_t>(N)), etav(static_cast<std::size_t>(N));

    auto runRange = [&](long long lo, long long hi) {
        for (long long t = lo; t < hi; ++t) {
            RngStream rng = RngStream::substream(cfg.seed, static_cast<std::uint64_t>(t));
            CVector psi = sample_state(sub.basis, rng);
            auto u = numerics::as_bipartite(psi, dimA, dimB);
            double p2;
            if (dimA <= dimB) {
                CMatrix r = u * u.adjoint();
                p2 = r.squaredNorm();
            } else {
                CMatrix r = u.adjoint() * u;
                p2 = r.squaredNorm();
            }
            purity[static_cast<std::size_t>(t)] = p2;
            etav[static_cast<std::size_t>(t)] = -std::log(p2) / exact.hMax;
        }
    };

    const int workers = std::max(1, cfg.threads);
    if (workers == 1 || N < 2 * workers) {
        runRange(0, N);
    } else {
        std::vector<std::thread> pool;
        const long long chunk = (N + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const long long lo = w * chunk, hi = std::min<long long>(N, lo + chunk);
            if (lo < hi) pool.emplace_back(runRange, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    PurityStats st;
    st.samples = N;
    st.dInv = exact.dInv;
    st.hMax = exact.hMax;
    st.exactMean = exact.meanPurity;
    double sum = 0;
    for (double v : purity) sum += v;
    st.mcMean = sum / static_cast<double>(N);
    double ss = 0;
    for (double v : purity) ss += (v - st.mcMean) * (v - st.mcMean);
    st.mcVar = N > 1 ? ss / static_cast<double>(N - 1) : 0.0;
    double esum = 0;
    long long tail = 0;
    for (double e : etav) {
        esum += e;
        if (std::abs(e - 1.0) >= cfg.delta) ++tail;
    }
    st.etaMean = esum / static_cast<double>(N);
    st.tailFraction = static_cast<double>(tail) / static_cast<double>(N);
    return st;
}

} // namespace invrep::montecarlo
