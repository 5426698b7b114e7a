// invrep command-line tool: exact dimensions and CGCs, purity experiments
// (CSV + JSON manifest), and the named verification suites.

#include "invrep/invrep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using invrep::HalfInt;
using json = nlohmann::json;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<HalfInt> parse_halfint_list(const std::string& csv) {
    std::vector<HalfInt> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(HalfInt::parse(tok));
    return out;
}

invrep::combinat::Partition parse_partition(const std::string& csv) {
    invrep::combinat::Partition out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
    if (!invrep::combinat::is_valid_partition(out))
        throw CLI::ValidationError("--lam", "not a non-increasing partition: " + csv);
    return out;
}

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

int run_dims(int d, const std::string& lamOpt, const std::string& sOpt, int n, int p, bool dinv) {
    if (!lamOpt.empty()) {
        auto lam = parse_partition(lamOpt);
        if (static_cast<int>(lam.size()) != d)
            throw CLI::ValidationError("--lam", "length must equal --d");
        const auto wd = invrep::combinat::weyl_dim(lam);
        std::cout << "weyl_dim " << wd.str() << "\n";
        if (wd <= invrep::Int(100000))
            std::cout << "gt_patterns " << invrep::combinat::gt_patterns(lam).size() << "\n";
        return 0;
    }
    if (sOpt.empty() || n <= 0) throw CLI::ValidationError("dims", "need --lam or (--s and --n)");
    const HalfInt s = HalfInt::parse(sOpt);
    if (!s.is_integer()) throw CLI::ValidationError("--s", "dims expects integer s (symmetric power)");
    const long long si = s.as_integer();
    invrep::combinat::Partition ys(static_cast<std::size_t>(d), 0);
    ys[0] = si;
    std::cout << "dim_Y " << invrep::combinat::weyl_dim(ys).str() << "\n";
    if (dinv) {
        const int pp = p > 0 ? p : n / 2 > 0 ? n / 2 : 1;
        std::cout << "d_inv " << invrep::combinat::d_inv_count(d, si, pp, n - pp).str() << "\n";
    }
    return 0;
}

int run_cgc(const std::string& j1, const std::string& j2, const std::string& j,
            const std::string& m1, const std::string& m2, const std::string& m) {
    const auto c = invrep::su2rep::racah_cgc_exact(HalfInt::parse(j1), HalfInt::parse(j2),
                                                   HalfInt::parse(j), HalfInt::parse(m1),
                                                   HalfInt::parse(m2), HalfInt::parse(m));
    if (c.sign == 0) {
        std::cout << "exact 0\nvalue 0\n";
        return 0;
    }
    const auto num = boost::multiprecision::numerator(c.mag2);
    const auto den = boost::multiprecision::denominator(c.mag2);
    std::cout << "exact " << (c.sign < 0 ? "-" : "+") << "sqrt(" << num.str() << "/" << den.str()
              << ")\n";
    std::cout << "value " << fmt_double(c.value()) << "\n";
    return 0;
}

struct PurityArgs {
    int d = 2;
    std::string sList;
    int n = 0, p = 0;
    std::string j0 = "0";
    long long trials = 1000;
    std::uint64_t seed = 0;
    double delta = 0.1;
    int threads = 1;
    bool exactOnly = false;
    bool mc = false;
    std::string out;
};

int run_purity(const PurityArgs& a) {
    const auto spins = parse_halfint_list(a.sList);
    const HalfInt j0 = HalfInt::parse(a.j0);

    std::ostringstream csv;
    csv << "d,s,n,p,j0,dInv,hMax,exactMean,mcMean,mcVar,etaMean,tailFraction,trials,seed\n";
    for (HalfInt s : spins) {
        invrep::montecarlo::ExperimentConfig cfg;
        cfg.d = a.d;
        cfg.s = s;
        cfg.n = a.n;
        cfg.p = a.p;
        cfg.j0 = j0;
        cfg.trials = a.trials;
        cfg.seed = a.seed;
        cfg.delta = a.delta;
        cfg.threads = a.threads;
        csv << a.d << "," << s.str() << "," << a.n << "," << a.p << "," << j0.str() << ",";
        if (a.mc && !a.exactOnly) {
            const auto st = invrep::montecarlo::run_experiment(cfg);
            csv << st.dInv << "," << fmt_double(st.hMax) << "," << fmt_double(st.exactMean) << ","
                << fmt_double(st.mcMean) << "," << fmt_double(st.mcVar) << ","
                << fmt_double(st.etaMean) << "," << fmt_double(st.tailFraction) << "," << st.samples
                << "," << a.seed << "\n";
        } else {
            const auto sub = invrep::montecarlo::build_subspace(cfg);
            const auto ex = invrep::entangle::exact_mean_purity(sub.basis, sub.split);
            csv << ex.dInv << "," << fmt_double(ex.hMax) << "," << fmt_double(ex.meanPurity)
                << ",,,,," << 0 << "," << a.seed << "\n";
        }
    }

    if (a.out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open output file " + a.out);
        f << csv.str();
        json manifest{
            {"tool", "invrep"},
            {"version", invrep::kVersion},
            {"command", "purity"},
            {"args",
             {{"d", a.d},
              {"s", a.sList},
              {"n", a.n},
              {"p", a.p},
              {"j0", a.j0},
              {"trials", a.trials},
              {"delta", a.delta},
              {"threads", a.threads},
              {"mode", a.mc && !a.exactOnly ? "mc" : "exact"}}},
            {"seed", a.seed},
            {"rng", invrep::montecarlo::kRngName},
            {"timestamp", iso_timestamp()},
            {"output", a.out},
            {"columns",
             "d,s,n,p,j0,dInv,hMax,exactMean,mcMean,mcVar,etaMean,tailFraction,trials,seed"}};
        std::ofstream mf(a.out + ".manifest.json", std::ios::binary);
        mf << manifest.dump(2) << "\n";
    }
    return 0;
}

int run_verify(const std::string& suite) {
    const auto& table = invrep::verify::suites();
    auto it = table.find(suite);
    if (it == table.end()) {
        std::cerr << "unknown suite '" << suite << "'; available:";
        for (const auto& [k, v] : table) std::cerr << " " << k;
        std::cerr << "\n";
        return 2;
    }
    const auto results = it->second();
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
        if (!r.detail.empty()) std::cout << " -- " << r.detail;
        std::cout << "\n";
        all = all && r.pass;
    }
    return all ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SU(d) invariant-state entanglement toolkit"};
    app.require_subcommand(1);

    auto* dims = app.add_subcommand("dims", "irrep dimensions, GT counts, invariant dimension");
    int dimD = 2, dimN = 0, dimP = 0;
    std::string dimLam, dimS;
    bool dimDinv = false;
    dims->add_option("--d", dimD, "local group SU(d)");
    dims->add_option("--lam", dimLam, "partition, comma separated");
    dims->add_option("--s", dimS, "symmetric power index");
    dims->add_option("--n", dimN, "tensor power");
    dims->add_option("--p", dimP, "split (defaults to n/2)");
    dims->add_flag("--dinv", dimDinv, "print d_inv_count");

    auto* cgc = app.add_subcommand("cgc", "Clebsch-Gordan coefficient by Racah's formula");
    std::string cj1, cj2, cj, cm1, cm2, cm;
    cgc->add_option("--j1", cj1)->required();
    cgc->add_option("--j2", cj2)->required();
    cgc->add_option("--j", cj)->required();
    cgc->add_option("--m1", cm1)->required();
    cgc->add_option("--m2", cm2)->required();
    cgc->add_option("--m", cm)->required();

    auto* purity = app.add_subcommand("purity", "exact and Monte Carlo purity statistics");
    PurityArgs pa;
    purity->add_option("--d", pa.d, "2 for the SU(2) near-invariant route, >=3 for SU(d)");
    purity->add_option("--s", pa.sList, "spin list, e.g. 1,3/2,2")->required();
    purity->add_option("--n", pa.n, "number of systems")->required();
    purity->add_option("--p", pa.p, "systems on the A side")->required();
    purity->add_option("--j0", pa.j0, "near-invariance cutoff (SU(2) only)");
    purity->add_option("--trials", pa.trials, "Monte Carlo samples per grid point");
    purity->add_option("--seed", pa.seed, "RNG seed");
    purity->add_option("--delta", pa.delta, "tail threshold on |eta-1|");
    purity->add_option("--threads", pa.threads, "worker threads (outputs independent of this)");
    purity->add_flag("--exact", pa.exactOnly, "exact columns only");
    purity->add_flag("--mc", pa.mc, "Monte Carlo sampling");
    purity->add_option("--out", pa.out, "CSV path (manifest written alongside)");

    auto* verify = app.add_subcommand("verify", "run a named verification suite");
    std::string suite;
    verify->add_option("suite", suite, "suite name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (dims->parsed()) return run_dims(dimD, dimLam, dimS, dimN, dimP, dimDinv);
        if (cgc->parsed()) return run_cgc(cj1, cj2, cj, cm1, cm2, cm);
        if (purity->parsed()) return run_purity(pa);
        if (verify->parsed()) return run_verify(suite);
    } catch (const invrep::EmptySubspace& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const invrep::CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
