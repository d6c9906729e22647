// Stand-alone acceptance run: one PASS/FAIL line per criterion, each with its
// wall time checked against the budget. Exit status is nonzero if any fails.

#include "random_circuit.hpp"

#include "cli.hpp"
#include "rfsic/metrics.hpp"
#include "rfsic/netlist.hpp"
#include "rfsic/optimize.hpp"
#include "rfsic/scenario.hpp"
#include "rfsic/touchstone.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace rfsic;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string fmt(const char* f, double a, double b) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

std::string fmt(const char* f, double a, double b, double c) {
    char buf[200];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

const double kT = 1.0 / std::sqrt(2.0);

FrequencyGrid full_band() { return make_grid(1e9, 3e9, 401, Spacing::linear); }

std::string bundled(const std::string& name) { return std::string(RFSIC_SOURCE_DIR) + "/netlists/" + name; }

Complex entry(const NetworkBlock& reduced, const Circuit& c, std::size_t k, const char* to, const char* from) {
    return reduced.at(k)(c.external_index(to), c.external_index(from));
}

// --- 1 -------------------------------------------------------------------------

Outcome ideal_null() {
    std::mt19937_64 rng(20240901);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto g = full_band();
    double worst = 0.0;
    const int trials = 12;
    for (int t = 0; t < trials; ++t) {
        ScenarioParams p = ScenarioParams::from_preset(Preset::ideal);
        if (t % 2 == 0)
            p.antenna = AntennaModel::series_rlc(10.0 + 90.0 * u(rng), 1e-9 + 9e-9 * u(rng), 0.5e-12 + 9.5e-12 * u(rng));
        else
            p.antenna = AntennaModel::constant_gamma(std::polar(0.95 * u(rng), 2.0 * M_PI * u(rng)));
        // Identical splitters everywhere; finite isolation needs excess loss to stay passive.
        p.splitter.excess_loss_db = 0.3 + 2.0 * u(rng);
        p.splitter.isolation_db = 15.0 + 25.0 * u(rng);
        p.splitter.thru_phase_deg = -180.0 + 360.0 * u(rng);
        const CableParams feed{0.02 + 0.3 * u(rng), 0.6 + 0.3 * u(rng), 0.5 * u(rng)};
        const CableParams out{0.02 + 0.3 * u(rng), 0.6 + 0.3 * u(rng), 0.5 * u(rng)};
        p.arm_a = {feed, out};
        p.arm_b = {feed, out};
        const Circuit c = build_y3(p, g);
        const NetworkBlock r = reduce(c);
        for (std::size_t k = 0; k < g.size(); ++k)
            worst = std::max(worst, std::abs(entry(r, c, k, "Rx", "Tx")));
    }
    return {worst <= 1e-10, fmt("%.0f scenarios x 401 points, max |S(Rx,Tx)| = %.3g", trials, worst)};
}

// --- 2 -------------------------------------------------------------------------

Outcome three_db_loss() {
    double worst = 0.0;
    const auto g = full_band();
    const Circuit built = build_y3(ScenarioParams::from_preset(Preset::ideal), g);
    const NetworkBlock r = reduce(built);
    for (std::size_t k = 0; k < g.size(); ++k)
        worst = std::max(worst, std::abs(std::abs(entry(r, built, k, "Rx", "Ant")) - kT));

    const Netlist nl = load_netlist(bundled("y3_ideal.net"));
    const NetworkBlock rn = reduce(nl.circuit);
    for (std::size_t k = 0; k < nl.grid.size(); ++k)
        worst = std::max(worst, std::abs(std::abs(entry(rn, nl.circuit, k, "Rx", "Ant")) - kT));
    return {worst <= 1e-6, fmt("max ||S(Rx,Ant)| - 1/sqrt2| = %.3g (builder and y3_ideal.net)", worst)};
}

// --- 3 -------------------------------------------------------------------------

Outcome baselines() {
    const auto g = full_band();
    const auto matched = AntennaModel::matched();
    const auto zero = metrics(build_circulator_frontend({0.0, 0.0}, matched, g)).at(kTxRxIsolation);
    const auto circ = metrics(build_circulator_frontend({0.1, 0.0}, matched, g)).at(kTxRxIsolation);
    SplitterParams sp = SplitterParams::cots();
    sp.isolation_db = 20.0;
    const auto split = metrics(build_splitter_frontend(sp, matched, g)).at(kTxRxIsolation);
    const auto circ_nl = metrics(load_netlist(bundled("circulator_gamma01.net")).circuit).at(kTxRxIsolation);
    const auto split_nl = metrics(load_netlist(bundled("splitter20.net")).circuit).at(kTxRxIsolation);

    bool all_capped = true;
    for (double v : zero)
        all_capped = all_capped && cap_db(v).capped;
    double circ_err = 0.0, split_err = 0.0;
    for (double v : circ)
        circ_err = std::max(circ_err, std::abs(v - 20.0));
    for (double v : circ_nl)
        circ_err = std::max(circ_err, std::abs(v - 20.0));
    for (double v : split)
        split_err = std::max(split_err, std::abs(v - 20.0));
    for (double v : split_nl)
        split_err = std::max(split_err, std::abs(v - 20.0));
    const bool ok = all_capped && circ_err <= 1e-6 && split_err <= 1e-6;
    return {ok, std::string(all_capped ? "gamma=0 capped" : "gamma=0 NOT capped") +
                    fmt(", gamma=0.1 max err %.3g dB, splitter max err %.3g dB", circ_err, split_err)};
}

// --- 4 -------------------------------------------------------------------------

Outcome oracle_equivalence() {
    std::mt19937_64 rng(777);
    double worst_rel = 0.0, worst_gain = 0.0, worst_recip = 0.0;
    const int n = 200;
    for (int i = 0; i < n; ++i) {
        testsupport::RandomCircuitOptions opt;
        opt.reciprocal = (i % 2 == 1);
        const Circuit c = testsupport::random_circuit(rng, opt);
        const NetworkBlock r = reduce(c);
        for (std::size_t k = 0; k < c.grid().size(); ++k) {
            const CMatrix& s = r.at(k);
            worst_rel = std::max(worst_rel, testsupport::relative_difference(s, testsupport::oracle_matrix(c, k)));
            worst_gain = std::max(worst_gain, max_singular_value(s));
            if (opt.reciprocal)
                worst_recip = std::max(worst_recip, (s - s.transpose()).cwiseAbs().maxCoeff());
        }
    }
    const bool ok = worst_rel <= 1e-10 && worst_gain <= 1.0 + 1e-8 && worst_recip <= 1e-10;
    return {ok, fmt("200 circuits: max rel diff %.3g, max sigma %.12g, max |S-S^T| %.3g", worst_rel, worst_gain,
                    worst_recip)};
}

// --- 5 and 6 -----------------------------------------------------------------------

constexpr double kEdgeTol = 1.0;

bool inside(const BandStats& s, double lo, double hi) { return s.min >= lo - kEdgeTol && s.max <= hi + kEdgeTol; }

Outcome calibrated_envelope() {
    const auto r = metrics(build_y3(named_scenario("cots-calibrated"), full_band()));
    const auto full = band_stats(r, 1e9, 3e9);
    const auto wifi = band_stats(r, 2.4e9, 2.7e9);
    const auto& iso = full.at(std::string(kTxRxIsolation));
    const auto& iso_w = wifi.at(std::string(kTxRxIsolation));
    const auto& il = full.at(std::string(kAntRxIl));
    const bool ok = inside(iso, 25.0, 60.0) && inside(iso_w, 50.0, 60.0) && inside(il, 8.0, 15.0);
    std::ostringstream d;
    d << fmt("isolation 1-3 GHz %.2f..%.2f dB", iso.min, iso.max)
      << fmt(", 2.4-2.7 GHz %.2f..%.2f dB", iso_w.min, iso_w.max)
      << fmt(", Ant-Rx IL %.2f..%.2f dB", il.min, il.max);
    return {ok, d.str()};
}

Outcome improvement_window() {
    const auto g = full_band();
    const auto y3 = metrics(build_y3(named_scenario("cots-calibrated"), g));
    SplitterParams sp = SplitterParams::cots();
    sp.isolation_db = 20.0;
    const auto base = metrics(build_splitter_frontend(sp, AntennaModel::matched(), g));
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& d : improvement_over_baseline(y3, base)) {
        lo = std::min(lo, d.value);
        hi = std::max(hi, d.value);
    }
    const bool ok = lo >= 6.5 - kEdgeTol && hi <= 33.0 + kEdgeTol;
    return {ok, fmt("improvement over 20 dB splitter %.2f..%.2f dB", lo, hi)};
}

// --- 7 -------------------------------------------------------------------------

Outcome mismatch_closed_form() {
    const auto g = full_band();
    ScenarioParams p = ScenarioParams::from_preset(Preset::ideal);
    p.dummy_pert.delta_mag = 0.01;
    const Circuit c = build_y3(p, g);
    const NetworkBlock r = reduce(c);
    const auto tx = static_cast<std::size_t>(c.external_index("Tx"));
    const auto rx = c.external_index("Rx");
    double worst_db = 0.0, worst_oracle = 0.0, lo = INFINITY, hi = -INFINITY;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const Complex s = entry(r, c, k, "Rx", "Tx");
        const double iso = loss_db(std::abs(s));
        lo = std::min(lo, iso);
        hi = std::max(hi, iso);
        worst_db = std::max(worst_db, std::abs(iso - 49.0));
        if (k % 20 == 0)
            worst_oracle = std::max(worst_oracle, std::abs(oracle_solve(c, k, tx)(rx) - s));
    }
    const bool ok = worst_db <= 0.1 && worst_oracle <= 1e-12;
    return {ok, fmt("isolation %.4f..%.4f dB, max |reduce - oracle| %.3g", lo, hi, worst_oracle)};
}

// --- 8 -------------------------------------------------------------------------

Outcome optimizer_recovery() {
    ScenarioParams p = ScenarioParams::from_preset(Preset::ideal);
    p.antenna = AntennaModel::series_rlc(30.0, 3e-9, 2e-12);
    p.arm_b.feed.length_m += 0.003;
    const auto r = optimize_arm_length(p, {-0.01, 0.01}, {1e9, 3e9}, full_band());
    const auto achieved = cap_db(r.achieved_min_isolation_db);
    const bool ok = std::abs(r.best_offset_m + 0.003) <= 1e-5 && achieved.capped;
    return {ok, fmt("best offset %.9f m, isolation %.1f dB", r.best_offset_m, achieved.value) +
                    (achieved.capped ? " (capped)" : "") + fmt(", from %.2f dB", r.baseline_min_isolation_db)};
}

// --- 9 -------------------------------------------------------------------------

std::string run_mc_csv() {
    const char* argv[] = {"rfsic",           "montecarlo",      "--preset",        "cots-calibrated",
                          "--runs",          "1000",            "--seed",          "42",
                          "--amp-imbalance", "U(-0.5,0.5)",     "--phase-imbalance", "N(0,2,-6,6)",
                          "--twin-mismatch", "U(0,0.02)",       "--arm-skew",      "N(0,0.001,-0.003,0.003)"};
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(std::size(argv)), argv, out, err);
    if (code != cli::kExitOk)
        throw std::runtime_error("montecarlo exited with " + std::to_string(code) + ": " + err.str());
    return out.str();
}

Outcome determinism() {
    const std::string a = run_mc_csv();
    const std::string b = run_mc_csv();
    setenv("RFSIC_THREADS", "1", 1);
    const std::string one = run_mc_csv();
    setenv("RFSIC_THREADS", "3", 1);
    const std::string three = run_mc_csv();
    unsetenv("RFSIC_THREADS");
    const bool ok = !a.empty() && a == b && a == one && a == three;
    return {ok, std::string(a == b ? "repeat identical" : "repeat DIFFERS") +
                    (a == one && a == three ? ", RFSIC_THREADS=1/3 identical" : ", thread counts DIFFER") +
                    fmt(", %.0f bytes", static_cast<double>(a.size()))};
}

// --- 10 ------------------------------------------------------------------------

Outcome touchstone_conformance() {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto g = make_grid(0.1e9, 20e9, 57, Spacing::log);
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n) {
        std::vector<CMatrix> ms;
        for (std::size_t k = 0; k < g.size(); ++k) {
            CMatrix m(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    m(i, j) = Complex(u(rng), u(rng)) * 2.0;
            ms.push_back(m);
        }
        const NetworkBlock b("rt", g, ms);
        for (auto f : {DataFormat::ri, DataFormat::ma, DataFormat::db}) {
            const auto back = parse_touchstone(write_touchstone(b, f), n);
            for (std::size_t k = 0; k < g.size(); ++k)
                worst = std::max(worst, (back.at(k) - b.at(k)).cwiseAbs().maxCoeff());
        }
    }
    const Complex ri = parse_touchstone("# HZ S RI R 50\n1e9 0.25 -0.5\n", 1).s(0, 1, 1);
    const Complex ma = parse_touchstone("# GHZ S MA R 50\n1.0 0.5 90.0\n", 1).s(0, 1, 1);
    const Complex db = parse_touchstone("# GHZ S DB R 50\n1.0 -6.0206 180\n", 1).s(0, 1, 1);
    const bool examples = ri == Complex(0.25, -0.5) && std::abs(ma - Complex(0.0, 0.5)) <= 1e-12 &&
                          std::abs(db - Complex(-0.5, 0.0)) <= 1e-4;
    return {worst <= 1e-9 && examples, fmt("round-trip max err %.3g over 1-4 ports x RI/MA/DB", worst) +
                                           (examples ? ", parse examples match" : ", parse examples MISMATCH")};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> criteria{
        {"ideal null", 5.0, ideal_null},
        {"3 dB receive loss", 1.0, three_db_loss},
        {"circulator and splitter baselines", 1.0, baselines},
        {"reduce matches oracle", 60.0, oracle_equivalence},
        {"calibrated COTS envelope", 5.0, calibrated_envelope},
        {"improvement window", 2.0, improvement_window},
        {"twin mismatch closed form", 1.0, mismatch_closed_form},
        {"optimizer recovers skew", 10.0, optimizer_recovery},
        {"Monte Carlo determinism", 30.0, determinism},
        {"Touchstone conformance", 5.0, touchstone_conformance},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o{false, ""};
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs < c.budget_s;
        const bool pass = o.ok && in_time;
        failures += pass ? 0 : 1;
        std::cout << (pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << c.name << ": " << o.detail
                  << fmt(" [%.3f s, budget %.0f s]", secs, c.budget_s) << (in_time ? "" : " OVER BUDGET") << '\n';
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
