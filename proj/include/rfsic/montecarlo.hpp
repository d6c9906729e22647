#pragma once

#include "rfsic/scenario.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace rfsic {

enum class DistKind { uniform, normal };

// uniform(lo, hi), or normal(mean, sigma) truncated to [lo, hi]. Sampled by
// inverse CDF from one uniform variate, so every draw consumes exactly one
// value of the run's random stream.
struct Distribution {
    DistKind kind = DistKind::uniform;
    double lo = 0.0;
    double hi = 0.0;
    double mean = 0.0;
    double sigma = 0.0;

    static Distribution uniform(double lo, double hi);
    static Distribution normal(double mean, double sigma, double lo, double hi);
    static Distribution fixed(double v) { return uniform(v, v); }

    void validate() const;
    // u in [0, 1)
    double sample(double u) const;
};

// "U(lo,hi)", "N(mean,sigma,lo,hi)" or a bare number (degenerate).
Distribution parse_distribution(std::string_view text);

// Perturbations sampled per run, in this canonical order. Unset entries keep
// the scenario's value but still consume one variate so streams stay aligned.
struct McDistributions {
    std::optional<Distribution> amp_imbalance_db;     // splitter.amp_imbalance_db
    std::optional<Distribution> phase_imbalance_deg;  // splitter.phase_imbalance_deg
    std::optional<Distribution> splitter_isolation_db;
    std::optional<Distribution> twin_mismatch;        // dummy_pert.delta_mag
    std::optional<Distribution> twin_mismatch_deg;    // dummy_pert.delta_phase_deg
    std::optional<Distribution> arm_skew_m;           // added to dummy_arm_length_offset_m
};

struct Percentiles {
    double p5;
    double p50;
    double p95;
};

struct McSummary {
    std::size_t runs = 0;
    std::uint64_t seed = 0;
    FrequencyGrid grid;
    std::vector<Percentiles> isolation;  // per frequency, tx_rx_isolation_db
    std::vector<double> band_min;        // per run, min isolation over the grid
    Percentiles band_min_pct{};
};

// Linear interpolation between order statistics (h = (n-1) p).
double percentile(std::vector<double> values, double p);

// Run k draws from an mt19937_64 seeded with seed_seq{seed, k}; runs execute
// in parallel and aggregate by run index, so the summary is bit-identical for
// any worker count.
McSummary monte_carlo(const ScenarioParams& p, const McDistributions& dists, std::size_t runs, std::uint64_t seed,
                      const FrequencyGrid& grid);

// The scenario used by run k (exposed for tests).
ScenarioParams sample_scenario(const ScenarioParams& p, const McDistributions& dists, std::uint64_t seed,
                               std::size_t run);

void write_mc_csv(std::ostream& out, const McSummary& s);

}  // namespace rfsic
