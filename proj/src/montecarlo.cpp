#include "rfsic/montecarlo.hpp"

#include "rfsic/errors.hpp"
#include "rfsic/metrics.hpp"
#include "rfsic/parallel.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

namespace rfsic {

Distribution Distribution::uniform(double lo, double hi) {
    Distribution d;
    d.kind = DistKind::uniform;
    d.lo = lo;
    d.hi = hi;
    d.validate();
    return d;
}

Distribution Distribution::normal(double mean, double sigma, double lo, double hi) {
    Distribution d;
    d.kind = DistKind::normal;
    d.mean = mean;
    d.sigma = sigma;
    d.lo = lo;
    d.hi = hi;
    d.validate();
    return d;
}

void Distribution::validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
        throw InputError("distribution bounds must be finite with lo <= hi");
    if (kind == DistKind::normal) {
        if (!std::isfinite(mean) || !std::isfinite(sigma) || sigma < 0.0)
            throw InputError("normal distribution needs a finite mean and sigma >= 0");
        if (mean < lo || mean > hi)
            throw InputError("normal distribution mean must lie inside its truncation range");
    }
}

double Distribution::sample(double u) const {
    if (kind == DistKind::uniform || lo == hi)
        return lo + (hi - lo) * u;
    if (sigma == 0.0)
        return mean;
    const boost::math::normal_distribution<double> n(mean, sigma);
    const double c_lo = boost::math::cdf(n, lo);
    const double c_hi = boost::math::cdf(n, hi);
    const double p = c_lo + (c_hi - c_lo) * u;
    if (!(p > 0.0) || !(p < 1.0))
        return p <= 0.0 ? lo : hi;
    return std::clamp(boost::math::quantile(n, p), lo, hi);
}

Distribution parse_distribution(std::string_view text) {
    auto bad = [&] { return InputError("invalid distribution spec '" + std::string(text) + "'"); };
    auto number = [&](std::string s) {
        const auto b = s.find_first_not_of(" \t");
        const auto e = s.find_last_not_of(" \t");
        if (b == std::string::npos)
            throw bad();
        s = s.substr(b, e - b + 1);
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (end != s.c_str() + s.size())
            throw bad();
        return v;
    };
    if (text.size() >= 3 && (text[0] == 'U' || text[0] == 'N') && text[1] == '(' && text.back() == ')') {
        std::vector<double> args;
        const std::string inner(text.substr(2, text.size() - 3));
        std::size_t pos = 0;
        while (true) {
            const auto comma = inner.find(',', pos);
            args.push_back(number(inner.substr(pos, comma - pos)));
            if (comma == std::string::npos)
                break;
            pos = comma + 1;
        }
        if (text[0] == 'U' && args.size() == 2)
            return Distribution::uniform(args[0], args[1]);
        if (text[0] == 'N' && args.size() == 4)
            return Distribution::normal(args[0], args[1], args[2], args[3]);
        throw bad();
    }
    return Distribution::fixed(number(std::string(text)));
}

double percentile(std::vector<double> values, double p) {
    if (values.empty())
        throw InputError("percentile of an empty set");
    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * p;
    const auto i = static_cast<std::size_t>(std::floor(h));
    if (i + 1 >= values.size())
        return values.back();
    const double a = values[i], b = values[i + 1];
    if (a == b)
        return a;
    if (std::isinf(b))
        return h == static_cast<double>(i) ? a : b;
    return a + (h - static_cast<double>(i)) * (b - a);
}

ScenarioParams sample_scenario(const ScenarioParams& base, const McDistributions& d, std::uint64_t seed,
                               std::size_t run) {
    const auto k = static_cast<std::uint64_t>(run);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
    std::mt19937_64 engine(seq);
    auto next_u = [&] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
    auto draw = [&](const std::optional<Distribution>& dist, double current) {
        const double u = next_u();
        return dist ? dist->sample(u) : current;
    };

    ScenarioParams p = base;
    p.splitter.amp_imbalance_db = draw(d.amp_imbalance_db, p.splitter.amp_imbalance_db);
    p.splitter.phase_imbalance_deg = draw(d.phase_imbalance_deg, p.splitter.phase_imbalance_deg);
    p.splitter.isolation_db = draw(d.splitter_isolation_db, p.splitter.isolation_db);
    p.dummy_pert.delta_mag = draw(d.twin_mismatch, p.dummy_pert.delta_mag);
    p.dummy_pert.delta_phase_deg = draw(d.twin_mismatch_deg, p.dummy_pert.delta_phase_deg);
    const double skew = draw(d.arm_skew_m, 0.0);
    if (d.arm_skew_m)
        p.dummy_arm_length_offset_m += skew;
    return p;
}

McSummary monte_carlo(const ScenarioParams& p, const McDistributions& d, std::size_t runs, std::uint64_t seed,
                      const FrequencyGrid& grid) {
    if (runs == 0)
        throw InputError("Monte Carlo needs at least one run");
    for (const auto* dist : {&d.amp_imbalance_db, &d.phase_imbalance_deg, &d.splitter_isolation_db, &d.twin_mismatch,
                             &d.twin_mismatch_deg, &d.arm_skew_m})
        if (*dist)
            (*dist)->validate();

    const std::size_t nf = grid.size();
    std::vector<std::vector<double>> iso(runs);
    // Runs are the parallel axis; each run reduces its frequencies serially.
    parallel_for(runs, [&](std::size_t k) {
        const Circuit c = build_y3(sample_scenario(p, d, seed, k), grid);
        const Reducer red(c);
        std::vector<double> row(nf);
        const int tx = c.external_index("Tx"), rx = c.external_index("Rx");
        for (std::size_t f = 0; f < nf; ++f)
            row[f] = loss_db(std::abs(red.entry(f, rx, tx)));
        iso[k] = std::move(row);
    });

    McSummary s{runs, seed, grid, {}, {}, {}};
    s.isolation.reserve(nf);
    std::vector<double> column(runs);
    for (std::size_t f = 0; f < nf; ++f) {
        for (std::size_t k = 0; k < runs; ++k)
            column[k] = iso[k][f];
        s.isolation.push_back({percentile(column, 0.05), percentile(column, 0.50), percentile(column, 0.95)});
    }
    s.band_min.resize(runs);
    for (std::size_t k = 0; k < runs; ++k)
        s.band_min[k] = *std::min_element(iso[k].begin(), iso[k].end());
    s.band_min_pct = {percentile(s.band_min, 0.05), percentile(s.band_min, 0.50), percentile(s.band_min, 0.95)};
    return s;
}

void write_mc_csv(std::ostream& out, const McSummary& s) {
    out << "freq_hz,iso_p5_db,iso_p50_db,iso_p95_db,capped\n";
    for (std::size_t f = 0; f < s.grid.size(); ++f) {
        const auto& q = s.isolation[f];
        out << format_csv_number(s.grid[f]);
        std::string flags;
        const std::pair<const char*, double> cols[] = {{"iso_p5_db", q.p5}, {"iso_p50_db", q.p50}, {"iso_p95_db", q.p95}};
        for (const auto& [name, v] : cols) {
            const auto c = cap_db(v);
            out << ',' << format_csv_number(c.value);
            if (c.capped)
                flags += (flags.empty() ? "" : "+") + std::string(name);
        }
        out << ',' << flags << '\n';
    }
}

}  // namespace rfsic
