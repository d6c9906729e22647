#include "rfsic/metrics.hpp"

#include "rfsic/errors.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace rfsic {

CappedValue cap_db(double db) {
    if (db >= kDbCap)
        return {kDbCap, true};
    if (db <= -kDbCap)
        return {-kDbCap, true};
    return {db, false};
}

const Series* SweepResult::find(std::string_view name) const {
    for (const auto& s : series)
        if (s.name == name)
            return &s;
    return nullptr;
}

const std::vector<double>& SweepResult::at(std::string_view name) const {
    if (const Series* s = find(name))
        return s->values;
    throw InputError("sweep has no series '" + std::string(name) + "'");
}

SweepResult metrics_from_reduced(const NetworkBlock& reduced) {
    auto port = [&](std::string_view name) -> int {
        const auto& labels = reduced.port_labels();
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == name)
                return static_cast<int>(i) + 1;
        return 0;
    };
    const int tx = port("Tx"), rx = port("Rx"), ant = port("Ant");
    if (tx == 0 || rx == 0)
        throw InputError("metrics need external ports named Tx and Rx");

    const std::size_t n = reduced.grid().size();
    SweepResult r{reduced.grid(), {}};
    auto add = [&](std::string_view name, int to, int from) {
        Series s{std::string(name), std::vector<double>(n)};
        for (std::size_t k = 0; k < n; ++k)
            s.values[k] = loss_db(std::abs(reduced.s(k, to, from)));
        r.series.push_back(std::move(s));
    };
    add(kTxRxIsolation, rx, tx);
    if (ant != 0) {
        add(kAntRxIl, rx, ant);
        add(kTxAntIl, ant, tx);
        add(kAntReturnLoss, ant, ant);
    }
    return r;
}

SweepResult metrics(const Circuit& c) { return metrics_from_reduced(reduce(c)); }

std::map<std::string, BandStats> band_stats(const SweepResult& r, double f_lo, double f_hi) {
    std::vector<std::size_t> idx;
    for (std::size_t k = 0; k < r.grid.size(); ++k)
        if (r.grid[k] >= f_lo && r.grid[k] <= f_hi)
            idx.push_back(k);
    if (idx.empty())
        throw InputError("band [" + format_csv_number(f_lo) + ", " + format_csv_number(f_hi) +
                         "] Hz contains no grid points");

    std::map<std::string, BandStats> out;
    for (const auto& s : r.series) {
        BandStats st{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0,
                     idx.size()};
        double sum = 0.0;
        for (auto k : idx) {
            const double v = s.values[k];
            st.min = std::min(st.min, v);
            st.max = std::max(st.max, v);
            sum += v;
        }
        st.mean = sum / static_cast<double>(idx.size());
        out.emplace(s.name, st);
    }
    return out;
}

std::vector<Delta> improvement_over_baseline(const SweepResult& y3, const SweepResult& base) {
    if (!(y3.grid == base.grid))
        throw InputError("improvement needs both sweeps on the same grid");
    const auto& a = y3.at(kTxRxIsolation);
    const auto& b = base.at(kTxRxIsolation);
    std::vector<Delta> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        const auto ca = cap_db(a[k]);
        const auto cb = cap_db(b[k]);
        out[k] = {ca.value - cb.value, ca.capped || cb.capped};
    }
    return out;
}

std::string format_csv_number(double v) {
    if (std::isnan(v))
        return "nan";
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string format_summary_number(double v) {
    std::string s = format_csv_number(v);
    if (s.find_first_of(".en") == std::string::npos)
        s += ".0";
    return s;
}

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
    out << "freq_hz";
    for (const auto& s : r.series)
        out << ',' << s.name;
    out << ",capped\n";
    for (std::size_t k = 0; k < r.grid.size(); ++k) {
        out << format_csv_number(r.grid[k]);
        std::string flags;
        for (const auto& s : r.series) {
            const auto c = cap_db(s.values[k]);
            out << ',' << format_csv_number(c.value);
            if (c.capped)
                flags += (flags.empty() ? "" : "+") + s.name;
        }
        out << ',' << flags << '\n';
    }
}

void write_sparam_csv(std::ostream& out, const NetworkBlock& reduced) {
    const int n = reduced.n_ports();
    out << "freq_hz";
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            out << ",s" << i << j << "_db";
    out << ",capped\n";
    for (std::size_t k = 0; k < reduced.grid().size(); ++k) {
        out << format_csv_number(reduced.grid()[k]);
        bool any = false;
        for (int i = 1; i <= n; ++i)
            for (int j = 1; j <= n; ++j) {
                const auto c = cap_db(db_from_mag(std::abs(reduced.s(k, i, j))));
                any = any || c.capped;
                out << ',' << format_csv_number(c.value);
            }
        out << ',' << (any ? "1" : "") << '\n';
    }
}

void write_band_summary(std::ostream& out, const SweepResult& r, double f_lo, double f_hi) {
    const auto stats = band_stats(r, f_lo, f_hi);
    auto field = [&](const char* label, double v) {
        const auto c = cap_db(v);
        out << ' ' << label << '=' << format_summary_number(c.value) << (c.capped ? " (capped)" : "");
    };
    for (const auto& s : r.series) {
        const auto& st = stats.at(s.name);
        out << s.name;
        field("min", st.min);
        field("max", st.max);
        field("mean", st.mean);
        out << '\n';
    }
}

}  // namespace rfsic
