#pragma once

#include "rfsic/netcore.hpp"
#include "rfsic/solver.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace rfsic {

// Serialized dB values never exceed this; larger values (including +inf for
// zero leakage) are written as the cap with a `capped` flag.
inline constexpr double kDbCap = 200.0;

struct CappedValue {
    double value;
    bool capped;
};

CappedValue cap_db(double db);

struct Series {
    std::string name;
    std::vector<double> values;  // positive dB, may be +inf
};

struct SweepResult {
    FrequencyGrid grid;
    std::vector<Series> series;  // declaration order

    const Series* find(std::string_view name) const;
    const std::vector<double>& at(std::string_view name) const;  // throws InputError
};

inline constexpr std::string_view kTxRxIsolation = "tx_rx_isolation_db";
inline constexpr std::string_view kAntRxIl = "ant_rx_il_db";
inline constexpr std::string_view kTxAntIl = "tx_ant_il_db";
inline constexpr std::string_view kAntReturnLoss = "ant_return_loss_db";

// Requires external ports Tx and Rx; Ant is optional and adds the three
// antenna-side series when present.
SweepResult metrics(const Circuit& c);
SweepResult metrics_from_reduced(const NetworkBlock& reduced);

struct BandStats {
    double min;
    double max;
    double mean;
    std::size_t points;
};

// Statistics over grid points inside the closed band [f_lo, f_hi]; throws
// InputError if no grid point falls inside.
std::map<std::string, BandStats> band_stats(const SweepResult& r, double f_lo, double f_hi);

struct Delta {
    double value;
    bool capped;  // at least one side was beyond the cap
};

// y3 isolation minus baseline isolation per frequency, computed on capped values.
std::vector<Delta> improvement_over_baseline(const SweepResult& y3, const SweepResult& base);

// 9 significant digits, as used in every CSV this library writes.
std::string format_csv_number(double v);

// Header "freq_hz,<series...>,capped"; the capped column lists the series that
// hit the cap on that row, joined by '+'.
void write_sweep_csv(std::ostream& out, const SweepResult& r);

// Raw |S| in signed dB for every (to, from) pair: columns s<to><from>_db.
void write_sparam_csv(std::ostream& out, const NetworkBlock& reduced);

// "<name> min=... max=... mean=..." lines; capped values carry " (capped)".
void write_band_summary(std::ostream& out, const SweepResult& r, double f_lo, double f_hi);

std::string format_summary_number(double v);

}  // namespace rfsic
