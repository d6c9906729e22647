#pragma once

// Parametric generators for the passive parts of a twin-antenna canceller and
// its baselines. Every generator returns a NetworkBlock on the given grid.

#include "rfsic/netcore.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>

namespace rfsic {

// Ideal 3-dB power split, 10 log10(2).
inline const double kSplitLossDb = 10.0 * std::log10(2.0);

struct SplitterParams {
    double excess_loss_db = 0.0;  // beyond the ideal split
    double isolation_db = std::numeric_limits<double>::infinity();  // arm-to-arm, +inf means no leakage
    double amp_imbalance_db = 0.0;  // arm 2 minus arm 3
    double phase_imbalance_deg = 0.0;
    double thru_phase_deg = -90.0;

    static SplitterParams ideal() { return {}; }
    // 4 dB total through loss, 20 dB arm isolation.
    static SplitterParams cots();
};

enum class HybridMode { paper_ideal, physical };

struct HybridParams {
    HybridMode mode = HybridMode::paper_ideal;
    double excess_loss_db = 0.0;  // physical mode only

    static HybridParams paper_ideal() { return {}; }
    // 5 dB total input-to-difference loss.
    static HybridParams cots();
};

enum class AntennaKind { rlc, constant, file };

struct AntennaModel {
    AntennaKind kind = AntennaKind::constant;
    double r = kReferenceImpedance;  // ohm
    double l = 0.0;                  // henry
    double c = 0.0;                  // farad
    Complex gamma{0.0, 0.0};         // constant kind
    std::optional<NetworkBlock> block;  // file kind, one-port
    std::string source;              // file path, informational

    static AntennaModel matched() { return {}; }
    static AntennaModel constant_gamma(Complex g);
    static AntennaModel series_rlc(double r, double l, double c);
    static AntennaModel from_block(NetworkBlock one_port, std::string source = {});
};

enum class PerturbationModel { constant, linear_in_f };

// Residual effect of the shielded enclosure on the dummy antenna:
// gamma_dummy(f) = gamma_base(f) + delta(f).
struct DummyPerturbation {
    double delta_mag = 0.0;
    double delta_phase_deg = 0.0;
    PerturbationModel model = PerturbationModel::constant;
    double ref_freq_hz = 1e9;  // linear_in_f: delta(f) = delta_mag e^{j theta} f / ref_freq_hz

    Complex delta_at(double f_hz) const;
};

// Mismatched circulator, ports Tx=1, Ant=2, Rx=3:
//   [[g, g, 1-g^2], [1-g^2, g, g], [g, 1-g^2, g]]
// Used verbatim, so it is not unitary for g != 0.
NetworkBlock circulator(Complex gamma, const FrequencyGrid& grid, std::string name = "circulator");

// Port 1 = common, 2 and 3 = arms. Throws InputError if the resulting matrix is
// not passive (e.g. a perfect 3-dB split combined with finite arm isolation).
NetworkBlock splitter(const SplitterParams& p, const FrequencyGrid& grid, std::string name = "splitter");

// Inputs A=1, B=2, difference output 3 (= A - B).
NetworkBlock hybrid180(const HybridParams& p, const FrequencyGrid& grid, std::string name = "hybrid");

struct CableParams {
    double length_m = 0.0;
    double velocity_factor = 0.66;
    double loss_db_per_m_at_1ghz = 0.0;  // scales as sqrt(f / 1 GHz)
};

NetworkBlock cable(const CableParams& p, const FrequencyGrid& grid, std::string name = "cable");

// Feed-point reflection coefficient of the model at one frequency.
// File kind requires f inside the file's grid.
Complex antenna_gamma(const AntennaModel& model, double f_hz);

// One-port: the feed reflection only.
NetworkBlock antenna(const AntennaModel& model, const FrequencyGrid& grid, std::string name = "antenna");

// Two-port feed(1) / air(2) view of a lossless antenna: [[G, t], [t, -conj(G)]]
// with t = sqrt(1 - |G|^2). The air port carries received and radiated waves.
NetworkBlock radiating_antenna(const AntennaModel& model, const FrequencyGrid& grid,
                               std::string name = "antenna");

// One-port twin of `base` inside a shielded box. There is no air port, so it
// receives nothing. |gamma| > 1 after perturbation is clamped to 1 with a warning.
NetworkBlock dummy_antenna(const AntennaModel& base, const DummyPerturbation& pert, const FrequencyGrid& grid,
                           std::string name = "dummy");

NetworkBlock match_load(const FrequencyGrid& grid, std::string name = "load");

const char* to_string(HybridMode m);
const char* to_string(AntennaKind k);
const char* to_string(PerturbationModel m);

}  // namespace rfsic
