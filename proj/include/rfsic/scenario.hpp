#pragma once

// Builders for the twin-antenna canceller ("Y3") and the circulator and
// splitter front ends it is compared against. All three expose external ports
// named Tx, Ant and Rx.

#include "rfsic/components.hpp"
#include "rfsic/solver.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace rfsic {

enum class Preset { ideal, cots, custom };

const char* to_string(Preset p);

// Two cable segments per arm: feed runs from the input splitter S1 to the arm
// splitter (S2 or S3), out runs from the arm splitter to the subtractor.
struct ArmCables {
    CableParams feed{0.1, 0.66, 0.0};
    CableParams out{0.1, 0.66, 0.0};
};

struct ScenarioParams {
    Preset preset = Preset::ideal;
    SplitterParams splitter;
    HybridParams hybrid;
    AntennaModel antenna;
    DummyPerturbation dummy_pert;
    ArmCables arm_a;  // live-antenna arm
    ArmCables arm_b;  // dummy arm
    // Change of total dummy-arm length, applied to the dummy feed segment; the
    // tuning knob of optimize_arm_length.
    double dummy_arm_length_offset_m = 0.0;

    // ideal: balanced splitters with zero leakage, paper_ideal subtractor,
    // matched antenna and no twin mismatch. cots: 4 dB splitters with 20 dB
    // isolation and a 5 dB subtractor. Fields can be overridden afterwards.
    static ScenarioParams from_preset(Preset p);
};

// Topology (blocks S1, S2, S3, D1, cable_a_feed, cable_a_out, cable_b_feed,
// cable_b_out, antenna, dummy):
//   Tx  = S1.common
//   S1.arm2 -> cable_a_feed -> S2.arm2;  S2.common -> antenna.feed;  Ant = antenna.air
//   S2.arm3 -> cable_a_out  -> D1.a
//   S1.arm3 -> cable_b_feed -> S3.arm2;  S3.common -> dummy
//   S3.arm3 -> cable_b_out  -> D1.b
//   Rx  = D1.diff
// The wiring follows the signal description of the canceller: the live arm
// carries the split transmit signal to the antenna and picks the received and
// leaked signal off the arm splitter's second arm; the dummy arm repeats that
// path into the shielded twin.
Circuit build_y3(const ScenarioParams& p, const FrequencyGrid& grid);

// Circulator port 1 = Tx, 3 = Rx. With an antenna, port 2 drives its feed and
// Ant is the antenna's air port; without, Ant is circulator port 2.
Circuit build_circulator_frontend(Complex gamma, const std::optional<AntennaModel>& antenna,
                                  const FrequencyGrid& grid);

// Splitter common = antenna side, arm 2 = Tx, arm 3 = Rx.
Circuit build_splitter_frontend(const SplitterParams& p, const std::optional<AntennaModel>& antenna,
                                const FrequencyGrid& grid);

// Applies one "key = value" setting (config files, netlist scenario lines and
// CLI --set). Unknown keys and bad values throw InputError. A `preset` key
// resets every field to that preset. Relative file paths resolve against
// `base_dir`.
void apply_scenario_setting(ScenarioParams& p, std::string_view key, std::string_view value,
                            const std::string& base_dir = {});

// Parses a config: one "key = value" per line, '#' comments.
ScenarioParams parse_scenario_config(std::string_view text, const std::string& base_dir = {});

// Built-in named configurations: "ideal", "cots", and "cots-calibrated"
// (the shipped configs/cots-calibrated.cfg, embedded at build time).
ScenarioParams named_scenario(std::string_view name);
std::string_view calibrated_config_text();

}  // namespace rfsic
