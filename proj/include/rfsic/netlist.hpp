#pragma once

// Line-oriented netlist format.
//
//   line     := sweep | comp | conn | port | scenario | comment
//   sweep    := "sweep" f_lo f_hi n ["linear" | "log"]
//   comp     := "comp" NAME KIND key=value ...
//   conn     := "conn" NAME.port NAME.port
//   port     := "port" EXTNAME NAME.port
//   scenario := "scenario" ("y3" | "circulator" | "splitter") key=value ...
//   comment  := "#" ...
//
// Component kinds and their keys:
//   circulator  gamma_re gamma_im
//   splitter    preset(ideal|cots) excess_loss_db isolation_db amp_imbalance_db
//               phase_imbalance_deg thru_phase_deg
//   hybrid      mode(paper_ideal|physical) excess_loss_db preset(ideal|cots)
//   cable       length_m vf loss_db_per_m
//   antenna     one-port; r l c | gamma_mag gamma_deg | file
//   radiating_antenna   two-port feed/air; same keys as antenna
//   dummy       one-port; antenna keys plus delta_mag delta_deg model ref_freq_hz
//   load        matched one-port, no keys
//   touchstone  file (n-port from a .sNp file)
//
// A scenario line replaces comp/conn/port lines with one of the built-in
// front ends; its keys are the scenario settings (see apply_scenario_setting)
// plus, for circulator, gamma_re/gamma_im, and for circulator and splitter,
// antenna=none to leave the antenna port bare.
// Unknown keywords or keys are errors.

#include "rfsic/solver.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace rfsic {

struct Netlist {
    FrequencyGrid grid;
    Circuit circuit;
};

// `base_dir` resolves relative file paths. Errors carry the line number
// (ParseError) except topology errors found at assembly (InputError).
Netlist parse_netlist(std::string_view text, const std::string& base_dir = {});

Netlist load_netlist(const std::string& path);

}  // namespace rfsic
