#pragma once

#include "rfsic/scenario.hpp"

#include <functional>

namespace rfsic {

struct LengthSearchOptions {
    std::size_t coarse_samples = 65;  // including both bounds
    double tolerance_m = 1e-12;       // golden-section bracket width
};

struct ArmLengthResult {
    double best_offset_m;
    double achieved_min_isolation_db;  // may be +inf (exact null)
    double baseline_min_isolation_db;  // objective at offset 0
    std::size_t evaluations;
};

// Maximises a scalar objective over [lo, hi]: coarse uniform scan, then
// golden-section refinement inside the bracket around the best coarse sample.
// NaN marks an invalid point. Returns {x, f(x)}.
std::pair<double, double> maximize_scalar(const std::function<double(double)>& objective, double lo, double hi,
                                          const LengthSearchOptions& opt, std::size_t* evaluations = nullptr);

// Worst-case (minimum) Tx-Rx isolation over the grid points inside
// [f_lo, f_hi] for a given dummy-arm offset. NaN when the band is empty.
double min_band_isolation(const ScenarioParams& p, double offset_m, double f_lo, double f_hi,
                          const FrequencyGrid& grid);

// Chooses dummy_arm_length_offset_m within `bounds` (replacing the scenario's
// own value) to maximise the worst-case isolation over the objective band.
// Offset 0 is always a candidate when it lies inside the bounds. Throws
// SolveError if the objective is NaN everywhere it was evaluated.
ArmLengthResult optimize_arm_length(const ScenarioParams& p, std::pair<double, double> bounds_m,
                                    std::pair<double, double> band_hz, const FrequencyGrid& grid,
                                    const LengthSearchOptions& opt = {});

}  // namespace rfsic
