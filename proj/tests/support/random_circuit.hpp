#pragma once

#include "rfsic/solver.hpp"

#include <random>

namespace rfsic::testsupport {

// Random passive S-matrix: a random complex matrix rescaled so its largest
// singular value is `max_gain`. Symmetric when `reciprocal` is set.
CMatrix random_passive_matrix(std::mt19937_64& rng, int n, bool reciprocal, double max_gain = 0.95);

struct RandomCircuitOptions {
    int min_blocks = 2;
    int max_blocks = 4;
    int max_ports = 4;
    std::size_t n_freqs = 3;
    bool reciprocal = false;
};

// A random interconnection of random passive blocks. Every port is either
// paired with another port or made external; at least one port is external.
Circuit random_circuit(std::mt19937_64& rng, const RandomCircuitOptions& opt = {});

// Largest entrywise |a - b|, relative to the largest entry of b. Per-entry
// relative error is meaningless for entries that are exactly zero.
double relative_difference(const CMatrix& a, const CMatrix& b);

// Reduced matrix rebuilt column-by-column from oracle_solve.
CMatrix oracle_matrix(const Circuit& c, std::size_t freq_index);

}  // namespace rfsic::testsupport
