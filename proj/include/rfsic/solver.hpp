#pragma once

// Interconnection of n-port blocks and reduction to the S-matrix seen at the
// external ports.
//
// A connection between two ports is a zero-length reflectionless bond: the
// wave incident on one port is the wave leaving the other. Ports are numbered
// globally by block declaration order, then ascending port index.

#include "rfsic/errors.hpp"
#include "rfsic/netcore.hpp"

#include <Eigen/LU>

#include <string>
#include <utility>
#include <vector>

namespace rfsic {

struct ExternalPort {
    std::string name;
    PortRef ref;
};

class Circuit {
public:
    const std::vector<NetworkBlock>& blocks() const noexcept { return blocks_; }
    const std::vector<std::pair<PortRef, PortRef>>& connections() const noexcept { return connections_; }
    const std::vector<ExternalPort>& external_ports() const noexcept { return externals_; }
    const FrequencyGrid& grid() const { return blocks_.front().grid(); }

    std::size_t total_ports() const noexcept { return total_ports_; }
    // Global 0-based index of a block port.
    std::size_t global_index(const PortRef& ref) const;
    // Index into external_ports(), or -1.
    int external_index(const std::string& name) const;
    const NetworkBlock& block(const std::string& name) const;

private:
    friend Circuit assemble(std::vector<NetworkBlock>, std::vector<std::pair<PortRef, PortRef>>,
                            std::vector<ExternalPort>);
    Circuit() = default;

    std::vector<NetworkBlock> blocks_;
    std::vector<std::pair<PortRef, PortRef>> connections_;
    std::vector<ExternalPort> externals_;
    std::vector<std::size_t> offsets_;
    std::size_t total_ports_ = 0;
};

// Validates and freezes a circuit. Throws InputError on unknown block or port,
// duplicate block or external names, a port used twice, a dangling port,
// mismatched grids, or a reference impedance other than 50 ohm.
Circuit assemble(std::vector<NetworkBlock> blocks, std::vector<std::pair<PortRef, PortRef>> connections,
                 std::vector<ExternalPort> external_ports);

// Reduction of one circuit with the port bookkeeping done once, for callers
// that evaluate many frequencies or only one entry. Two-ports that are fully
// connected and reflectionless at every frequency (matched cables) are folded
// into weighted connections first, which is exact and shrinks the system.
// Holds a reference to the circuit, which must outlive it. Throws like reduce().
class Reducer {
public:
    explicit Reducer(const Circuit& c);

    CMatrix at(std::size_t freq_index) const;
    // Entry (to, from) of the reduced matrix, external indices 0-based.
    Complex entry(std::size_t freq_index, int to, int from) const;

private:
    // Connection weight: entry (row, col) of a folded two-port, or 1.
    struct Weight {
        static constexpr std::size_t kUnit = static_cast<std::size_t>(-1);
        std::size_t block = kUnit;
        Eigen::Index row = 0, col = 0;
    };
    struct Target {
        enum Kind { ii, ie, ei, ee } kind;
        std::size_t block;
        Eigen::Index p, q;      // entry of the block matrix
        Eigen::Index row, col;  // destination
        Weight weight;
    };
    struct Parts {
        CMatrix m;  // I - S_ii W
        CMatrix s_ie;
        CMatrix s_ei_p;  // S_ei W
        CMatrix s_ee;
    };

    Parts scatter(std::size_t k) const;
    Eigen::PartialPivLU<CMatrix> factor(const CMatrix& m, std::size_t k) const;
    IllPosedError ill_posed(std::size_t k, double estimate) const;

    const Circuit* c_;
    Eigen::Index n_int_ = 0;
    Eigen::Index n_ext_ = 0;
    std::vector<Target> targets_;
};

// S_ext = S_ee + S_ei P (I - S_ii P)^-1 S_ie per frequency, frequencies in
// parallel. Throws IllPosedError naming the frequency when the reciprocal
// condition estimate of (I - S_ii P), after folding matched two-ports, drops
// below 1e-12.
NetworkBlock reduce(const Circuit& c, std::string name = "reduced");

// Same reduction at a single frequency index.
CMatrix reduce_at(const Circuit& c, std::size_t freq_index);

// Independent check: solves (I - S Pi) b = S a_ext over every port of the
// circuit with a full-pivoting LU, for a unit wave into external port
// `excitation` (0-based). Returns outgoing waves at the external ports.
Eigen::VectorXcd oracle_solve(const Circuit& c, std::size_t freq_index, std::size_t excitation);

}  // namespace rfsic
