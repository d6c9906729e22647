#include "rfsic/solver.hpp"

#include "rfsic/errors.hpp"
#include "rfsic/parallel.hpp"

#include <map>
#include <set>
#include <sstream>

namespace rfsic {

std::size_t Circuit::global_index(const PortRef& ref) const {
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (blocks_[b].name() == ref.block) {
            if (ref.port < 1 || ref.port > blocks_[b].n_ports())
                throw InputError("port " + to_string(ref) + " out of range");
            return offsets_[b] + static_cast<std::size_t>(ref.port - 1);
        }
    }
    throw InputError("unknown block '" + ref.block + "'");
}

int Circuit::external_index(const std::string& name) const {
    for (std::size_t k = 0; k < externals_.size(); ++k)
        if (externals_[k].name == name)
            return static_cast<int>(k);
    return -1;
}

const NetworkBlock& Circuit::block(const std::string& name) const {
    for (const auto& b : blocks_)
        if (b.name() == name)
            return b;
    throw InputError("unknown block '" + name + "'");
}

Circuit assemble(std::vector<NetworkBlock> blocks, std::vector<std::pair<PortRef, PortRef>> connections,
                 std::vector<ExternalPort> external_ports) {
    if (blocks.empty())
        throw InputError("circuit has no blocks");

    std::map<std::string, std::size_t> by_name;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (!by_name.emplace(blocks[b].name(), b).second)
            throw InputError("duplicate block name '" + blocks[b].name() + "'");
        if (blocks[b].z_ref() != kReferenceImpedance) {
            std::ostringstream msg;
            msg << "block '" << blocks[b].name() << "' is referenced to " << blocks[b].z_ref()
                << " ohm; only 50 ohm networks can be connected";
            throw InputError(msg.str());
        }
        if (!(blocks[b].grid() == blocks.front().grid()))
            throw InputError("block '" + blocks[b].name() + "' is on a different frequency grid than '" +
                             blocks.front().name() + "'");
    }

    auto check_ref = [&](const PortRef& r) {
        auto it = by_name.find(r.block);
        if (it == by_name.end())
            throw InputError("unknown block '" + r.block + "' in port reference " + to_string(r));
        if (r.port < 1 || r.port > blocks[it->second].n_ports())
            throw InputError("port " + to_string(r) + " does not exist (block has " +
                             std::to_string(blocks[it->second].n_ports()) + " ports)");
    };

    std::set<PortRef> used;
    for (const auto& [a, b] : connections) {
        check_ref(a);
        check_ref(b);
        if (a == b)
            throw InputError("port " + to_string(a) + " connected to itself");
        for (const auto& r : {a, b})
            if (!used.insert(r).second)
                throw InputError("port " + to_string(r) + " appears in more than one connection");
    }
    std::set<std::string> ext_names;
    for (const auto& e : external_ports) {
        check_ref(e.ref);
        if (e.name.empty())
            throw InputError("external port needs a name");
        if (!ext_names.insert(e.name).second)
            throw InputError("duplicate external port name '" + e.name + "'");
        if (!used.insert(e.ref).second)
            throw InputError("port " + to_string(e.ref) + " is both connected and external (or external twice)");
    }
    for (const auto& b : blocks)
        for (int p = 1; p <= b.n_ports(); ++p)
            if (!used.count(PortRef{b.name(), p}))
                throw InputError("dangling port " + b.name() + "." + std::to_string(p) +
                                 " is neither connected nor external");

    Circuit c;
    c.blocks_ = std::move(blocks);
    c.connections_ = std::move(connections);
    c.externals_ = std::move(external_ports);
    c.offsets_.reserve(c.blocks_.size());
    for (const auto& b : c.blocks_) {
        c.offsets_.push_back(c.total_ports_);
        c.total_ports_ += static_cast<std::size_t>(b.n_ports());
    }
    return c;
}

namespace {

CMatrix block_diagonal(const Circuit& c, std::size_t k) {
    const auto n = static_cast<Eigen::Index>(c.total_ports());
    CMatrix s = CMatrix::Zero(n, n);
    Eigen::Index off = 0;
    for (const auto& b : c.blocks()) {
        const CMatrix& m = b.at(k);
        s.block(off, off, m.rows(), m.cols()) = m;
        off += m.rows();
    }
    return s;
}

// Partner of every connected port (global index), or -1 for external ports.
std::vector<Eigen::Index> partners(const Circuit& c) {
    std::vector<Eigen::Index> p(c.total_ports(), -1);
    for (const auto& [a, b] : c.connections()) {
        const auto ia = static_cast<Eigen::Index>(c.global_index(a));
        const auto ib = static_cast<Eigen::Index>(c.global_index(b));
        p[static_cast<std::size_t>(ia)] = ib;
        p[static_cast<std::size_t>(ib)] = ia;
    }
    return p;
}

}  // namespace

namespace {

// A two-port with both ports connected and no reflection at any frequency is
// a pure transmission; it can be folded into its neighbours' connection.
bool is_foldable(const NetworkBlock& b) {
    if (b.n_ports() != 2)
        return false;
    for (std::size_t k = 0; k < b.grid().size(); ++k)
        if (b.at(k)(0, 0) != 0.0 || b.at(k)(1, 1) != 0.0)
            return false;
    return true;
}

}  // namespace

// The incident waves at internal ports are a_int = W b_int, where W has one
// entry per column: 1 for a plain connection, the transmission of a folded
// two-port otherwise. Every entry of a remaining block's S-matrix then lands in
// exactly one of S_ee, S_ie, S_ei W or (I - S_ii W), so the scatter targets
// are fixed per circuit.
Reducer::Reducer(const Circuit& c) : c_(&c) {
    if (c.external_ports().empty())
        throw InputError("cannot reduce a circuit without external ports");
    const auto partner = partners(c);
    const auto& blocks = c.blocks();
    const std::size_t n = c.total_ports();

    std::vector<std::size_t> offset;
    for (std::size_t b = 0, off = 0; b < blocks.size(); off += static_cast<std::size_t>(blocks[b].n_ports()), ++b)
        offset.push_back(off);

    // source[g]: the port whose outgoing wave arrives at g, scaled by weight[g].
    std::vector<Eigen::Index> source(partner.begin(), partner.end());
    std::vector<Weight> weight(n);
    std::vector<bool> folded(blocks.size(), false), removed(n, false);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const std::size_t o = offset[b];
        if (blocks[b].n_ports() != 2 || partner[o] < 0 || partner[o + 1] < 0 ||
            partner[o] == static_cast<Eigen::Index>(o + 1))
            continue;
        const auto u = static_cast<std::size_t>(partner[o]), v = static_cast<std::size_t>(partner[o + 1]);
        // Neighbouring folds would chain; keep the later block as an ordinary one.
        if (removed[u] || removed[v] || !is_foldable(blocks[b]))
            continue;
        folded[b] = true;
        removed[o] = removed[o + 1] = true;
        source[v] = static_cast<Eigen::Index>(u);
        weight[v] = {b, 1, 0};
        source[u] = static_cast<Eigen::Index>(v);
        weight[u] = {b, 0, 1};
    }

    std::vector<Eigen::Index> ext_pos(n, -1), int_pos(n, -1);
    for (std::size_t e = 0; e < c.external_ports().size(); ++e)
        ext_pos[c.global_index(c.external_ports()[e].ref)] = static_cast<Eigen::Index>(e);
    for (std::size_t g = 0; g < n; ++g)
        if (partner[g] >= 0 && !removed[g])
            int_pos[g] = n_int_++;
    n_ext_ = static_cast<Eigen::Index>(c.external_ports().size());

    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (folded[b])
            continue;
        const int np = blocks[b].n_ports();
        for (int q = 0; q < np; ++q) {
            const std::size_t gq = offset[b] + static_cast<std::size_t>(q);
            const bool q_internal = partner[gq] >= 0;
            for (int p = 0; p < np; ++p) {
                const std::size_t gp = offset[b] + static_cast<std::size_t>(p);
                const bool p_internal = partner[gp] >= 0;
                Target t;
                t.block = b;
                t.p = p;
                t.q = q;
                t.row = p_internal ? int_pos[gp] : ext_pos[gp];
                if (q_internal) {
                    t.col = int_pos[static_cast<std::size_t>(source[gq])];
                    t.weight = weight[gq];
                    t.kind = p_internal ? Target::ii : Target::ei;
                } else {
                    t.col = ext_pos[gq];
                    t.kind = p_internal ? Target::ie : Target::ee;
                }
                targets_.push_back(t);
            }
        }
    }
}

Reducer::Parts Reducer::scatter(std::size_t k) const {
    Parts parts{CMatrix::Identity(n_int_, n_int_), CMatrix::Zero(n_int_, n_ext_), CMatrix::Zero(n_ext_, n_int_),
                CMatrix::Zero(n_ext_, n_ext_)};
    const auto& blocks = c_->blocks();
    for (const auto& t : targets_) {
        Complex v = blocks[t.block].at(k)(t.p, t.q);
        if (t.weight.block != Weight::kUnit)
            v *= blocks[t.weight.block].at(k)(t.weight.row, t.weight.col);
        switch (t.kind) {
        case Target::ii: parts.m(t.row, t.col) -= v; break;
        case Target::ie: parts.s_ie(t.row, t.col) = v; break;
        case Target::ei: parts.s_ei_p(t.row, t.col) = v; break;
        case Target::ee: parts.s_ee(t.row, t.col) = v; break;
        }
    }
    return parts;
}

Eigen::PartialPivLU<CMatrix> Reducer::factor(const CMatrix& m, std::size_t k) const {
    Eigen::PartialPivLU<CMatrix> lu(m);
    const double rcond = lu.rcond();
    if (!(rcond >= 1e-12))
        throw ill_posed(k, rcond);
    return lu;
}

IllPosedError Reducer::ill_posed(std::size_t k, double estimate) const {
    const double f = c_->grid()[k];
    std::ostringstream msg;
    msg << "ill-posed interconnection at " << f << " Hz (reciprocal condition estimate " << estimate << ")";
    return IllPosedError(f, msg.str());
}

CMatrix Reducer::at(std::size_t k) const {
    Parts parts = scatter(k);
    if (n_int_ == 0)
        return parts.s_ee;
    const CMatrix x = factor(parts.m, k).solve(parts.s_ie);
    // An exactly zero pivot can slip past the estimator, which then works with inf/NaN.
    if (!x.allFinite())
        throw ill_posed(k, 0.0);
    return parts.s_ee + parts.s_ei_p * x;
}

Complex Reducer::entry(std::size_t k, int to, int from) const {
    if (to < 0 || to >= n_ext_ || from < 0 || from >= n_ext_)
        throw InputError("external port index out of range");
    Parts parts = scatter(k);
    if (n_int_ == 0)
        return parts.s_ee(to, from);
    const Eigen::VectorXcd x = factor(parts.m, k).solve(parts.s_ie.col(from));
    if (!x.allFinite())
        throw ill_posed(k, 0.0);
    return parts.s_ee(to, from) + (parts.s_ei_p.row(to) * x)(0);
}

CMatrix reduce_at(const Circuit& c, std::size_t freq_index) { return Reducer(c).at(freq_index); }

NetworkBlock reduce(const Circuit& c, std::string name) {
    const Reducer r(c);
    std::vector<CMatrix> out(c.grid().size());
    parallel_for(out.size(), [&](std::size_t k) { out[k] = r.at(k); });

    std::vector<std::string> labels;
    for (const auto& e : c.external_ports())
        labels.push_back(e.name);
    return NetworkBlock(std::move(name), c.grid(), std::move(out), std::move(labels));
}

Eigen::VectorXcd oracle_solve(const Circuit& c, std::size_t freq_index, std::size_t excitation) {
    if (excitation >= c.external_ports().size())
        throw InputError("excitation index out of range");
    const auto n = static_cast<Eigen::Index>(c.total_ports());
    const CMatrix s = block_diagonal(c, freq_index);
    const auto partner = partners(c);

    // a = Pi b + e_k  =>  (I - S Pi) b = S e_k
    CMatrix pi = CMatrix::Zero(n, n);
    for (Eigen::Index g = 0; g < n; ++g)
        if (partner[static_cast<std::size_t>(g)] >= 0)
            pi(g, partner[static_cast<std::size_t>(g)]) = 1.0;
    const auto drive = static_cast<Eigen::Index>(c.global_index(c.external_ports()[excitation].ref));

    const CMatrix system = CMatrix::Identity(n, n) - s * pi;
    Eigen::FullPivLU<CMatrix> lu(system);
    if (!lu.isInvertible()) {
        std::ostringstream msg;
        msg << "oracle system is singular at " << c.grid()[freq_index] << " Hz";
        throw SolveError(msg.str());
    }
    const Eigen::VectorXcd b = lu.solve(Eigen::VectorXcd(s.col(drive)));

    Eigen::VectorXcd out(static_cast<Eigen::Index>(c.external_ports().size()));
    for (std::size_t e = 0; e < c.external_ports().size(); ++e)
        out(static_cast<Eigen::Index>(e)) = b(static_cast<Eigen::Index>(c.global_index(c.external_ports()[e].ref)));
    return out;
}

}  // namespace rfsic
