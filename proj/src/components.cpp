#include "rfsic/components.hpp"

#include "rfsic/errors.hpp"
#include "rfsic/log.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rfsic {

SplitterParams SplitterParams::cots() {
    SplitterParams p;
    p.excess_loss_db = 4.0 - kSplitLossDb;
    p.isolation_db = 20.0;
    return p;
}

HybridParams HybridParams::cots() {
    HybridParams p;
    p.mode = HybridMode::physical;
    p.excess_loss_db = 5.0 - kSplitLossDb;
    return p;
}

AntennaModel AntennaModel::constant_gamma(Complex g) {
    if (!std::isfinite(g.real()) || !std::isfinite(g.imag()) || std::abs(g) > 1.0)
        throw InputError("constant antenna reflection must satisfy |gamma| <= 1");
    AntennaModel m;
    m.kind = AntennaKind::constant;
    m.gamma = g;
    return m;
}

AntennaModel AntennaModel::series_rlc(double r, double l, double c) {
    AntennaModel m;
    m.kind = AntennaKind::rlc;
    m.r = r;
    m.l = l;
    m.c = c;
    return m;
}

AntennaModel AntennaModel::from_block(NetworkBlock one_port, std::string source) {
    if (one_port.n_ports() != 1)
        throw InputError("antenna file '" + one_port.name() + "' must be a one-port");
    AntennaModel m;
    m.kind = AntennaKind::file;
    m.block = std::move(one_port);
    m.source = std::move(source);
    return m;
}

Complex DummyPerturbation::delta_at(double f_hz) const {
    const Complex d = std::polar(delta_mag, deg_to_rad(delta_phase_deg));
    if (model == PerturbationModel::linear_in_f)
        return d * (f_hz / ref_freq_hz);
    return d;
}

NetworkBlock circulator(Complex gamma, const FrequencyGrid& grid, std::string name) {
    if (!(std::abs(gamma) < 1.0))
        throw InputError("circulator reflection |gamma| must be < 1");
    const Complex g = gamma;
    const Complex t = 1.0 - g * g;
    CMatrix s(3, 3);
    s << g, g, t,
         t, g, g,
         g, t, g;
    return NetworkBlock::constant(std::move(name), grid, s, {"tx", "ant", "rx"});
}

NetworkBlock splitter(const SplitterParams& p, const FrequencyGrid& grid, std::string name) {
    if (!(p.excess_loss_db >= 0.0) || !std::isfinite(p.excess_loss_db))
        throw InputError("splitter excess loss must be a finite value >= 0 dB");
    if (!(p.isolation_db > 0.0))
        throw InputError("splitter isolation must be > 0 dB");
    if (!std::isfinite(p.amp_imbalance_db) || !std::isfinite(p.phase_imbalance_deg) ||
        !std::isfinite(p.thru_phase_deg))
        throw InputError("splitter imbalance and phase must be finite");

    const Complex t = std::polar(mag_from_db(-(kSplitLossDb + p.excess_loss_db)), deg_to_rad(p.thru_phase_deg));
    // Imbalance redistributes power between the arms without changing the
    // total, so an otherwise lossless splitter stays passive.
    const double half_phase = deg_to_rad(p.phase_imbalance_deg) / 2.0;
    const double up = std::pow(10.0, p.amp_imbalance_db / 40.0);
    const double norm = std::sqrt(2.0 / (up * up + 1.0 / (up * up)));
    const Complex arm2 = t * norm * up * std::polar(1.0, half_phase);
    const Complex arm3 = t * norm / up * std::polar(1.0, -half_phase);
    const double leak = std::isinf(p.isolation_db) ? 0.0 : mag_from_db(-p.isolation_db);

    CMatrix s(3, 3);
    s << 0.0, arm2, arm3,
         arm2, 0.0, leak,
         arm3, leak, 0.0;
    const double sv = max_singular_value(s);
    if (sv > 1.0 + 1e-9) {
        std::ostringstream msg;
        msg << "splitter '" << name << "' is not passive (largest singular value " << sv
            << "); increase excess_loss_db or isolation_db";
        throw InputError(msg.str());
    }
    return NetworkBlock::constant(std::move(name), grid, s, {"common", "arm2", "arm3"});
}

NetworkBlock hybrid180(const HybridParams& p, const FrequencyGrid& grid, std::string name) {
    if (!(p.excess_loss_db >= 0.0) || !std::isfinite(p.excess_loss_db))
        throw InputError("hybrid excess loss must be a finite value >= 0 dB");
    const double h = p.mode == HybridMode::paper_ideal ? 1.0 : mag_from_db(-(kSplitLossDb + p.excess_loss_db));
    CMatrix s = CMatrix::Zero(3, 3);
    s(2, 0) = s(0, 2) = h;
    s(2, 1) = s(1, 2) = -h;
    return NetworkBlock::constant(std::move(name), grid, s, {"a", "b", "diff"});
}

NetworkBlock cable(const CableParams& p, const FrequencyGrid& grid, std::string name) {
    if (!(p.length_m >= 0.0) || !std::isfinite(p.length_m))
        throw InputError("cable '" + name + "': length must be >= 0");
    if (!(p.velocity_factor > 0.0 && p.velocity_factor <= 1.0))
        throw InputError("cable '" + name + "': velocity factor must be in (0, 1]");
    if (!(p.loss_db_per_m_at_1ghz >= 0.0) || !std::isfinite(p.loss_db_per_m_at_1ghz))
        throw InputError("cable '" + name + "': loss must be >= 0 dB/m");

    const double tau = p.length_m / (p.velocity_factor * kSpeedOfLight);
    std::vector<CMatrix> mats;
    mats.reserve(grid.size());
    for (double f : grid.points()) {
        const double amp = mag_from_db(-p.loss_db_per_m_at_1ghz * p.length_m * std::sqrt(f / 1e9));
        const Complex thru = std::polar(amp, -2.0 * kPi * f * tau);
        CMatrix s = CMatrix::Zero(2, 2);
        s(1, 0) = s(0, 1) = thru;
        mats.push_back(std::move(s));
    }
    return NetworkBlock(std::move(name), grid, std::move(mats));
}

namespace {

void validate_antenna(const AntennaModel& m) {
    switch (m.kind) {
    case AntennaKind::rlc:
        if (!(m.r >= 0.0) || !(m.l >= 0.0) || !(m.c > 0.0) || !std::isfinite(m.r) || !std::isfinite(m.l) ||
            !std::isfinite(m.c))
            throw InputError("rlc antenna needs r >= 0, l >= 0 and c > 0");
        break;
    case AntennaKind::constant:
        if (!(std::abs(m.gamma) <= 1.0))
            throw InputError("constant antenna reflection must satisfy |gamma| <= 1");
        break;
    case AntennaKind::file:
        if (!m.block || m.block->n_ports() != 1)
            throw InputError("file antenna needs a one-port block");
        break;
    }
}

Complex file_gamma(const NetworkBlock& b, double f) {
    const auto& pts = b.grid().points();
    if (f < pts.front() || f > pts.back()) {
        std::ostringstream msg;
        msg << "antenna file '" << b.name() << "' does not cover " << f << " Hz";
        throw InputError(msg.str());
    }
    auto hi = std::lower_bound(pts.begin(), pts.end(), f);
    const auto k = static_cast<std::size_t>(hi - pts.begin());
    if (*hi == f)
        return b.s(k, 1, 1);
    const double t = (f - pts[k - 1]) / (pts[k] - pts[k - 1]);
    const Complex a = b.s(k - 1, 1, 1), c = b.s(k, 1, 1);
    return {a.real() + t * (c.real() - a.real()), a.imag() + t * (c.imag() - a.imag())};
}

std::vector<Complex> gammas_on(const AntennaModel& model, const FrequencyGrid& grid) {
    validate_antenna(model);
    std::vector<Complex> out;
    out.reserve(grid.size());
    if (model.kind == AntennaKind::file) {
        const NetworkBlock b = interpolate_block(*model.block, grid);
        for (std::size_t k = 0; k < grid.size(); ++k)
            out.push_back(b.s(k, 1, 1));
        return out;
    }
    for (double f : grid.points())
        out.push_back(antenna_gamma(model, f));
    return out;
}

}  // namespace

Complex antenna_gamma(const AntennaModel& model, double f_hz) {
    validate_antenna(model);
    switch (model.kind) {
    case AntennaKind::constant:
        return model.gamma;
    case AntennaKind::rlc: {
        const double w = 2.0 * kPi * f_hz;
        const Complex z = Complex(model.r, w * model.l) + 1.0 / Complex(0.0, w * model.c);
        return (z - kReferenceImpedance) / (z + kReferenceImpedance);
    }
    case AntennaKind::file:
        return file_gamma(*model.block, f_hz);
    }
    return {};
}

NetworkBlock antenna(const AntennaModel& model, const FrequencyGrid& grid, std::string name) {
    const auto g = gammas_on(model, grid);
    std::vector<CMatrix> mats;
    mats.reserve(g.size());
    for (Complex v : g)
        mats.push_back(CMatrix::Constant(1, 1, v));
    return NetworkBlock(std::move(name), grid, std::move(mats), {"feed"});
}

NetworkBlock radiating_antenna(const AntennaModel& model, const FrequencyGrid& grid, std::string name) {
    const auto g = gammas_on(model, grid);
    std::vector<CMatrix> mats;
    mats.reserve(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double mag2 = std::norm(g[k]);
        if (mag2 > 1.0 + 1e-12) {
            std::ostringstream msg;
            msg << "antenna '" << name << "' has |gamma| > 1 at " << grid[k] << " Hz";
            throw InputError(msg.str());
        }
        const double t = std::sqrt(std::max(0.0, 1.0 - mag2));
        CMatrix s(2, 2);
        s << g[k], t,
             t, -std::conj(g[k]);
        mats.push_back(std::move(s));
    }
    return NetworkBlock(std::move(name), grid, std::move(mats), {"feed", "air"});
}

NetworkBlock dummy_antenna(const AntennaModel& base, const DummyPerturbation& pert, const FrequencyGrid& grid,
                           std::string name) {
    if (!(pert.delta_mag >= 0.0) || !std::isfinite(pert.delta_mag) || !std::isfinite(pert.delta_phase_deg))
        throw InputError("dummy perturbation magnitude must be finite and >= 0");
    if (pert.model == PerturbationModel::linear_in_f && !(pert.ref_freq_hz > 0.0))
        throw InputError("dummy perturbation reference frequency must be > 0");

    const auto g = gammas_on(base, grid);
    std::vector<CMatrix> mats;
    mats.reserve(g.size());
    std::size_t clamped = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        Complex v = g[k];
        if (pert.delta_mag != 0.0)
            v += pert.delta_at(grid[k]);
        if (std::abs(v) > 1.0) {
            v /= std::abs(v);
            ++clamped;
        }
        mats.push_back(CMatrix::Constant(1, 1, v));
    }
    if (clamped > 0)
        warn("dummy antenna '" + name + "': |gamma| > 1 clamped to 1 at " + std::to_string(clamped) +
             " frequency point(s)");
    return NetworkBlock(std::move(name), grid, std::move(mats), {"feed"});
}

NetworkBlock match_load(const FrequencyGrid& grid, std::string name) {
    return NetworkBlock::constant(std::move(name), grid, CMatrix::Zero(1, 1), {"feed"});
}

const char* to_string(HybridMode m) { return m == HybridMode::paper_ideal ? "paper_ideal" : "physical"; }

const char* to_string(AntennaKind k) {
    switch (k) {
    case AntennaKind::rlc: return "rlc";
    case AntennaKind::constant: return "constant";
    case AntennaKind::file: return "file";
    }
    return "?";
}

const char* to_string(PerturbationModel m) { return m == PerturbationModel::constant ? "constant" : "linear_in_f"; }

}  // namespace rfsic
