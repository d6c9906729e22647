#include "rfsic/netlist.hpp"

#include "rfsic/components.hpp"
#include "rfsic/errors.hpp"
#include "rfsic/scenario.hpp"
#include "rfsic/touchstone.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rfsic {
namespace {

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream ss{std::string(line)};
    for (std::string tok; ss >> tok;)
        out.push_back(tok);
    return out;
}

double number(const std::string& text, std::size_t line, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || std::isnan(v))
        throw ParseError(line, "invalid number '" + text + "' for " + what);
    return v;
}

PortRef parse_port_ref(const std::string& text, std::size_t line) {
    const auto dot = text.rfind('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == text.size())
        throw ParseError(line, "expected BLOCK.PORT, got '" + text + "'");
    const std::string idx = text.substr(dot + 1);
    if (idx.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(line, "port index in '" + text + "' must be a positive integer");
    return {text.substr(0, dot), std::stoi(idx)};
}

// key=value arguments of one line; every key must be consumed.
class Keys {
public:
    Keys(const std::vector<std::string>& toks, std::size_t first, std::size_t line) : line_(line) {
        for (std::size_t i = first; i < toks.size(); ++i) {
            const auto eq = toks[i].find('=');
            if (eq == std::string::npos || eq == 0)
                throw ParseError(line, "expected key=value, got '" + toks[i] + "'");
            if (!kv_.emplace(toks[i].substr(0, eq), toks[i].substr(eq + 1)).second)
                throw ParseError(line, "duplicate key '" + toks[i].substr(0, eq) + "'");
        }
    }

    bool has(const std::string& k) const { return kv_.count(k) != 0; }

    std::optional<std::string> str(const std::string& k) {
        auto it = kv_.find(k);
        if (it == kv_.end())
            return std::nullopt;
        used_.insert(k);
        return it->second;
    }

    double num(const std::string& k, double fallback) {
        const auto s = str(k);
        return s ? number(*s, line_, k) : fallback;
    }

    // Remaining keys, in order, without marking them used.
    std::vector<std::pair<std::string, std::string>> rest() const {
        std::vector<std::pair<std::string, std::string>> out;
        for (const auto& [k, v] : kv_)
            if (!used_.count(k))
                out.emplace_back(k, v);
        return out;
    }

    void mark_all_used() {
        for (const auto& [k, v] : kv_)
            used_.insert(k);
    }

    void finish(const std::string& context) const {
        for (const auto& [k, v] : kv_)
            if (!used_.count(k))
                throw ParseError(line_, "unknown key '" + k + "' for " + context);
    }

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
    std::map<std::string, std::string> kv_;
    std::set<std::string> used_;
};

std::string resolve(const std::string& path, const std::string& base_dir) {
    std::filesystem::path p(path);
    if (p.is_relative() && !base_dir.empty())
        p = std::filesystem::path(base_dir) / p;
    return p.string();
}

AntennaModel antenna_from_keys(Keys& k, const std::string& base_dir) {
    if (const auto file = k.str("file"))
        return AntennaModel::from_block(load_touchstone_file(resolve(*file, base_dir), "antenna_file"), *file);
    if (k.has("r") || k.has("l") || k.has("c"))
        return AntennaModel::series_rlc(k.num("r", kReferenceImpedance), k.num("l", 0.0), k.num("c", 0.0));
    if (k.has("gamma_mag") || k.has("gamma_deg"))
        return AntennaModel::constant_gamma(std::polar(k.num("gamma_mag", 0.0), deg_to_rad(k.num("gamma_deg", 0.0))));
    return AntennaModel::matched();
}

SplitterParams splitter_from_keys(Keys& k) {
    SplitterParams p;
    if (const auto preset = k.str("preset")) {
        if (*preset == "cots") p = SplitterParams::cots();
        else if (*preset != "ideal") throw ParseError(k.line(), "splitter preset must be ideal or cots");
    }
    p.excess_loss_db = k.num("excess_loss_db", p.excess_loss_db);
    p.isolation_db = k.num("isolation_db", p.isolation_db);
    p.amp_imbalance_db = k.num("amp_imbalance_db", p.amp_imbalance_db);
    p.phase_imbalance_deg = k.num("phase_imbalance_deg", p.phase_imbalance_deg);
    p.thru_phase_deg = k.num("thru_phase_deg", p.thru_phase_deg);
    return p;
}

NetworkBlock build_component(const std::string& name, const std::string& kind, Keys& k, const FrequencyGrid& grid,
                             const std::string& base_dir) {
    if (kind == "circulator") {
        const Complex g(k.num("gamma_re", 0.0), k.num("gamma_im", 0.0));
        k.finish(kind);
        return circulator(g, grid, name);
    }
    if (kind == "splitter") {
        const auto p = splitter_from_keys(k);
        k.finish(kind);
        return splitter(p, grid, name);
    }
    if (kind == "hybrid") {
        HybridParams p;
        if (const auto preset = k.str("preset")) {
            if (*preset == "cots") p = HybridParams::cots();
            else if (*preset != "ideal") throw ParseError(k.line(), "hybrid preset must be ideal or cots");
        }
        if (const auto mode = k.str("mode")) {
            if (*mode == "paper_ideal") p.mode = HybridMode::paper_ideal;
            else if (*mode == "physical") p.mode = HybridMode::physical;
            else throw ParseError(k.line(), "hybrid mode must be paper_ideal or physical");
        }
        p.excess_loss_db = k.num("excess_loss_db", p.excess_loss_db);
        k.finish(kind);
        return hybrid180(p, grid, name);
    }
    if (kind == "cable") {
        CableParams p;
        p.length_m = k.num("length_m", p.length_m);
        p.velocity_factor = k.num("vf", p.velocity_factor);
        p.loss_db_per_m_at_1ghz = k.num("loss_db_per_m", p.loss_db_per_m_at_1ghz);
        k.finish(kind);
        return cable(p, grid, name);
    }
    if (kind == "antenna" || kind == "radiating_antenna") {
        const auto m = antenna_from_keys(k, base_dir);
        k.finish(kind);
        return kind == "antenna" ? antenna(m, grid, name) : radiating_antenna(m, grid, name);
    }
    if (kind == "dummy") {
        const auto m = antenna_from_keys(k, base_dir);
        DummyPerturbation d;
        d.delta_mag = k.num("delta_mag", 0.0);
        d.delta_phase_deg = k.num("delta_deg", 0.0);
        d.ref_freq_hz = k.num("ref_freq_hz", d.ref_freq_hz);
        if (const auto model = k.str("model")) {
            if (*model == "constant") d.model = PerturbationModel::constant;
            else if (*model == "linear_in_f") d.model = PerturbationModel::linear_in_f;
            else throw ParseError(k.line(), "dummy model must be constant or linear_in_f");
        }
        k.finish(kind);
        return dummy_antenna(m, d, grid, name);
    }
    if (kind == "load") {
        k.finish(kind);
        return match_load(grid, name);
    }
    if (kind == "touchstone") {
        const auto file = k.str("file");
        if (!file)
            throw ParseError(k.line(), "touchstone component needs file=");
        k.finish(kind);
        return interpolate_block(load_touchstone_file(resolve(*file, base_dir), name), grid);
    }
    throw ParseError(k.line(), "unknown component kind '" + kind + "'");
}

// The preset goes first so that the remaining keys, which arrive sorted, override it.
template <class Adjust>
ScenarioParams scenario_settings(Keys& k, const std::string& base_dir, Adjust adjust) {
    ScenarioParams p;
    if (const auto preset = k.str("preset"))
        apply_scenario_setting(p, "preset", *preset, base_dir);
    adjust(p);
    for (const auto& [key, value] : k.rest())
        apply_scenario_setting(p, key, value, base_dir);
    k.mark_all_used();
    return p;
}

Circuit build_scenario(const std::string& kind, Keys& k, const FrequencyGrid& grid, const std::string& base_dir) {
    if (kind == "y3")
        return build_y3(scenario_settings(k, base_dir, [](ScenarioParams&) {}), grid);
    if (kind == "circulator" || kind == "splitter") {
        const Complex g(k.num("gamma_re", 0.0), k.num("gamma_im", 0.0));
        if (kind == "splitter" && (k.has("gamma_re") || k.has("gamma_im")))
            throw ParseError(k.line(), "gamma_re/gamma_im apply to the circulator scenario only");
        bool bare = false;
        if (const auto a = k.str("antenna")) {
            if (*a != "none")
                throw ParseError(k.line(), "antenna= accepts only 'none'");
            bare = true;
        }
        const ScenarioParams p = scenario_settings(k, base_dir, [&](ScenarioParams& q) {
            if (kind == "splitter")
                q.splitter = SplitterParams::cots();
        });
        std::optional<AntennaModel> ant;
        if (!bare)
            ant = p.antenna;
        return kind == "circulator" ? build_circulator_frontend(g, ant, grid)
                                    : build_splitter_frontend(p.splitter, ant, grid);
    }
    throw ParseError(k.line(), "unknown scenario '" + kind + "' (expected y3, circulator or splitter)");
}

struct CompDecl {
    std::size_t line;
    std::string name;
    std::string kind;
    std::vector<std::string> toks;
};

}  // namespace

Netlist parse_netlist(std::string_view text, const std::string& base_dir) {
    std::optional<FrequencyGrid> grid;
    std::vector<CompDecl> comps;
    std::vector<std::pair<PortRef, PortRef>> conns;
    std::vector<ExternalPort> ports;
    std::optional<CompDecl> scenario;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const auto toks = split_ws(line);
        if (toks.empty())
            continue;
        const std::string& kw = toks[0];

        if (kw == "sweep") {
            if (grid)
                throw ParseError(line_no, "duplicate sweep line");
            if (toks.size() != 4 && toks.size() != 5)
                throw ParseError(line_no, "sweep needs: f_lo f_hi n [linear|log]");
            const double lo = number(toks[1], line_no, "f_lo");
            const double hi = number(toks[2], line_no, "f_hi");
            const double n = number(toks[3], line_no, "n");
            if (n < 1 || n != std::floor(n))
                throw ParseError(line_no, "sweep point count must be a positive integer");
            Spacing sp = Spacing::linear;
            if (toks.size() == 5) {
                if (toks[4] == "log") sp = Spacing::log;
                else if (toks[4] != "linear") throw ParseError(line_no, "sweep spacing must be linear or log");
            }
            try {
                grid = make_grid(lo, hi, static_cast<std::size_t>(n), sp);
            } catch (const InputError& e) {
                throw ParseError(line_no, e.what());
            }
        } else if (kw == "comp") {
            if (toks.size() < 3)
                throw ParseError(line_no, "comp needs: NAME KIND key=value...");
            comps.push_back({line_no, toks[1], toks[2], toks});
        } else if (kw == "conn") {
            if (toks.size() != 3)
                throw ParseError(line_no, "conn needs exactly two port references");
            conns.emplace_back(parse_port_ref(toks[1], line_no), parse_port_ref(toks[2], line_no));
        } else if (kw == "port") {
            if (toks.size() != 3)
                throw ParseError(line_no, "port needs: NAME BLOCK.PORT");
            ports.push_back({toks[1], parse_port_ref(toks[2], line_no)});
        } else if (kw == "scenario") {
            if (scenario)
                throw ParseError(line_no, "duplicate scenario line");
            if (toks.size() < 2)
                throw ParseError(line_no, "scenario needs a kind");
            scenario = CompDecl{line_no, {}, toks[1], toks};
        } else {
            throw ParseError(line_no, "unknown keyword '" + kw + "'");
        }
    }
    if (!grid)
        throw ParseError(line_no, "netlist has no sweep line");

    if (scenario) {
        if (!comps.empty() || !conns.empty() || !ports.empty())
            throw ParseError(scenario->line, "a scenario line cannot be combined with comp/conn/port lines");
        Keys k(scenario->toks, 2, scenario->line);
        try {
            return Netlist{*grid, build_scenario(scenario->kind, k, *grid, base_dir)};
        } catch (const ParseError&) {
            throw;
        } catch (const InputError& e) {
            throw ParseError(scenario->line, e.what());
        }
    }

    std::vector<NetworkBlock> blocks;
    for (auto& d : comps) {
        Keys k(d.toks, 3, d.line);
        try {
            blocks.push_back(build_component(d.name, d.kind, k, *grid, base_dir));
        } catch (const ParseError&) {
            throw;
        } catch (const InputError& e) {
            throw ParseError(d.line, e.what());
        }
    }
    if (blocks.empty())
        throw ParseError(line_no, "netlist declares no components");
    return Netlist{*grid, assemble(std::move(blocks), std::move(conns), std::move(ports))};
}

Netlist load_netlist(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open netlist '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_netlist(ss.str(), std::filesystem::path(path).parent_path().string());
}

}  // namespace rfsic
