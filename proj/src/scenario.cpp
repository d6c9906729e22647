#include "rfsic/scenario.hpp"

#include "rfsic/errors.hpp"
#include "rfsic/touchstone.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>

#include "calibrated_config.inc"

namespace rfsic {

const char* to_string(Preset p) {
    switch (p) {
    case Preset::ideal: return "ideal";
    case Preset::cots: return "cots";
    case Preset::custom: return "custom";
    }
    return "?";
}

ScenarioParams ScenarioParams::from_preset(Preset p) {
    ScenarioParams s;
    s.preset = p;
    if (p == Preset::cots) {
        s.splitter = SplitterParams::cots();
        s.hybrid = HybridParams::cots();
    }
    return s;
}

Circuit build_y3(const ScenarioParams& p, const FrequencyGrid& grid) {
    // The offset changes the total dummy-arm length; it is applied to the
    // feed segment, which lies on every dummy-arm path.
    ArmCables b = p.arm_b;
    b.feed.length_m += p.dummy_arm_length_offset_m;
    if (b.feed.length_m < 0.0)
        throw InputError("dummy arm length offset makes the dummy feed cable length negative");

    std::vector<NetworkBlock> blocks;
    blocks.push_back(splitter(p.splitter, grid, "S1"));
    blocks.push_back(blocks.back().renamed("S2"));
    blocks.push_back(blocks.back().renamed("S3"));
    blocks.push_back(hybrid180(p.hybrid, grid, "D1"));
    blocks.push_back(cable(p.arm_a.feed, grid, "cable_a_feed"));
    blocks.push_back(cable(p.arm_a.out, grid, "cable_a_out"));
    blocks.push_back(cable(b.feed, grid, "cable_b_feed"));
    blocks.push_back(cable(b.out, grid, "cable_b_out"));
    blocks.push_back(radiating_antenna(p.antenna, grid, "antenna"));
    blocks.push_back(dummy_antenna(p.antenna, p.dummy_pert, grid, "dummy"));

    std::vector<std::pair<PortRef, PortRef>> conns{
        {{"S1", 2}, {"cable_a_feed", 1}}, {{"cable_a_feed", 2}, {"S2", 2}},
        {{"S2", 1}, {"antenna", 1}},
        {{"S2", 3}, {"cable_a_out", 1}},  {{"cable_a_out", 2}, {"D1", 1}},
        {{"S1", 3}, {"cable_b_feed", 1}}, {{"cable_b_feed", 2}, {"S3", 2}},
        {{"S3", 1}, {"dummy", 1}},
        {{"S3", 3}, {"cable_b_out", 1}},  {{"cable_b_out", 2}, {"D1", 2}},
    };
    std::vector<ExternalPort> ext{{"Tx", {"S1", 1}}, {"Ant", {"antenna", 2}}, {"Rx", {"D1", 3}}};
    return assemble(std::move(blocks), std::move(conns), std::move(ext));
}

Circuit build_circulator_frontend(Complex gamma, const std::optional<AntennaModel>& ant, const FrequencyGrid& grid) {
    std::vector<NetworkBlock> blocks{circulator(gamma, grid, "C1")};
    std::vector<std::pair<PortRef, PortRef>> conns;
    std::vector<ExternalPort> ext{{"Tx", {"C1", 1}}};
    if (ant) {
        blocks.push_back(radiating_antenna(*ant, grid, "antenna"));
        conns.push_back({{"C1", 2}, {"antenna", 1}});
        ext.push_back({"Ant", {"antenna", 2}});
    } else {
        ext.push_back({"Ant", {"C1", 2}});
    }
    ext.push_back({"Rx", {"C1", 3}});
    return assemble(std::move(blocks), std::move(conns), std::move(ext));
}

Circuit build_splitter_frontend(const SplitterParams& p, const std::optional<AntennaModel>& ant,
                                const FrequencyGrid& grid) {
    std::vector<NetworkBlock> blocks{splitter(p, grid, "S1")};
    std::vector<std::pair<PortRef, PortRef>> conns;
    std::vector<ExternalPort> ext{{"Tx", {"S1", 2}}};
    if (ant) {
        blocks.push_back(radiating_antenna(*ant, grid, "antenna"));
        conns.push_back({{"S1", 1}, {"antenna", 1}});
        ext.push_back({"Ant", {"antenna", 2}});
    } else {
        ext.push_back({"Ant", {"S1", 1}});
    }
    ext.push_back({"Rx", {"S1", 3}});
    return assemble(std::move(blocks), std::move(conns), std::move(ext));
}

namespace {

double to_number(std::string_view key, std::string_view value) {
    const std::string s(value);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || std::isnan(v))
        throw InputError("setting '" + std::string(key) + "': invalid number '" + s + "'");
    return v;
}

void set_cable(CableParams& c, std::string_view field, std::string_view key, std::string_view value) {
    const double v = to_number(key, value);
    if (field == "length_m") c.length_m = v;
    else if (field == "vf") c.velocity_factor = v;
    else if (field == "loss_db_per_m") c.loss_db_per_m_at_1ghz = v;
    else throw InputError("unknown setting '" + std::string(key) + "'");
}

Preset parse_preset(std::string_view v) {
    if (v == "ideal") return Preset::ideal;
    if (v == "cots") return Preset::cots;
    if (v == "custom") return Preset::custom;
    throw InputError("unknown preset '" + std::string(v) + "' (expected ideal, cots or custom)");
}

void set_gamma_polar(AntennaModel& a, double mag, double deg) {
    a.kind = AntennaKind::constant;
    a.gamma = std::polar(mag, deg_to_rad(deg));
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

void apply_scenario_setting(ScenarioParams& p, std::string_view key, std::string_view value,
                            const std::string& base_dir) {
    auto num = [&] { return to_number(key, value); };

    if (key == "preset") {
        p = ScenarioParams::from_preset(parse_preset(value));
        return;
    }
    if (key == "splitter.excess_loss_db") { p.splitter.excess_loss_db = num(); return; }
    if (key == "splitter.isolation_db") { p.splitter.isolation_db = num(); return; }
    if (key == "splitter.amp_imbalance_db") { p.splitter.amp_imbalance_db = num(); return; }
    if (key == "splitter.phase_imbalance_deg") { p.splitter.phase_imbalance_deg = num(); return; }
    if (key == "splitter.thru_phase_deg") { p.splitter.thru_phase_deg = num(); return; }
    if (key == "hybrid.mode") {
        if (value == "paper_ideal") p.hybrid.mode = HybridMode::paper_ideal;
        else if (value == "physical") p.hybrid.mode = HybridMode::physical;
        else throw InputError("hybrid.mode must be paper_ideal or physical");
        return;
    }
    if (key == "hybrid.excess_loss_db") { p.hybrid.excess_loss_db = num(); return; }
    if (key == "antenna.kind") {
        if (value == "rlc") p.antenna.kind = AntennaKind::rlc;
        else if (value == "constant") p.antenna.kind = AntennaKind::constant;
        else if (value == "matched") p.antenna = AntennaModel::matched();
        else throw InputError("antenna.kind must be rlc, constant or matched (use antenna.file for files)");
        return;
    }
    if (key == "antenna.r") { p.antenna.kind = AntennaKind::rlc; p.antenna.r = num(); return; }
    if (key == "antenna.l") { p.antenna.kind = AntennaKind::rlc; p.antenna.l = num(); return; }
    if (key == "antenna.c") { p.antenna.kind = AntennaKind::rlc; p.antenna.c = num(); return; }
    if (key == "antenna.gamma_mag") { set_gamma_polar(p.antenna, num(), rad_to_deg(std::arg(p.antenna.gamma))); return; }
    if (key == "antenna.gamma_deg") { set_gamma_polar(p.antenna, std::abs(p.antenna.gamma), num()); return; }
    if (key == "antenna.file") {
        std::filesystem::path path{std::string(value)};
        if (path.is_relative() && !base_dir.empty())
            path = std::filesystem::path(base_dir) / path;
        p.antenna = AntennaModel::from_block(load_touchstone_file(path.string(), "antenna_file"), path.string());
        return;
    }
    if (key == "dummy.delta_mag") { p.dummy_pert.delta_mag = num(); return; }
    if (key == "dummy.delta_deg") { p.dummy_pert.delta_phase_deg = num(); return; }
    if (key == "dummy.ref_freq_hz") { p.dummy_pert.ref_freq_hz = num(); return; }
    if (key == "dummy.model") {
        if (value == "constant") p.dummy_pert.model = PerturbationModel::constant;
        else if (value == "linear_in_f") p.dummy_pert.model = PerturbationModel::linear_in_f;
        else throw InputError("dummy.model must be constant or linear_in_f");
        return;
    }
    if (key == "dummy_arm_length_offset_m") { p.dummy_arm_length_offset_m = num(); return; }

    const auto dot = key.find('.');
    if (dot != std::string_view::npos) {
        const auto head = key.substr(0, dot);
        const auto rest = key.substr(dot + 1);
        if (head == "arms") {
            for (CableParams* c : {&p.arm_a.feed, &p.arm_a.out, &p.arm_b.feed, &p.arm_b.out})
                set_cable(*c, rest, key, value);
            return;
        }
        if (head == "arm_a" || head == "arm_b") {
            ArmCables& arm = head == "arm_a" ? p.arm_a : p.arm_b;
            const auto dot2 = rest.find('.');
            if (dot2 != std::string_view::npos) {
                const auto seg = rest.substr(0, dot2);
                if (seg == "feed" || seg == "out") {
                    set_cable(seg == "feed" ? arm.feed : arm.out, rest.substr(dot2 + 1), key, value);
                    return;
                }
            } else {
                set_cable(arm.feed, rest, key, value);
                set_cable(arm.out, rest, key, value);
                return;
            }
        }
    }
    throw InputError("unknown setting '" + std::string(key) + "'");
}

ScenarioParams parse_scenario_config(std::string_view text, const std::string& base_dir) {
    ScenarioParams p;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const std::string body = trim(line);
        if (body.empty())
            continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ParseError(line_no, "expected 'key = value'");
        try {
            apply_scenario_setting(p, trim(std::string_view(body).substr(0, eq)),
                                   trim(std::string_view(body).substr(eq + 1)), base_dir);
        } catch (const ParseError&) {
            throw;
        } catch (const InputError& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return p;
}

std::string_view calibrated_config_text() { return kCalibratedConfig; }

ScenarioParams named_scenario(std::string_view name) {
    if (name == "ideal")
        return ScenarioParams::from_preset(Preset::ideal);
    if (name == "cots")
        return ScenarioParams::from_preset(Preset::cots);
    if (name == "cots-calibrated")
        return parse_scenario_config(kCalibratedConfig);
    throw InputError("unknown preset '" + std::string(name) + "' (expected ideal, cots or cots-calibrated)");
}

}  // namespace rfsic
