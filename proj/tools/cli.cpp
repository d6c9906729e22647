#include "cli.hpp"

#include "rfsic/errors.hpp"
#include "rfsic/log.hpp"
#include "rfsic/metrics.hpp"
#include "rfsic/montecarlo.hpp"
#include "rfsic/netlist.hpp"
#include "rfsic/optimize.hpp"
#include "rfsic/scenario.hpp"
#include "rfsic/touchstone.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace rfsic::cli {
namespace {

double parse_number(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
        throw InputError("invalid number '" + s + "' in " + what);
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        parts.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos)
            return parts;
        pos = next + 1;
    }
}

std::pair<double, double> parse_interval(const std::string& s, const std::string& what) {
    const auto parts = split(s, ':');
    if (parts.size() != 2)
        throw InputError(what + " must be lo:hi, got '" + s + "'");
    return {parse_number(parts[0], what), parse_number(parts[1], what)};
}

FrequencyGrid parse_band(const std::string& s, const std::string& spacing) {
    const auto parts = split(s, ':');
    if (parts.size() != 3)
        throw InputError("--band must be f_lo:f_hi:n, got '" + s + "'");
    const double n = parse_number(parts[2], "--band");
    if (n < 1 || n != std::floor(n))
        throw InputError("--band point count must be a positive integer");
    Spacing sp = Spacing::linear;
    if (spacing == "log") sp = Spacing::log;
    else if (spacing != "linear") throw InputError("--spacing must be linear or log");
    return make_grid(parse_number(parts[0], "--band"), parse_number(parts[1], "--band"), static_cast<std::size_t>(n), sp);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw InputError("cannot write '" + path + "'");
    out << text;
    if (!out.flush())
        throw InputError("failed writing '" + path + "'");
}

// Shared scenario flags: preset, then config file, then --set overrides.
struct ScenarioFlags {
    std::string preset = "ideal";
    std::string config;
    std::vector<std::string> sets;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--preset", preset, "ideal, cots or cots-calibrated")->capture_default_str();
        cmd->add_option("--config", config, "scenario config file (key = value lines)");
        cmd->add_option("--set", sets, "override one setting, key=value (repeatable)");
    }

    // `adjust` runs on the preset before the config file and --set overrides.
    ScenarioParams resolve(const std::function<void(ScenarioParams&)>& adjust = {}) const {
        ScenarioParams p = named_scenario(preset);
        if (adjust)
            adjust(p);
        if (!config.empty()) {
            const auto dir = std::filesystem::path(config).parent_path().string();
            // Settings in the file apply on top of the preset.
            std::istringstream lines(read_file(config));
            std::size_t line_no = 0;
            for (std::string line; std::getline(lines, line);) {
                ++line_no;
                if (const auto h = line.find('#'); h != std::string::npos)
                    line.erase(h);
                const auto eq = line.find('=');
                if (line.find_first_not_of(" \t\r") == std::string::npos)
                    continue;
                if (eq == std::string::npos)
                    throw ParseError(line_no, config + ": expected 'key = value'");
                auto trim = [](std::string s) {
                    const auto b = s.find_first_not_of(" \t\r");
                    const auto e = s.find_last_not_of(" \t\r");
                    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
                };
                try {
                    apply_scenario_setting(p, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), dir);
                } catch (const ParseError&) {
                    throw;
                } catch (const InputError& e) {
                    throw ParseError(line_no, config + ": " + e.what());
                }
            }
        }
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos || eq == 0)
                throw InputError("--set expects key=value, got '" + s + "'");
            apply_scenario_setting(p, s.substr(0, eq), s.substr(eq + 1));
        }
        return p;
    }
};

std::string sweep_csv(const SweepResult& r) {
    std::ostringstream ss;
    write_sweep_csv(ss, r);
    return ss.str();
}

std::string format_ghz(double hz) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", hz / 1e9);
    return buf;
}

std::string to_upper(std::string s) {
    for (auto& ch : s)
        ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return s;
}

int cmd_simulate(const std::string& netlist_path, const std::string& out_path, std::ostream& out) {
    const Netlist nl = load_netlist(netlist_path);
    const NetworkBlock reduced = reduce(nl.circuit);
    std::ostringstream csv;
    if (nl.circuit.external_index("Tx") >= 0 && nl.circuit.external_index("Rx") >= 0)
        write_sweep_csv(csv, metrics_from_reduced(reduced));
    else
        write_sparam_csv(csv, reduced);
    if (out_path.empty())
        out << csv.str();
    else
        write_file(out_path, csv.str());
    return kExitOk;
}

struct ScenarioArgs {
    std::string kind;
    ScenarioFlags flags;
    std::string band = "1e9:3e9:401";
    std::string spacing = "linear";
    std::string gamma;
    std::optional<double> iso_db;
    bool no_antenna = false;
    std::string out_path;
};

int cmd_scenario(const ScenarioArgs& a, std::ostream& out) {
    const FrequencyGrid grid = parse_band(a.band, a.spacing);
    if (!a.gamma.empty() && a.kind != "circulator")
        throw InputError("--gamma applies to the circulator scenario only");
    if (a.no_antenna && a.kind == "y3")
        throw InputError("--no-antenna applies to the circulator and splitter scenarios only");
    if (a.iso_db && a.kind == "circulator")
        throw InputError("--iso-db applies to the splitter and y3 scenarios only");

    // The splitter baseline is a COTS part: an ideal splitter cannot have
    // finite isolation and stay passive.
    ScenarioParams p = a.flags.resolve([&](ScenarioParams& base) {
        if (a.kind == "splitter" && base.preset == Preset::ideal)
            base.splitter = SplitterParams::cots();
    });
    if (a.iso_db)
        p.splitter.isolation_db = *a.iso_db;
    std::optional<AntennaModel> ant;
    if (!a.no_antenna)
        ant = p.antenna;

    Circuit c = [&] {
        if (a.kind == "y3")
            return build_y3(p, grid);
        if (a.kind == "circulator") {
            Complex g{0.0, 0.0};
            if (!a.gamma.empty()) {
                const auto parts = split(a.gamma, ',');
                if (parts.size() > 2)
                    throw InputError("--gamma expects re or re,im");
                g = {parse_number(parts[0], "--gamma"), parts.size() == 2 ? parse_number(parts[1], "--gamma") : 0.0};
            }
            return build_circulator_frontend(g, ant, grid);
        }
        return build_splitter_frontend(p.splitter, ant, grid);
    }();

    const SweepResult r = metrics(c);
    if (!a.out_path.empty())
        write_file(a.out_path, sweep_csv(r));
    write_band_summary(out, r, grid.front(), grid.back());
    return kExitOk;
}

struct McArgs {
    ScenarioFlags flags;
    std::string band = "1e9:3e9:401";
    std::string spacing = "linear";
    std::size_t runs = 1000;
    std::uint64_t seed = 0;
    std::string amp, phase, iso, mismatch, mismatch_deg, skew;
    std::string out_path;
};

int cmd_montecarlo(const McArgs& a, std::ostream& out) {
    const FrequencyGrid grid = parse_band(a.band, a.spacing);
    McDistributions d;
    auto opt = [](const std::string& s) -> std::optional<Distribution> {
        if (s.empty())
            return std::nullopt;
        return parse_distribution(s);
    };
    d.amp_imbalance_db = opt(a.amp);
    d.phase_imbalance_deg = opt(a.phase);
    d.splitter_isolation_db = opt(a.iso);
    d.twin_mismatch = opt(a.mismatch);
    d.twin_mismatch_deg = opt(a.mismatch_deg);
    d.arm_skew_m = opt(a.skew);

    const McSummary s = monte_carlo(a.flags.resolve(), d, a.runs, a.seed, grid);
    std::ostringstream csv;
    write_mc_csv(csv, s);
    if (!a.out_path.empty())
        write_file(a.out_path, csv.str());
    else
        out << csv.str();
    auto field = [](double v) {
        const auto c = cap_db(v);
        return format_summary_number(c.value) + (c.capped ? " (capped)" : "");
    };
    if (!a.out_path.empty())
        out << "runs=" << s.runs << " seed=" << s.seed << " band_min_isolation_db p5=" << field(s.band_min_pct.p5)
            << " p50=" << field(s.band_min_pct.p50) << " p95=" << field(s.band_min_pct.p95) << '\n';
    return kExitOk;
}

struct OptArgs {
    ScenarioFlags flags;
    std::string band = "1e9:3e9:401";
    std::string spacing = "linear";
    std::string bounds = "-0.01:0.01";
    std::string objective_band;
    double skew_m = 0.0;
    std::string out_path;
};

int cmd_optimize(const OptArgs& a, std::ostream& out) {
    const FrequencyGrid grid = parse_band(a.band, a.spacing);
    ScenarioParams p = a.flags.resolve();
    p.arm_b.feed.length_m += a.skew_m;
    const auto bounds = parse_interval(a.bounds, "--bounds");
    const auto band = a.objective_band.empty() ? std::pair{grid.front(), grid.back()}
                                               : parse_interval(a.objective_band, "--objective-band");
    const ArmLengthResult r = optimize_arm_length(p, bounds, band, grid);
    const auto iso = cap_db(r.achieved_min_isolation_db);
    const auto base = cap_db(r.baseline_min_isolation_db);
    std::ostringstream rep;
    rep << "best_offset_m=" << format_csv_number(r.best_offset_m) << '\n'
        << "min_isolation_db=" << format_csv_number(iso.value) << (iso.capped ? " (capped)" : "") << '\n';
    if (!std::isnan(r.baseline_min_isolation_db))
        rep << "baseline_min_isolation_db=" << format_csv_number(base.value) << (base.capped ? " (capped)" : "")
            << '\n';
    rep << "evaluations=" << r.evaluations << '\n';
    out << rep.str();
    if (!a.out_path.empty())
        write_file(a.out_path, rep.str());
    return kExitOk;
}

int cmd_touchstone_info(const std::string& path, std::ostream& out) {
    const int n = ports_from_extension(path);
    const TouchstoneFile f = read_touchstone(read_file(path), n, std::filesystem::path(path).stem().string());
    for (const auto& w : f.warnings)
        warn(path + ": " + w);
    const auto& g = f.block.grid();
    out << n << (n == 1 ? " port, " : " ports, ") << format_ghz(g.front()) << "–" << format_ghz(g.back())
        << " GHz, " << g.size() << (g.size() == 1 ? " point, " : " points, ") << to_upper(to_string(f.options.format))
        << '\n';
    return kExitOk;
}

int cmd_touchstone_convert(const std::string& in, const std::string& out_path, const std::string& format,
                           std::ostream& out) {
    const DataFormat fmt = parse_data_format(format);
    const int n = ports_from_extension(in);
    const TouchstoneFile f = read_touchstone(read_file(in), n, std::filesystem::path(in).stem().string());
    for (const auto& w : f.warnings)
        warn(in + ": " + w);
    if (ports_from_extension(out_path) != n)
        throw InputError("output extension must match the port count (.s" + std::to_string(n) + "p)");
    write_file(out_path, write_touchstone(f.block, fmt));
    out << "wrote " << out_path << " (" << to_upper(to_string(fmt)) << ")\n";
    return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Full-duplex front-end S-parameter simulator", "rfsic"};
    app.require_subcommand(1);

    std::string netlist_path, sim_out;
    auto* sim = app.add_subcommand("simulate", "reduce a netlist and write its metric sweep as CSV");
    sim->add_option("netlist", netlist_path, "netlist file")->required();
    sim->add_option("-o,--output", sim_out, "CSV output path (stdout if omitted)");

    ScenarioArgs sc;
    auto* scn = app.add_subcommand("scenario", "sweep a built-in front end and print per-series band statistics");
    scn->add_option("kind", sc.kind, "y3, circulator or splitter")
        ->required()
        ->check(CLI::IsMember({"y3", "circulator", "splitter"}));
    sc.flags.add_to(scn);
    scn->add_option("--band", sc.band, "f_lo:f_hi:n in Hz")->capture_default_str();
    scn->add_option("--spacing", sc.spacing, "linear or log")->capture_default_str();
    scn->add_option("--gamma", sc.gamma, "circulator mismatch, re or re,im");
    auto* iso_opt = scn->add_option("--iso-db", "splitter isolation in dB");
    scn->add_flag("--no-antenna", sc.no_antenna, "leave the antenna port of a baseline bare");
    scn->add_option("-o,--output", sc.out_path, "CSV output path");

    McArgs mc;
    auto* mcc = app.add_subcommand("montecarlo", "Monte Carlo tolerance analysis of the Y3 front end");
    mc.flags.add_to(mcc);
    mcc->add_option("--band", mc.band, "f_lo:f_hi:n in Hz")->capture_default_str();
    mcc->add_option("--spacing", mc.spacing, "linear or log")->capture_default_str();
    mcc->add_option("--runs", mc.runs, "number of runs")->capture_default_str();
    mcc->add_option("--seed", mc.seed, "master seed")->capture_default_str();
    mcc->add_option("--amp-imbalance", mc.amp, "splitter amplitude imbalance in dB: U(a,b), N(mu,s,lo,hi) or x");
    mcc->add_option("--phase-imbalance", mc.phase, "splitter phase imbalance in degrees");
    mcc->add_option("--splitter-iso", mc.iso, "splitter isolation in dB");
    mcc->add_option("--twin-mismatch", mc.mismatch, "dummy reflection mismatch magnitude");
    mcc->add_option("--twin-mismatch-deg", mc.mismatch_deg, "dummy reflection mismatch phase in degrees");
    mcc->add_option("--arm-skew", mc.skew, "dummy arm length skew in metres");
    mcc->add_option("-o,--output", mc.out_path, "CSV output path (stdout if omitted)");

    OptArgs op;
    auto* opc = app.add_subcommand("optimize", "choose the dummy-arm length offset maximising worst-case isolation");
    op.flags.add_to(opc);
    opc->add_option("--band", op.band, "f_lo:f_hi:n in Hz")->capture_default_str();
    opc->add_option("--spacing", op.spacing, "linear or log")->capture_default_str();
    opc->add_option("--bounds", op.bounds, "offset search interval lo:hi in metres")->capture_default_str();
    opc->add_option("--objective-band", op.objective_band, "f_lo:f_hi of the objective (default: whole grid)");
    opc->add_option("--skew-m", op.skew_m, "inject a dummy-arm cable length error before optimising");
    opc->add_option("-o,--output", op.out_path, "report output path");

    std::string ts_path, ts_in, ts_out, ts_format = "ma";
    auto* ts = app.add_subcommand("touchstone", "Touchstone v1 utilities");
    ts->require_subcommand(1);
    auto* info = ts->add_subcommand("info", "print port count, frequency range, point count and format");
    info->add_option("file", ts_path)->required();
    auto* conv = ts->add_subcommand("convert", "rewrite a Touchstone file in another data format");
    conv->add_option("input", ts_in)->required();
    conv->add_option("output", ts_out)->required();
    conv->add_option("--format", ts_format, "ri, ma or db")->capture_default_str();

    auto previous = set_warning_handler([&err](const std::string& msg) { err << "warning: " << msg << '\n'; });
    struct Restore {
        WarningHandler h;
        ~Restore() { set_warning_handler(std::move(h)); }
    } restore{std::move(previous)};

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*sim)
            return cmd_simulate(netlist_path, sim_out, out);
        if (*scn) {
            if (iso_opt->count() > 0)
                sc.iso_db = iso_opt->as<double>();
            return cmd_scenario(sc, out);
        }
        if (*mcc)
            return cmd_montecarlo(mc, out);
        if (*opc)
            return cmd_optimize(op, out);
        if (*info)
            return cmd_touchstone_info(ts_path, out);
        if (*conv)
            return cmd_touchstone_convert(ts_in, ts_out, ts_format, out);
    } catch (const IllPosedError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIllPosed;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitInput;
}

}  // namespace rfsic::cli
