#include "rfsic/touchstone.hpp"

#include "rfsic/errors.hpp"
#include "rfsic/log.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rfsic {
namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            out.push_back(line.substr(start, i - start));
    }
    return out;
}

double unit_scale(FreqUnit u) {
    switch (u) {
    case FreqUnit::hz: return 1.0;
    case FreqUnit::khz: return 1e3;
    case FreqUnit::mhz: return 1e6;
    case FreqUnit::ghz: return 1e9;
    }
    return 1.0;
}

double parse_real(std::string_view tok, std::size_t line) {
    const std::string s(tok);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || s.empty() || !std::isfinite(v))
        throw ParseError(line, "invalid number '" + s + "'");
    return v;
}

TouchstoneOptions parse_option_line(std::string_view body, std::size_t line) {
    TouchstoneOptions opt;
    const auto toks = split_ws(body);
    for (std::size_t i = 0; i < toks.size(); ++i) {
        const std::string t = upper(toks[i]);
        if (t == "HZ") opt.freq_unit = FreqUnit::hz;
        else if (t == "KHZ") opt.freq_unit = FreqUnit::khz;
        else if (t == "MHZ") opt.freq_unit = FreqUnit::mhz;
        else if (t == "GHZ") opt.freq_unit = FreqUnit::ghz;
        else if (t == "S") {}
        else if (t == "Y" || t == "Z" || t == "H" || t == "G")
            throw ParseError(line, "parameter type " + t + " is not supported; only S parameters can be read");
        else if (t == "RI") opt.format = DataFormat::ri;
        else if (t == "MA") opt.format = DataFormat::ma;
        else if (t == "DB") opt.format = DataFormat::db;
        else if (t == "R") {
            if (i + 1 >= toks.size())
                throw ParseError(line, "option 'R' needs a reference impedance");
            opt.z_ref = parse_real(toks[++i], line);
            if (!(opt.z_ref > 0.0))
                throw ParseError(line, "reference impedance must be positive");
        } else {
            throw ParseError(line, "unknown option token '" + std::string(toks[i]) + "'");
        }
    }
    return opt;
}

Complex to_complex(double a, double b, DataFormat fmt) {
    switch (fmt) {
    case DataFormat::ri: return {a, b};
    case DataFormat::ma: return std::polar(a, deg_to_rad(b));
    case DataFormat::db: return std::polar(std::pow(10.0, a / 20.0), deg_to_rad(b));
    }
    return {};
}

// Position of the k-th value pair inside an n-port record.
std::pair<int, int> pair_index(int k, int n) {
    if (n == 2) {
        static constexpr std::array<std::pair<int, int>, 4> order{{{0, 0}, {1, 0}, {0, 1}, {1, 1}}};
        return order[static_cast<std::size_t>(k)];
    }
    return {k / n, k % n};
}

std::string fmt_number(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    std::string s(buf.data(), ptr);
    if (s.find_first_of(".eEn") == std::string::npos)
        s += ".0";
    return s;
}

}  // namespace

const char* to_string(FreqUnit u) {
    switch (u) {
    case FreqUnit::hz: return "HZ";
    case FreqUnit::khz: return "KHZ";
    case FreqUnit::mhz: return "MHZ";
    case FreqUnit::ghz: return "GHZ";
    }
    return "?";
}

const char* to_string(DataFormat f) {
    switch (f) {
    case DataFormat::ri: return "RI";
    case DataFormat::ma: return "MA";
    case DataFormat::db: return "DB";
    }
    return "?";
}

DataFormat parse_data_format(std::string_view text) {
    const std::string t = upper(text);
    if (t == "RI") return DataFormat::ri;
    if (t == "MA") return DataFormat::ma;
    if (t == "DB") return DataFormat::db;
    throw InputError("unknown Touchstone data format '" + std::string(text) + "' (expected RI, MA or DB)");
}

TouchstoneFile read_touchstone(std::string_view text, int n_ports, std::string block_name) {
    if (n_ports < 1 || n_ports > 4)
        throw InputError("Touchstone files with " + std::to_string(n_ports) + " ports are not supported (1-4)");
    if (text.empty())
        throw InputError("empty Touchstone text");

    TouchstoneOptions opt;
    bool have_options = false;
    bool have_data = false;
    bool in_noise = false;
    std::vector<std::string> warnings;

    const std::size_t n = static_cast<std::size_t>(n_ports);
    const std::size_t expected = 1 + 2 * n * n;
    std::vector<double> pending;
    std::vector<double> freqs;
    std::vector<CMatrix> mats;

    auto finish_record = [&](std::size_t line) {
        const double f = pending[0] * unit_scale(opt.freq_unit);
        if (!freqs.empty() && !(f > freqs.back()))
            throw ParseError(line, "frequencies must be strictly increasing");
        CMatrix m(n_ports, n_ports);
        for (int k = 0; k < n_ports * n_ports; ++k) {
            const auto [i, j] = pair_index(k, n_ports);
            m(i, j) = to_complex(pending[1 + 2 * k], pending[2 + 2 * k], opt.format);
        }
        freqs.push_back(f);
        mats.push_back(std::move(m));
        pending.clear();
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        if (const auto bang = line.find('!'); bang != std::string_view::npos)
            line = line.substr(0, bang);
        const auto toks = split_ws(line);
        if (toks.empty())
            continue;
        if (toks[0].front() == '[')
            throw ParseError(line_no, "Touchstone v2 unsupported (keyword " + std::string(toks[0]) + ")");
        if (toks[0].front() == '#') {
            if (have_data)
                throw ParseError(line_no, "option line after data");
            if (have_options) {
                warnings.push_back("line " + std::to_string(line_no) + ": extra option line ignored");
                continue;
            }
            const auto hash = line.find('#');
            opt = parse_option_line(line.substr(hash + 1), line_no);
            have_options = true;
            continue;
        }
        if (in_noise)
            continue;

        std::vector<double> vals;
        vals.reserve(toks.size());
        for (auto t : toks)
            vals.push_back(parse_real(t, line_no));
        have_data = true;

        if (pending.empty() && n_ports == 2 && !freqs.empty() &&
            !(vals[0] * unit_scale(opt.freq_unit) > freqs.back()) && vals.size() == 5) {
            in_noise = true;
            warnings.push_back("line " + std::to_string(line_no) + ": noise parameter data skipped");
            continue;
        }

        if (n_ports <= 2) {
            if (vals.size() != expected)
                throw ParseError(line_no, "expected " + std::to_string(expected) + " values per frequency line, found " +
                                              std::to_string(vals.size()));
            pending = std::move(vals);
            finish_record(line_no);
            continue;
        }
        pending.insert(pending.end(), vals.begin(), vals.end());
        if (pending.size() > expected)
            throw ParseError(line_no, "record has " + std::to_string(pending.size()) + " values, expected " +
                                          std::to_string(expected));
        if (pending.size() == expected)
            finish_record(line_no);
    }
    if (!pending.empty())
        throw ParseError(line_no, "incomplete record at end of data (" + std::to_string(pending.size()) + " of " +
                                      std::to_string(expected) + " values)");
    if (freqs.empty())
        throw ParseError(line_no, "no frequency data");

    for (const auto& w : warnings)
        warn(w);

    FrequencyGrid grid = grid_from_points(std::move(freqs));
    NetworkBlock block(std::move(block_name), std::move(grid), std::move(mats), {}, opt.z_ref);
    return TouchstoneFile{opt, std::move(block), std::move(warnings)};
}

NetworkBlock parse_touchstone(std::string_view text, int n_ports, std::string block_name) {
    return read_touchstone(text, n_ports, std::move(block_name)).block;
}

std::string write_touchstone(const NetworkBlock& b, DataFormat fmt) {
    const int n = b.n_ports();
    if (n < 1 || n > 4)
        throw InputError("cannot write a " + std::to_string(n) + "-port block as Touchstone v1");

    std::ostringstream out;
    out << "! " << b.name() << ", " << n << "-port S-parameters\n";
    std::array<char, 32> zbuf{};
    auto [zend, zec] = std::to_chars(zbuf.data(), zbuf.data() + zbuf.size(), b.z_ref());
    out << "# GHZ S " << to_string(fmt) << " R " << std::string(zbuf.data(), zend) << '\n';

    auto pair_text = [&](Complex z) {
        double a = 0.0, c = 0.0;
        switch (fmt) {
        case DataFormat::ri:
            a = z.real();
            c = z.imag();
            break;
        case DataFormat::ma:
            a = std::abs(z);
            c = rad_to_deg(std::arg(z));
            break;
        case DataFormat::db: {
            const double m = std::abs(z);
            a = m > 0.0 ? 20.0 * std::log10(m) : -400.0;
            c = rad_to_deg(std::arg(z));
            break;
        }
        }
        return fmt_number(a) + " " + fmt_number(c);
    };

    for (std::size_t k = 0; k < b.grid().size(); ++k) {
        const CMatrix& m = b.at(k);
        out << fmt_number(b.grid()[k] / 1e9);
        if (n <= 2) {
            for (int p = 0; p < n * n; ++p) {
                const auto [i, j] = pair_index(p, n);
                out << ' ' << pair_text(m(i, j));
            }
            out << '\n';
        } else {
            for (int i = 0; i < n; ++i) {
                if (i > 0)
                    out << ' ';
                for (int j = 0; j < n; ++j)
                    out << ' ' << pair_text(m(i, j));
                out << '\n';
            }
        }
    }
    return out.str();
}

int ports_from_extension(const std::string& path) {
    const std::string ext = upper(std::filesystem::path(path).extension().string());
    if (ext == ".TS")
        throw InputError("Touchstone v2 unsupported: " + path);
    if (ext.size() == 4 && ext[1] == 'S' && ext[3] == 'P' && ext[2] >= '1' && ext[2] <= '4')
        return ext[2] - '0';
    throw InputError("cannot infer port count from file name '" + path + "' (expected .s1p-.s4p)");
}

NetworkBlock load_touchstone_file(const std::string& path, std::string block_name) {
    const int n = ports_from_extension(path);
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (block_name.empty())
        block_name = std::filesystem::path(path).stem().string();
    try {
        return parse_touchstone(ss.str(), n, std::move(block_name));
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path + ": " + std::string(e.what()).substr(std::string(e.what()).find(": ") + 2));
    }
}

}  // namespace rfsic
