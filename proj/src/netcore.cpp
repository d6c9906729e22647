#include "rfsic/netcore.hpp"

#include "rfsic/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rfsic {

const char* to_string(Spacing s) {
    switch (s) {
    case Spacing::linear: return "linear";
    case Spacing::log: return "log";
    case Spacing::custom: return "custom";
    }
    return "?";
}

FrequencyGrid::FrequencyGrid(std::vector<double> points_hz, Spacing spacing)
    : points_(std::move(points_hz)), spacing_(spacing) {
    if (points_.empty())
        throw InputError("frequency grid needs at least one point");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const double f = points_[i];
        if (!std::isfinite(f) || f <= 0.0)
            throw InputError("frequency grid point " + std::to_string(i) + " is not a positive finite value");
        if (i > 0 && !(f > points_[i - 1]))
            throw InputError("frequency grid is not strictly increasing at point " + std::to_string(i));
    }
    if (spacing_ == Spacing::linear && points_.size() >= 2) {
        const double d0 = points_[1] - points_[0];
        for (std::size_t i = 2; i < points_.size(); ++i) {
            const double d = points_[i] - points_[i - 1];
            if (std::abs(d - d0) > 1e-9 * std::abs(d0))
                throw InputError("linear grid has unequal spacing at point " + std::to_string(i));
        }
    }
}

FrequencyGrid make_grid(double f_start_hz, double f_stop_hz, std::size_t n, Spacing spacing) {
    if (!(f_start_hz > 0.0) || !(f_stop_hz > 0.0))
        throw InputError("grid frequencies must be positive");
    if (n == 0)
        throw InputError("grid needs at least one point");
    if (f_start_hz > f_stop_hz)
        throw InputError("grid start frequency exceeds stop frequency");
    if (n == 1) {
        if (f_start_hz != f_stop_hz)
            throw InputError("a single-point grid needs f_start == f_stop");
        return FrequencyGrid({f_start_hz}, spacing);
    }
    if (spacing == Spacing::custom)
        throw InputError("make_grid supports linear or log spacing only");

    std::vector<double> pts(n);
    const double last = static_cast<double>(n - 1);
    if (spacing == Spacing::linear) {
        const double step = (f_stop_hz - f_start_hz) / last;
        for (std::size_t i = 0; i < n; ++i)
            pts[i] = f_start_hz + step * static_cast<double>(i);
    } else {
        const double ratio = f_stop_hz / f_start_hz;
        for (std::size_t i = 0; i < n; ++i)
            pts[i] = f_start_hz * std::pow(ratio, static_cast<double>(i) / last);
    }
    pts.front() = f_start_hz;
    pts.back() = f_stop_hz;
    return FrequencyGrid(std::move(pts), spacing);
}

FrequencyGrid grid_from_points(std::vector<double> points_hz) {
    if (points_hz.size() >= 2) {
        const double d0 = points_hz[1] - points_hz[0];
        const bool uniform = std::all_of(points_hz.begin() + 1, points_hz.end(),
            [&, prev = points_hz[0]](double f) mutable {
                const bool ok = std::abs((f - prev) - d0) <= 1e-9 * std::abs(d0);
                prev = f;
                return ok;
            });
        if (uniform)
            return FrequencyGrid(std::move(points_hz), Spacing::linear);
        if (points_hz[0] > 0.0) {
            const double r0 = points_hz[1] / points_hz[0];
            bool geometric = true;
            for (std::size_t i = 2; i < points_hz.size() && geometric; ++i)
                geometric = std::abs(points_hz[i] / points_hz[i - 1] - r0) <= 1e-9 * r0;
            if (geometric)
                return FrequencyGrid(std::move(points_hz), Spacing::log);
        }
        return FrequencyGrid(std::move(points_hz), Spacing::custom);
    }
    return FrequencyGrid(std::move(points_hz), Spacing::linear);
}

double db_from_mag(double m) {
    if (std::isnan(m) || m < 0.0)
        throw InputError("magnitude must be non-negative");
    if (m == 0.0)
        return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(m);
}

double mag_from_db(double db) { return std::pow(10.0, db / 20.0); }

double max_singular_value(const CMatrix& s) {
    if (s.size() == 0)
        return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(s);
    return svd.singularValues()(0);
}

bool is_passive(const CMatrix& s, double tol) { return max_singular_value(s) <= 1.0 + tol; }

bool is_reciprocal(const CMatrix& s, double tol) {
    return (s - s.transpose()).cwiseAbs().maxCoeff() <= tol;
}

std::string to_string(const PortRef& ref) { return ref.block + "." + std::to_string(ref.port); }

NetworkBlock::NetworkBlock(std::string name, FrequencyGrid grid, std::vector<CMatrix> matrices,
                           std::vector<std::string> port_labels, double z_ref)
    : name_(std::move(name)),
      grid_(std::move(grid)),
      matrices_(std::move(matrices)),
      labels_(std::move(port_labels)),
      z_ref_(z_ref),
      n_ports_(0) {
    if (name_.empty())
        throw InputError("network block needs a name");
    if (matrices_.size() != grid_.size())
        throw InputError("block '" + name_ + "': " + std::to_string(matrices_.size()) +
                         " matrices for " + std::to_string(grid_.size()) + " frequencies");
    if (!(z_ref_ > 0.0) || !std::isfinite(z_ref_))
        throw InputError("block '" + name_ + "': reference impedance must be positive");
    n_ports_ = static_cast<int>(matrices_.front().rows());
    if (n_ports_ < 1)
        throw InputError("block '" + name_ + "' has no ports");
    for (std::size_t k = 0; k < matrices_.size(); ++k) {
        const auto& m = matrices_[k];
        if (m.rows() != n_ports_ || m.cols() != n_ports_)
            throw InputError("block '" + name_ + "': inconsistent matrix size at frequency index " +
                             std::to_string(k));
        if (!m.allFinite())
            throw InputError("block '" + name_ + "': non-finite S entry at " +
                             std::to_string(grid_[k]) + " Hz");
    }
    if (labels_.empty()) {
        for (int p = 1; p <= n_ports_; ++p)
            labels_.push_back(std::to_string(p));
    } else if (static_cast<int>(labels_.size()) != n_ports_) {
        throw InputError("block '" + name_ + "': port label count does not match port count");
    }
}

NetworkBlock NetworkBlock::constant(std::string name, const FrequencyGrid& grid, const CMatrix& s,
                                    std::vector<std::string> port_labels) {
    return NetworkBlock(std::move(name), grid, std::vector<CMatrix>(grid.size(), s),
                        std::move(port_labels));
}

NetworkBlock NetworkBlock::renamed(std::string name) const {
    NetworkBlock copy = *this;
    copy.name_ = std::move(name);
    if (copy.name_.empty())
        throw InputError("network block needs a name");
    return copy;
}

NetworkBlock interpolate_block(const NetworkBlock& b, const FrequencyGrid& grid) {
    const auto& src = b.grid().points();
    std::vector<CMatrix> out;
    out.reserve(grid.size());
    for (double f : grid.points()) {
        if (f < src.front() || f > src.back()) {
            std::ostringstream msg;
            msg << "block '" << b.name() << "' covers " << src.front() << "-" << src.back()
                << " Hz; cannot extrapolate to " << f << " Hz";
            throw InputError(msg.str());
        }
        auto hi = std::lower_bound(src.begin(), src.end(), f);
        const auto k = static_cast<std::size_t>(hi - src.begin());
        if (*hi == f) {
            out.push_back(b.at(k));
            continue;
        }
        const double t = (f - src[k - 1]) / (src[k] - src[k - 1]);
        const CMatrix& lo = b.at(k - 1);
        const CMatrix& up = b.at(k);
        CMatrix m(lo.rows(), lo.cols());
        for (Eigen::Index i = 0; i < m.size(); ++i) {
            const Complex a = lo(i), c = up(i);
            m(i) = Complex(a.real() + t * (c.real() - a.real()), a.imag() + t * (c.imag() - a.imag()));
        }
        out.push_back(std::move(m));
    }
    return NetworkBlock(b.name(), grid, std::move(out), b.port_labels(), b.z_ref());
}

}  // namespace rfsic
