#include "rfsic/optimize.hpp"

#include "rfsic/errors.hpp"

#include <cmath>
#include <limits>

namespace rfsic {
namespace {

// NaN ranks below everything, +inf above every finite value.
bool better(double a, double b) {
    if (std::isnan(a))
        return false;
    if (std::isnan(b))
        return true;
    return a > b;
}

}  // namespace

std::pair<double, double> maximize_scalar(const std::function<double(double)>& objective, double lo, double hi,
                                          const LengthSearchOptions& opt, std::size_t* evaluations) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
        throw InputError("search bounds must be finite with lo <= hi");
    std::size_t evals = 0;
    auto f = [&](double x) {
        ++evals;
        return objective(x);
    };

    double best_x = lo;
    double best_f = f(lo);
    if (lo == hi) {
        if (evaluations)
            *evaluations = evals;
        return {best_x, best_f};
    }

    const std::size_t n = std::max<std::size_t>(opt.coarse_samples, 3);
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i)
        xs[i] = lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(n - 1));
    xs.back() = hi;
    std::size_t best_i = 0;
    for (std::size_t i = 1; i < n; ++i) {
        const double v = f(xs[i]);
        if (better(v, best_f)) {
            best_f = v;
            best_x = xs[i];
            best_i = i;
        }
    }

    double a = xs[best_i == 0 ? 0 : best_i - 1];
    double b = xs[best_i + 1 >= n ? n - 1 : best_i + 1];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = f(c);
    double fd = f(d);
    for (int iter = 0; iter < 500 && (b - a) > opt.tolerance_m; ++iter) {
        if (better(fc, fd) || (fc == fd && std::isinf(fc))) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    for (auto [x, v] : {std::pair{c, fc}, std::pair{d, fd}, std::pair{mid, fm}}) {
        if (better(v, best_f)) {
            best_f = v;
            best_x = x;
        }
    }
    if (evaluations)
        *evaluations = evals;
    return {best_x, best_f};
}

double min_band_isolation(const ScenarioParams& p, double offset_m, double f_lo, double f_hi,
                          const FrequencyGrid& grid) {
    std::vector<double> pts;
    for (double f : grid.points())
        if (f >= f_lo && f <= f_hi)
            pts.push_back(f);
    if (pts.empty())
        return std::numeric_limits<double>::quiet_NaN();
    ScenarioParams q = p;
    q.dummy_arm_length_offset_m = offset_m;
    const Circuit c = build_y3(q, grid_from_points(std::move(pts)));
    const int tx = c.external_index("Tx"), rx = c.external_index("Rx");
    const Reducer red(c);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < c.grid().size(); ++k)
        worst = std::min(worst, loss_db(std::abs(red.entry(k, rx, tx))));
    return worst;
}

ArmLengthResult optimize_arm_length(const ScenarioParams& p, std::pair<double, double> bounds_m,
                                    std::pair<double, double> band_hz, const FrequencyGrid& grid,
                                    const LengthSearchOptions& opt) {
    const auto [lo, hi] = bounds_m;
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo > hi)
        throw InputError("offset bounds must be finite with lo <= hi");
    if (!(band_hz.first <= band_hz.second))
        throw InputError("objective band must satisfy f_lo <= f_hi");
    const double min_allowed = -p.arm_b.feed.length_m;
    if (lo < min_allowed)
        throw InputError("lower offset bound would make a dummy-arm cable length negative");

    auto objective = [&](double x) { return min_band_isolation(p, x, band_hz.first, band_hz.second, grid); };

    std::size_t evals = 0;
    auto [x, fx] = maximize_scalar(objective, lo, hi, opt, &evals);
    double f0 = std::numeric_limits<double>::quiet_NaN();
    if (lo <= 0.0 && 0.0 <= hi) {
        f0 = objective(0.0);
        ++evals;
        if (!better(fx, f0) && !std::isnan(f0)) {
            x = 0.0;
            fx = f0;
        }
    }
    if (std::isnan(fx))
        throw SolveError("objective is not finite anywhere in the offset bounds (is the band empty?)");
    return {x, fx, f0, evals};
}

}  // namespace rfsic
