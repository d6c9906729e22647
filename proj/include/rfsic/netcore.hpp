#pragma once

// Foundational numeric types shared by every other module.
//
// Conventions used throughout the library:
//  * phasors assume e^{+jwt}; a delay of tau seconds multiplies a wave by e^{-j 2 pi f tau}
//  * every network is referenced to 50 ohm; blocks at other impedances are rejected
//    when a circuit is assembled, never renormalized
//  * "isolation", "insertion loss" and "return loss" are positive dB (-20 log10 |S|),
//    raw S entries are signed dB (20 log10 |S|)

#include <Eigen/Dense>

#include <complex>
#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace rfsic {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;

inline constexpr double kReferenceImpedance = 50.0;
inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// `custom` covers grids read from files that are neither uniform nor geometric.
enum class Spacing { linear, log, custom };

const char* to_string(Spacing s);

class FrequencyGrid {
public:
    // Validates: at least one point, all > 0, strictly increasing, and for
    // linear spacing adjacent deltas equal to 1e-9 relative.
    FrequencyGrid(std::vector<double> points_hz, Spacing spacing);

    const std::vector<double>& points() const noexcept { return points_; }
    Spacing spacing() const noexcept { return spacing_; }
    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }
    double front() const { return points_.front(); }
    double back() const { return points_.back(); }

    friend bool operator==(const FrequencyGrid& a, const FrequencyGrid& b) {
        return a.points_ == b.points_;
    }

private:
    std::vector<double> points_;
    Spacing spacing_;
};

// n points spanning [f_start, f_stop] inclusive; both endpoints are stored exactly.
FrequencyGrid make_grid(double f_start_hz, double f_stop_hz, std::size_t n, Spacing spacing);

// Picks linear/log/custom for an arbitrary increasing point list.
FrequencyGrid grid_from_points(std::vector<double> points_hz);

// 20 log10(m); m == 0 gives -infinity, m < 0 throws InputError.
double db_from_mag(double m);
double mag_from_db(double db);

// Positive-dB attenuation, -20 log10(m). Zero leakage is +infinity.
inline double loss_db(double m) { return -db_from_mag(m); }

double max_singular_value(const CMatrix& s);
bool is_passive(const CMatrix& s, double tol = 1e-9);
bool is_reciprocal(const CMatrix& s, double tol);

struct PortRef {
    std::string block;
    int port = 0;  // 1-based

    friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

std::string to_string(const PortRef& ref);

// An n-port described by one scattering matrix per grid frequency.
class NetworkBlock {
public:
    NetworkBlock(std::string name, FrequencyGrid grid, std::vector<CMatrix> matrices,
                 std::vector<std::string> port_labels = {},
                 double z_ref = kReferenceImpedance);

    // The same matrix at every grid point.
    static NetworkBlock constant(std::string name, const FrequencyGrid& grid, const CMatrix& s,
                                 std::vector<std::string> port_labels = {});

    const std::string& name() const noexcept { return name_; }
    const FrequencyGrid& grid() const noexcept { return grid_; }
    int n_ports() const noexcept { return n_ports_; }
    double z_ref() const noexcept { return z_ref_; }
    const std::vector<std::string>& port_labels() const noexcept { return labels_; }
    const std::vector<CMatrix>& matrices() const noexcept { return matrices_; }
    const CMatrix& at(std::size_t freq_index) const { return matrices_.at(freq_index); }

    // 1-based (to, from) entry at a frequency index.
    Complex s(std::size_t freq_index, int to, int from) const {
        return matrices_.at(freq_index)(to - 1, from - 1);
    }

    NetworkBlock renamed(std::string name) const;

private:
    std::string name_;
    FrequencyGrid grid_;
    std::vector<CMatrix> matrices_;
    std::vector<std::string> labels_;
    double z_ref_;
    int n_ports_;
};

// Linear interpolation of real and imaginary parts onto `grid`. Points that
// coincide with b's grid are copied bitwise. Extrapolation throws InputError.
NetworkBlock interpolate_block(const NetworkBlock& b, const FrequencyGrid& grid);

}  // namespace rfsic
