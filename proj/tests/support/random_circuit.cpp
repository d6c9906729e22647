#include "random_circuit.hpp"

#include <algorithm>

namespace rfsic::testsupport {

CMatrix random_passive_matrix(std::mt19937_64& rng, int n, bool reciprocal, double max_gain) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) = Complex(g(rng), g(rng));
    if (reciprocal)
        m = (0.5 * (m + m.transpose())).eval();
    return m * (max_gain / max_singular_value(m));
}

Circuit random_circuit(std::mt19937_64& rng, const RandomCircuitOptions& opt) {
    std::uniform_int_distribution<int> n_blocks(opt.min_blocks, opt.max_blocks);
    std::uniform_int_distribution<int> n_ports(1, opt.max_ports);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    std::vector<double> freqs;
    double f = 1e9;
    for (std::size_t k = 0; k < opt.n_freqs; ++k) {
        freqs.push_back(f);
        f += 1e8 + 9e8 * u(rng);
    }
    const FrequencyGrid grid = grid_from_points(freqs);

    std::vector<NetworkBlock> blocks;
    std::vector<PortRef> ports;
    const int nb = n_blocks(rng);
    for (int b = 0; b < nb; ++b) {
        const int np = n_ports(rng);
        std::vector<CMatrix> mats;
        for (std::size_t k = 0; k < grid.size(); ++k)
            mats.push_back(random_passive_matrix(rng, np, opt.reciprocal, 0.5 + 0.45 * u(rng)));
        const std::string name = "B" + std::to_string(b);
        blocks.emplace_back(name, grid, std::move(mats));
        for (int p = 1; p <= np; ++p)
            ports.push_back({name, p});
    }

    std::shuffle(ports.begin(), ports.end(), rng);
    std::uniform_int_distribution<std::size_t> n_ext(1, std::min<std::size_t>(ports.size(), 4));
    std::size_t ext = n_ext(rng);
    if ((ports.size() - ext) % 2 != 0)
        ++ext;
    if (ext > ports.size())
        ext -= 2;

    std::vector<ExternalPort> externals;
    for (std::size_t i = 0; i < ext; ++i)
        externals.push_back({"P" + std::to_string(i + 1), ports[i]});
    std::vector<std::pair<PortRef, PortRef>> conns;
    for (std::size_t i = ext; i + 1 < ports.size(); i += 2)
        conns.emplace_back(ports[i], ports[i + 1]);
    return assemble(std::move(blocks), std::move(conns), std::move(externals));
}

double relative_difference(const CMatrix& a, const CMatrix& b) {
    const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
    return (a - b).cwiseAbs().maxCoeff() / scale;
}

CMatrix oracle_matrix(const Circuit& c, std::size_t freq_index) {
    const auto n = static_cast<Eigen::Index>(c.external_ports().size());
    CMatrix m(n, n);
    for (Eigen::Index k = 0; k < n; ++k)
        m.col(k) = oracle_solve(c, freq_index, static_cast<std::size_t>(k));
    return m;
}

}  // namespace rfsic::testsupport
