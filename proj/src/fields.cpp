#include "ed/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ed {

namespace {
void require_grid_size(const Grid1D& g, Eigen::Index n, const char* what) {
    if (n != g.n_points) {
        throw std::invalid_argument(std::string(what) + ": value count does not match grid");
    }
}
}  // namespace

DensityField::DensityField(Grid1D g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
    require_grid_size(grid, values.size(), "DensityField");
    if ((values.array() < 0.0).any()) {
        throw std::invalid_argument("DensityField: negative density value");
    }
    if (std::abs(values.sum() * grid.dx() - 1.0) > 1e-9) {
        throw std::invalid_argument("DensityField: not normalized within 1e-9");
    }
}

DensityField DensityField::normalized(const Grid1D& g, Eigen::VectorXd raw) {
    require_grid_size(g, raw.size(), "DensityField");
    double mx = raw.maxCoeff();
    if (!(mx > 0.0)) throw std::invalid_argument("DensityField: all-zero sample");
    raw = raw.cwiseMax(kDensityFloorRel * mx);
    raw /= raw.sum() * g.dx();
    return DensityField(g, std::move(raw));
}

PhaseField::PhaseField(Grid1D g, Eigen::VectorXd v) : grid(g), values(std::move(v)) {
    require_grid_size(grid, values.size(), "PhaseField");
    if (!values.allFinite()) throw std::invalid_argument("PhaseField: non-finite value");
}

HamiltonianSpec::HamiltonianSpec(double m, Eigen::VectorXd v, double xi_)
    : mass(m), potential(std::move(v)), xi(xi_) {
    if (!(mass > 0.0)) throw std::invalid_argument("HamiltonianSpec: mass must be positive");
    if (!(xi > 0.0)) throw std::invalid_argument("HamiltonianSpec: xi must be positive");
}

HamiltonianSpec HamiltonianSpec::free_particle(const Grid1D& g, double m, double hbar) {
    return HamiltonianSpec(m, Eigen::VectorXd::Zero(g.n_points), hbar * hbar / 8.0);
}

HamiltonianSpec HamiltonianSpec::with_hbar(double m, Eigen::VectorXd v, double hbar) {
    return HamiltonianSpec(m, std::move(v), hbar * hbar / 8.0);
}

WaveField::WaveField(Grid1D g, Eigen::VectorXcd v) : grid(g), values(std::move(v)) {
    require_grid_size(grid, values.size(), "WaveField");
    if (std::abs(norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("WaveField: not normalized within 1e-9");
    }
}

WaveField WaveField::normalized(const Grid1D& g, Eigen::VectorXcd raw) {
    require_grid_size(g, raw.size(), "WaveField");
    double n = std::sqrt(raw.squaredNorm() * g.dx());
    if (!(n > 0.0)) throw std::invalid_argument("WaveField: zero vector");
    raw /= n;
    return WaveField(g, std::move(raw));
}

WaveField to_wavefunction(const DensityField& rho, const PhaseField& phi,
                          const HamiltonianSpec& spec) {
    if (!(rho.grid == phi.grid)) throw std::invalid_argument("to_wavefunction: grid mismatch");
    const double hbar = spec.hbar();
    Eigen::VectorXcd psi(rho.values.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        psi[i] = std::polar(std::sqrt(rho.values[i]), phi.values[i] / hbar);
    }
    return WaveField::normalized(rho.grid, std::move(psi));
}

std::pair<DensityField, PhaseField> from_wavefunction(const WaveField& psi,
                                                      const HamiltonianSpec& spec) {
    const double hbar = spec.hbar();
    Eigen::VectorXd rho = psi.values.cwiseAbs2();
    const double floor = kDensityFloorRel * rho.maxCoeff();
    std::string nodes;
    for (Eigen::Index i = 0; i < rho.size(); ++i) {
        if (rho[i] < floor) {
            if (!nodes.empty()) nodes += ", ";
            nodes += std::to_string(i);
        }
    }
    if (!nodes.empty()) {
        throw std::runtime_error("from_wavefunction: density node(s) at grid index " + nodes);
    }

    constexpr double kPi = 3.14159265358979323846264338328;
    Eigen::VectorXd phase(rho.size());
    double prev = std::arg(psi.values[0]);
    double offset = 0.0;
    phase[0] = prev;
    for (Eigen::Index i = 1; i < rho.size(); ++i) {
        double a = std::arg(psi.values[i]);
        double d = a - prev;
        if (d > kPi) offset -= 2.0 * kPi;
        if (d < -kPi) offset += 2.0 * kPi;
        phase[i] = a + offset;
        prev = a;
    }
    return {DensityField::normalized(psi.grid, std::move(rho)),
            PhaseField(psi.grid, hbar * phase)};
}

DensityField gaussian_density(const Grid1D& g, double center, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_density: sigma must be positive");
    Eigen::VectorXd x = g.nodes();
    Eigen::VectorXd v(x.size());
    // Periodize: a Gaussian truncated at the wrap point has a slope
    // discontinuity there, which spectral derivatives turn into global
    // ringing. Summing the periodic images gives the smooth periodic
    // density the grid actually represents.
    const double L = g.length();
    const int n_images = 1 + static_cast<int>(std::ceil(40.0 * sigma / L));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double sum = 0.0;
        for (int n = -n_images; n <= n_images; ++n) {
            double d = (x[i] - center + n * L) / sigma;
            if (std::abs(d) < 40.0) sum += std::exp(-0.5 * d * d);
        }
        v[i] = sum;
    }
    return DensityField::normalized(g, std::move(v));
}

std::pair<double, double> density_moments(const DensityField& rho) {
    Eigen::VectorXd x = rho.grid.nodes();
    const double dx = rho.grid.dx();
    double mean = rho.values.dot(x) * dx;
    double var = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        double d = x[i] - mean;
        var += rho.values[i] * d * d;
    }
    return {mean, var * dx};
}

}  // namespace ed
