#ifndef ED_FIELDS_HPP
#define ED_FIELDS_HPP

#include <utility>

#include <Eigen/Dense>

#include "ed/grid.hpp"

namespace ed {

/// Relative density floor: rho is clipped at kDensityFloorRel * max(rho)
/// to regularize the 1/rho quantum-potential term near nodes.
inline constexpr double kDensityFloorRel = 1e-12;

/// Grid-sampled probability density rho(x). Normalized to unit integral
/// and floored at construction.
struct DensityField {
    Grid1D grid;
    Eigen::VectorXd values;

    DensityField() = default;
    /// Requires values already normalized to 1e-9 and above the floor.
    DensityField(Grid1D g, Eigen::VectorXd v);

    /// Normalizes and floors an arbitrary nonnegative sample vector.
    static DensityField normalized(const Grid1D& g, Eigen::VectorXd raw);

    double floor_value() const { return kDensityFloorRel * values.maxCoeff(); }
    double norm() const { return values.sum() * grid.dx(); }
};

/// Grid-sampled phase field Phi(x), units of action.
struct PhaseField {
    Grid1D grid;
    Eigen::VectorXd values;

    PhaseField() = default;
    PhaseField(Grid1D g, Eigen::VectorXd v);
};

/// Mass, external potential, and the quantum-potential coupling xi.
/// hbar is derived: hbar^2 = 8 xi, which makes the xi-term of the
/// ensemble Hamiltonian the exact quantum potential.
struct HamiltonianSpec {
    double mass = 1.0;
    Eigen::VectorXd potential;  // sampled on the grid
    double xi = 0.125;          // default gives hbar = 1

    HamiltonianSpec() = default;
    HamiltonianSpec(double m, Eigen::VectorXd v, double xi_);
    static HamiltonianSpec free_particle(const Grid1D& g, double m = 1.0, double hbar = 1.0);
    static HamiltonianSpec with_hbar(double m, Eigen::VectorXd v, double hbar);

    double hbar() const { return std::sqrt(8.0 * xi); }
};

/// Grid-sampled complex wavefunction, unit L2 norm.
struct WaveField {
    Grid1D grid;
    Eigen::VectorXcd values;

    WaveField() = default;
    WaveField(Grid1D g, Eigen::VectorXcd v);

    static WaveField normalized(const Grid1D& g, Eigen::VectorXcd raw);

    double norm() const { return std::sqrt(values.squaredNorm() * grid.dx()); }
};

/// Psi = sqrt(rho) exp(i Phi / hbar) pointwise.
WaveField to_wavefunction(const DensityField& rho, const PhaseField& phi,
                          const HamiltonianSpec& spec);

/// rho = |Psi|^2, Phi = hbar * unwrapped arg(Psi), unwrap anchored at the
/// left grid edge. Throws on density nodes (|Psi|^2 below the floor).
std::pair<DensityField, PhaseField> from_wavefunction(const WaveField& psi,
                                                      const HamiltonianSpec& spec);

/// Gaussian density exp(-(x-center)^2 / (2 sigma^2)), normalized.
DensityField gaussian_density(const Grid1D& g, double center, double sigma);

/// Mean and variance of x under rho.
std::pair<double, double> density_moments(const DensityField& rho);

}  // namespace ed

#endif
