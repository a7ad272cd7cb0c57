#include "ed/evolution.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace ed {

namespace {

void require_same_grid(const Grid1D& a, const Grid1D& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

void require_potential(const HamiltonianSpec& spec, const Grid1D& g, const char* what) {
    if (spec.potential.size() != g.n_points) {
        throw std::invalid_argument(std::string(what) + ": potential not sampled on this grid");
    }
}

// Density scale (relative to max rho) added inside the quantum-force sqrt.
// Noise that lands at the density floor would otherwise be rectified: sqrt
// turns a ripple of size a into a ripple of size sqrt(a), whose curvature
// over the tiny amplitude gives forces of order hbar^2 k^2 / 2m regardless
// of a — a runaway loop. Evaluating s = sqrt(rho + eps) caps the ripple
// response at a/(2 eps). Kept one decade above the floor: any larger and
// the force deviates from the true quantum potential over a visible band
// of the tail, which secularly steepens the phase there into a spurious
// shock; any smaller and floor-clamp kinks ring through d2s.
constexpr double kQuantumForceRegRel = 10.0 * kDensityFloorRel;

// delta H / delta rho = (Phi')^2/(2m) + V + (xi/m) [ (rho'/rho)^2 - 2 rho''/rho ].
// The xi bracket equals the quantum potential for hbar^2 = 8 xi. It is
// evaluated as -4 s''/s with s = sqrt(rho + eps): dividing by s instead of
// rho keeps derivative noise near the density floor from being amplified by
// twelve orders of magnitude, and eps bounds the response in empty regions.
Eigen::VectorXd hamiltonian_density_derivative(const SpectralDerivative& der,
                                               const DensityField& rho, const PhaseField& phi,
                                               const HamiltonianSpec& spec) {
    Eigen::VectorXd dphi = der.phase_gradient(phi.values, spec.hbar());
    const double eps = kQuantumForceRegRel * rho.values.maxCoeff();
    Eigen::VectorXd s = (rho.values.array() + eps).cwiseMax(0.0).sqrt().matrix();
    Eigen::VectorXd d2s = der.second(s);
    Eigen::VectorXd q = (-4.0 * spec.xi / spec.mass) * d2s.cwiseQuotient(s);
    Eigen::VectorXd out(rho.values.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out[i] = 0.5 * dphi[i] * dphi[i] / spec.mass + spec.potential[i] + q[i];
    }
    // Low-pass the whole force. Two unresolvable features would otherwise
    // feed the spectral phase gradient: the eps crossover in the tail, where
    // rho falls by e in less than dx, and — for confining potentials — the
    // slope discontinuity of V at the periodic wrap, which Phi would inherit
    // as a corner growing linearly in time until its gradient rings across
    // the grid. Both live where the density is at tail level, so rounding
    // them off does not disturb the transported mass.
    return der.smooth(out);
}

}  // namespace

Eigen::VectorXd current_velocity(const PhaseField& phi, const HamiltonianSpec& spec) {
    SpectralDerivative der(phi.grid);
    return der.phase_gradient(phi.values, spec.hbar()) / spec.mass;
}

double ensemble_hamiltonian(const DensityField& rho, const PhaseField& phi,
                            const HamiltonianSpec& spec) {
    require_same_grid(rho.grid, phi.grid, "ensemble_hamiltonian");
    require_potential(spec, rho.grid, "ensemble_hamiltonian");
    const double floor = rho.floor_value();
    for (Eigen::Index i = 0; i < rho.values.size(); ++i) {
        if (rho.values[i] < floor * (1.0 - 1e-9)) {
            throw std::runtime_error("ensemble_hamiltonian: density below floor at node " +
                                     std::to_string(i));
        }
    }
    SpectralDerivative der(rho.grid);
    Eigen::VectorXd dphi = der.phase_gradient(phi.values, spec.hbar());
    Eigen::VectorXd drho = der.first(rho.values);
    double h = 0.0;
    for (Eigen::Index i = 0; i < rho.values.size(); ++i) {
        h += 0.5 * rho.values[i] * dphi[i] * dphi[i] / spec.mass +
             rho.values[i] * spec.potential[i] +
             spec.xi * drho[i] * drho[i] / (spec.mass * rho.values[i]);
    }
    return h * rho.grid.dx();
}

double stability_dt_max(const HamiltonianSpec& spec, const Grid1D& grid) {
    const double dx = grid.dx();
    return 0.25 * spec.mass * dx * dx / spec.hbar();
}

HamiltonStepResult hamilton_step(const DensityField& rho, const PhaseField& phi,
                                 const HamiltonianSpec& spec, double dt) {
    require_same_grid(rho.grid, phi.grid, "hamilton_step");
    require_potential(spec, rho.grid, "hamilton_step");
    if (!(dt > 0.0)) throw std::invalid_argument("hamilton_step: dt must be positive");
    if (dt > stability_dt_max(spec, rho.grid) * (1.0 + 1e-12)) {
        throw std::invalid_argument("hamilton_step: dt exceeds stability bound " +
                                    std::to_string(stability_dt_max(spec, rho.grid)));
    }
    SpectralDerivative der(rho.grid);

    // Phi from rho.
    Eigen::VectorXd phi_new =
        phi.values - dt * hamiltonian_density_derivative(der, rho, phi, spec);

    // rho from the new Phi: d(rho)/dt = -d/dx (rho Phi'/m).
    Eigen::VectorXd v = der.phase_gradient(phi_new, spec.hbar()) / spec.mass;
    Eigen::VectorXd flux = rho.values.cwiseProduct(v);
    // The low-pass keeps flux noise generated at the truncated tails from
    // rectifying (via the floor) into a persistent sawtooth that the
    // quantum-potential term would amplify at the next step.
    Eigen::VectorXd rho_new = der.smooth(rho.values - dt * der.first(flux));

    const double neg_tol = 1e-6 * rho.values.maxCoeff();
    double min_rho = rho_new.minCoeff();
    if (min_rho < -neg_tol) {
        throw std::runtime_error("hamilton_step: density went negative beyond tolerance (min " +
                                 std::to_string(min_rho) + ")");
    }

    HamiltonStepResult result;
    result.renorm_correction = std::abs(rho_new.sum() * rho.grid.dx() - 1.0);
    const double floor = kDensityFloorRel * rho_new.maxCoeff();
    for (Eigen::Index i = 0; i < rho_new.size(); ++i) {
        if (rho_new[i] < floor) {
            rho_new[i] = floor;
            ++result.floored_points;
        }
    }
    rho_new /= rho_new.sum() * rho.grid.dx();
    result.rho = DensityField(rho.grid, std::move(rho_new));
    result.phi = PhaseField(phi.grid, std::move(phi_new));
    return result;
}

WaveField schrodinger_step(const WaveField& psi, const HamiltonianSpec& spec, double dt) {
    require_potential(spec, psi.grid, "schrodinger_step");
    const double hbar = spec.hbar();
    SpectralDerivative der(psi.grid);
    const Eigen::VectorXd k = psi.grid.wavenumbers();

    Eigen::VectorXcd half_v(psi.values.size());
    for (Eigen::Index i = 0; i < half_v.size(); ++i) {
        half_v[i] = std::polar(1.0, -0.5 * spec.potential[i] * dt / hbar);
    }
    Eigen::VectorXcd u = psi.values.cwiseProduct(half_v);
    Eigen::VectorXcd uk = der.forward(u);
    for (Eigen::Index i = 0; i < uk.size(); ++i) {
        uk[i] *= std::polar(1.0, -0.5 * hbar * k[i] * k[i] * dt / spec.mass);
    }
    u = der.inverse(uk).cwiseProduct(half_v);
    return WaveField(psi.grid, std::move(u));
}

namespace {

// Relative L2 / Linf distance after aligning the global phase by the overlap.
CompareSample compare_states(double t, const WaveField& ed_psi, const WaveField& ref) {
    std::complex<double> overlap = (ed_psi.values.adjoint() * ref.values)(0, 0);
    std::complex<double> align =
        std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : std::complex<double>(1.0, 0.0);
    const double dx = ed_psi.grid.dx();
    double l2 = 0.0, linf = 0.0;
    for (Eigen::Index i = 0; i < ref.values.size(); ++i) {
        double d = std::abs(ed_psi.values[i] * align - ref.values[i]);
        l2 += d * d;
        linf = std::max(linf, d);
    }
    double ref_norm = std::sqrt(ref.values.squaredNorm() * dx);
    double ref_linf = ref.values.cwiseAbs().maxCoeff();
    CompareSample s;
    s.t = t;
    s.l2 = std::sqrt(l2 * dx) / ref_norm;
    s.linf = linf / ref_linf;
    return s;
}

}  // namespace

CompareReport evolve_compare(const DensityField& rho0, const PhaseField& phi0,
                             const HamiltonianSpec& spec, double t_final, double dt,
                             int n_outputs) {
    require_same_grid(rho0.grid, phi0.grid, "evolve_compare");
    if (t_final < 0.0) throw std::invalid_argument("evolve_compare: negative final time");
    if (n_outputs < 1) throw std::invalid_argument("evolve_compare: need at least one output");

    CompareReport report;
    DensityField rho = rho0;
    PhaseField phi = phi0;
    WaveField ref = to_wavefunction(rho0, phi0, spec);
    const double h0 = ensemble_hamiltonian(rho0, phi0, spec);

    const int n_steps = t_final > 0.0 ? std::max(1, static_cast<int>(std::ceil(t_final / dt))) : 0;
    const double step_dt = n_steps > 0 ? t_final / n_steps : 0.0;

    auto record = [&](double t) {
        CompareSample s = compare_states(t, to_wavefunction(rho, phi, spec), ref);
        s.width_sq_ed = density_moments(rho).second;
        DensityField ref_rho = DensityField::normalized(ref.grid, ref.values.cwiseAbs2());
        s.width_sq_ref = density_moments(ref_rho).second;
        report.samples.push_back(s);
    };
    record(0.0);

    int next_output = 1;
    for (int step = 1; step <= n_steps; ++step) {
        HamiltonStepResult r = hamilton_step(rho, phi, spec, step_dt);
        report.norm_drift = std::max(report.norm_drift, r.renorm_correction);
        report.max_renorm = std::max(report.max_renorm, r.renorm_correction);
        rho = std::move(r.rho);
        phi = std::move(r.phi);

        double pre_norm = ref.norm();
        ref = schrodinger_step(ref, spec, step_dt);
        report.ref_norm_drift =
            std::max(report.ref_norm_drift, std::abs(ref.norm() - pre_norm));

        double h = ensemble_hamiltonian(rho, phi, spec);
        double scale = std::max(std::abs(h0), 1e-30);
        report.energy_drift = std::max(report.energy_drift, std::abs(h - h0) / scale);

        if (step * n_outputs >= next_output * n_steps) {
            record(step * step_dt);
            ++next_output;
        }
    }
    return report;
}

nlohmann::json CompareReport::to_json() const {
    nlohmann::json samples_json = nlohmann::json::array();
    for (const auto& s : samples) {
        samples_json.push_back({{"t", s.t},
                                {"l2", s.l2},
                                {"linf", s.linf},
                                {"width_sq_ed", s.width_sq_ed},
                                {"width_sq_ref", s.width_sq_ref}});
    }
    return nlohmann::json{
        {"schema", 1},
        {"samples", samples_json},
        {"norm_drift", norm_drift},
        {"ref_norm_drift", ref_norm_drift},
        {"energy_drift", energy_drift},
        {"max_renorm", max_renorm},
        {"final_l2", final_l2()},
    };
}

}  // namespace ed
