#ifndef ED_EVOLUTION_HPP
#define ED_EVOLUTION_HPP

#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ed/fields.hpp"
#include "ed/grid.hpp"

namespace ed {

/// v = (1/m) dPhi/dx, spectral. The gradient is taken through the unit
/// phase factor exp(i Phi/hbar), so linear (winding) phases commensurate
/// with the periodic grid are handled exactly.
Eigen::VectorXd current_velocity(const PhaseField& phi, const HamiltonianSpec& spec);

/// Quadrature of 1/2 rho (dPhi)^2/m + rho V + xi (drho)^2/(m rho).
double ensemble_hamiltonian(const DensityField& rho, const PhaseField& phi,
                            const HamiltonianSpec& spec);

/// Largest stable step for the semi-implicit stepper: 0.25 * m * dx^2 / hbar.
double stability_dt_max(const HamiltonianSpec& spec, const Grid1D& grid);

struct HamiltonStepResult {
    DensityField rho;
    PhaseField phi;
    double renorm_correction = 0.0;  // |norm - 1| before renormalization
    int floored_points = 0;
};

/// One symplectic-Euler step: Phi is updated from rho, then rho from the
/// new Phi. rho is renormalized and floored afterwards; the correction
/// magnitude is reported in the result.
HamiltonStepResult hamilton_step(const DensityField& rho, const PhaseField& phi,
                                 const HamiltonianSpec& spec, double dt);

/// One second-order split-step (Strang) spectral step of the linear
/// Schroedinger equation; unitary to rounding.
WaveField schrodinger_step(const WaveField& psi, const HamiltonianSpec& spec, double dt);

struct CompareSample {
    double t = 0.0;
    double l2 = 0.0;    // relative, phase-aligned
    double linf = 0.0;  // relative, phase-aligned
    double width_sq_ed = 0.0;
    double width_sq_ref = 0.0;
};

struct CompareReport {
    std::vector<CompareSample> samples;
    double norm_drift = 0.0;        // max pre-renormalization |norm-1| per step
    double ref_norm_drift = 0.0;    // max per-step |norm-1| of the reference
    double energy_drift = 0.0;      // max relative drift of the ensemble Hamiltonian
    double max_renorm = 0.0;

    double final_l2() const { return samples.empty() ? 0.0 : samples.back().l2; }
    nlohmann::json to_json() const;
};

/// Evolves (rho, Phi) with hamilton_step and the same initial data with
/// schrodinger_step, comparing the reconstructed wavefunction against the
/// spectral reference at n_outputs equally spaced times (global phase
/// aligned by the overlap).
CompareReport evolve_compare(const DensityField& rho0, const PhaseField& phi0,
                             const HamiltonianSpec& spec, double t_final, double dt,
                             int n_outputs = 10);

}  // namespace ed

#endif
