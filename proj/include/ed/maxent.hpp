#ifndef ED_MAXENT_HPP
#define ED_MAXENT_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace ed {

/// Point in 3N-dimensional configuration space.
struct Configuration {
    Eigen::VectorXd coords;  // length 3 * n_particles
    int n_particles = 0;

    Configuration() = default;
    Configuration(Eigen::VectorXd c, int n);

    static Configuration zero(int n_particles);

    int dim() const { return static_cast<int>(coords.size()); }
};

/// Scalar drift field on configuration space with gradient access.
struct DriftField {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;

    static DriftField constant();
    /// phi(x) = k . x
    static DriftField linear(Eigen::VectorXd k);
    /// phi(x) = sum_A w_A x_A^2
    static DriftField quadratic(Eigen::VectorXd w);
};

struct KernelParams {
    Eigen::VectorXd masses;  // per particle, strictly positive
    double eta = 1.0;
    double dt = 1.0;
    DriftField drift = DriftField::constant();

    void validate() const;  // throws std::invalid_argument

    /// Per-axis Gaussian variance for particle n.
    double variance(int particle) const { return eta * dt / masses[particle]; }
};

/// Empirical check of the kernel's moment constraints.
struct MomentReport {
    Eigen::VectorXd mean_displacement;  // empirical, per component
    Eigen::VectorXd covariance_diag;    // empirical, per component
    std::int64_t n_samples = 0;
    Eigen::VectorXd standard_errors;    // of the mean, per component

    Eigen::VectorXd kappa_n;            // empirical sum_a <dx^a dx^a> per particle
    Eigen::VectorXd kappa_n_expected;   // 3 eta dt / m_n + |<dx>_n|^2
    double kappa_prime = 0.0;           // empirical <dx . grad phi>
    double kappa_prime_expected = 0.0;
    bool pass = false;                  // all checks within 4 standard errors

    nlohmann::json to_json() const;
};

/// Kernel mean displacement (eta dt / m_n) d(phi)/dx per component.
Eigen::VectorXd mean_displacement(const KernelParams& params, const Configuration& x);

/// Log density of the transition kernel; normalized over x_next.
double transition_logpdf(const KernelParams& params, const Configuration& x,
                         const Configuration& x_next);

class RandomStream;
Configuration transition_sample(const KernelParams& params, const Configuration& x,
                                RandomStream& rng);
Configuration transition_sample(const KernelParams& params, const Configuration& x,
                                std::uint64_t seed);

/// Applies transition_sample `steps` times to each member. Member i draws
/// from the stream (seed, stream = i), so evolution is order-independent.
std::vector<Configuration> evolve_ensemble(const KernelParams& params,
                                           const std::vector<Configuration>& ensemble,
                                           int steps, std::uint64_t seed);

MomentReport verify_constraints(const KernelParams& params, const Configuration& x,
                                std::int64_t n_samples, std::uint64_t seed);

}  // namespace ed

#endif
