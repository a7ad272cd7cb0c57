#include "ed/maxent.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "ed/random.hpp"

namespace ed {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_finite(const Eigen::VectorXd& v, const char* what) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) {
            throw std::runtime_error(std::string(what) + " has non-finite component at index " +
                                     std::to_string(i));
        }
    }
}

}  // namespace

Configuration::Configuration(Eigen::VectorXd c, int n) : coords(std::move(c)), n_particles(n) {
    if (n_particles <= 0) throw std::invalid_argument("Configuration: n_particles must be positive");
    if (coords.size() != 3 * static_cast<Eigen::Index>(n_particles)) {
        throw std::invalid_argument("Configuration: coords length must be 3 * n_particles");
    }
    require_finite(coords, "Configuration coords");
}

Configuration Configuration::zero(int n_particles) {
    return Configuration(Eigen::VectorXd::Zero(3 * n_particles), n_particles);
}

DriftField DriftField::constant() {
    return DriftField{
        [](const Eigen::VectorXd&) { return 0.0; },
        [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Zero(x.size()).eval(); },
    };
}

DriftField DriftField::linear(Eigen::VectorXd k) {
    auto kk = std::make_shared<Eigen::VectorXd>(std::move(k));
    return DriftField{
        [kk](const Eigen::VectorXd& x) { return kk->dot(x); },
        [kk](const Eigen::VectorXd&) { return *kk; },
    };
}

DriftField DriftField::quadratic(Eigen::VectorXd w) {
    auto ww = std::make_shared<Eigen::VectorXd>(std::move(w));
    return DriftField{
        [ww](const Eigen::VectorXd& x) { return ww->cwiseProduct(x).dot(x); },
        [ww](const Eigen::VectorXd& x) { return (2.0 * ww->cwiseProduct(x)).eval(); },
    };
}

void KernelParams::validate() const {
    if (masses.size() == 0) throw std::invalid_argument("KernelParams: masses empty");
    if ((masses.array() <= 0.0).any()) {
        throw std::invalid_argument("KernelParams: masses must be strictly positive");
    }
    if (!(eta > 0.0)) throw std::invalid_argument("KernelParams: eta must be positive");
    if (!(dt > 0.0)) throw std::invalid_argument("KernelParams: dt must be positive");
    if (!drift.gradient) throw std::invalid_argument("KernelParams: drift gradient missing");
}

Eigen::VectorXd mean_displacement(const KernelParams& params, const Configuration& x) {
    params.validate();
    if (x.coords.size() != 3 * params.masses.size()) {
        throw std::invalid_argument("mean_displacement: configuration/mass dimension mismatch");
    }
    Eigen::VectorXd g = params.drift.gradient(x.coords);
    if (g.size() != x.coords.size()) {
        throw std::runtime_error("mean_displacement: drift gradient has wrong dimension");
    }
    require_finite(g, "drift gradient");
    Eigen::VectorXd out(g.size());
    for (int n = 0; n < x.n_particles; ++n) {
        double scale = params.eta * params.dt / params.masses[n];
        out.segment(3 * n, 3) = scale * g.segment(3 * n, 3);
    }
    return out;
}

double transition_logpdf(const KernelParams& params, const Configuration& x,
                         const Configuration& x_next) {
    if (x.coords.size() != x_next.coords.size()) {
        throw std::invalid_argument("transition_logpdf: dimension mismatch");
    }
    Eigen::VectorXd mu = x.coords + mean_displacement(params, x);
    double logp = 0.0;
    for (int n = 0; n < x.n_particles; ++n) {
        double v = params.variance(n);
        for (int a = 0; a < 3; ++a) {
            double d = x_next.coords[3 * n + a] - mu[3 * n + a];
            logp += -0.5 * d * d / v - 0.5 * std::log(kTwoPi * v);
        }
    }
    return logp;
}

Configuration transition_sample(const KernelParams& params, const Configuration& x,
                                RandomStream& rng) {
    Eigen::VectorXd mu = x.coords + mean_displacement(params, x);
    Eigen::VectorXd out(mu.size());
    for (int n = 0; n < x.n_particles; ++n) {
        double sigma = std::sqrt(params.variance(n));
        for (int a = 0; a < 3; ++a) {
            out[3 * n + a] = mu[3 * n + a] + sigma * rng.normal();
        }
    }
    return Configuration(std::move(out), x.n_particles);
}

Configuration transition_sample(const KernelParams& params, const Configuration& x,
                                std::uint64_t seed) {
    RandomStream rng(seed);
    return transition_sample(params, x, rng);
}

std::vector<Configuration> evolve_ensemble(const KernelParams& params,
                                           const std::vector<Configuration>& ensemble,
                                           int steps, std::uint64_t seed) {
    if (ensemble.empty()) throw std::invalid_argument("evolve_ensemble: empty ensemble");
    if (steps < 0) throw std::invalid_argument("evolve_ensemble: negative step count");
    std::vector<Configuration> out = ensemble;
    for (std::size_t i = 0; i < out.size(); ++i) {
        RandomStream rng(seed, static_cast<std::uint64_t>(i));
        for (int s = 0; s < steps; ++s) {
            out[i] = transition_sample(params, out[i], rng);
        }
    }
    return out;
}

MomentReport verify_constraints(const KernelParams& params, const Configuration& x,
                                std::int64_t n_samples, std::uint64_t seed) {
    if (n_samples < 100) {
        throw std::invalid_argument("verify_constraints: need at least 100 samples");
    }
    params.validate();
    const Eigen::Index dim = x.coords.size();
    const Eigen::VectorXd grad = params.drift.gradient(x.coords);
    const Eigen::VectorXd mu = mean_displacement(params, x);

    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim);
    Eigen::VectorXd sum_sq = Eigen::VectorXd::Zero(dim);  // of raw displacement
    RandomStream rng(seed);
    for (std::int64_t s = 0; s < n_samples; ++s) {
        Configuration xp = transition_sample(params, x, rng);
        Eigen::VectorXd dx = xp.coords - x.coords;
        sum += dx;
        sum_sq += dx.cwiseProduct(dx);
    }
    const double inv_n = 1.0 / static_cast<double>(n_samples);

    MomentReport r;
    r.n_samples = n_samples;
    r.mean_displacement = sum * inv_n;
    Eigen::VectorXd second_moment = sum_sq * inv_n;
    r.covariance_diag =
        (second_moment - r.mean_displacement.cwiseProduct(r.mean_displacement)).cwiseMax(0.0);
    r.standard_errors = (r.covariance_diag * inv_n).cwiseSqrt();

    const int N = x.n_particles;
    r.kappa_n.resize(N);
    r.kappa_n_expected.resize(N);
    for (int n = 0; n < N; ++n) {
        r.kappa_n[n] = second_moment.segment(3 * n, 3).sum();
        r.kappa_n_expected[n] = 3.0 * params.variance(n) + mu.segment(3 * n, 3).squaredNorm();
    }
    r.kappa_prime = r.mean_displacement.dot(grad);
    r.kappa_prime_expected = mu.dot(grad);

    bool ok = true;
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (std::abs(r.mean_displacement[i] - mu[i]) > 4.0 * r.standard_errors[i]) ok = false;
    }
    for (int n = 0; n < N; ++n) {
        // Standard error of a sample variance of 3 pooled Gaussian axes.
        double v = params.variance(n);
        double se = 3.0 * v * std::sqrt(2.0 / (3.0 * static_cast<double>(n_samples) - 1.0));
        if (std::abs(r.kappa_n[n] - r.kappa_n_expected[n]) > 4.0 * se) ok = false;
    }
    // kappa' is a linear functional of the mean; its SE follows from the
    // per-component standard errors.
    double se_kp = std::sqrt(grad.cwiseProduct(r.standard_errors).squaredNorm());
    if (std::abs(r.kappa_prime - r.kappa_prime_expected) > 4.0 * se_kp + 1e-15) ok = false;
    r.pass = ok;
    return r;
}

namespace {
std::vector<double> to_vec(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}
}  // namespace

nlohmann::json MomentReport::to_json() const {
    return nlohmann::json{
        {"mean_displacement", to_vec(mean_displacement)},
        {"covariance_diag", to_vec(covariance_diag)},
        {"n_samples", n_samples},
        {"standard_errors", to_vec(standard_errors)},
        {"kappa_n", to_vec(kappa_n)},
        {"kappa_n_expected", to_vec(kappa_n_expected)},
        {"kappa_prime", kappa_prime},
        {"kappa_prime_expected", kappa_prime_expected},
        {"pass", pass},
    };
}

}  // namespace ed
