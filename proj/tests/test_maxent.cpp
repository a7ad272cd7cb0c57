#include <doctest.h>

#include <cmath>

#include "ed/maxent.hpp"
#include "ed/random.hpp"

using namespace ed;

namespace {

// 1 particle, drift phi = k * x along axis 0 only.
KernelParams linear_params(double k, double mass, double eta, double dt) {
    KernelParams p;
    p.masses = Eigen::VectorXd::Constant(1, mass);
    p.eta = eta;
    p.dt = dt;
    Eigen::VectorXd kvec = Eigen::VectorXd::Zero(3);
    kvec[0] = k;
    p.drift = DriftField::linear(kvec);
    return p;
}

Configuration config1d(double x) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(3);
    c[0] = x;
    return Configuration(c, 1);
}

}  // namespace

TEST_CASE("mean displacement vanishes for constant drift") {
    KernelParams p;
    p.masses = Eigen::VectorXd::Constant(2, 1.5);
    p.eta = 0.7;
    p.dt = 0.3;
    p.drift = DriftField::constant();
    Configuration x(Eigen::VectorXd::Random(6), 2);
    CHECK(mean_displacement(p, x).norm() == doctest::Approx(0.0));
}

TEST_CASE("mean displacement for linear drift: (eta dt / m) k") {
    // k = 2, m = 1, eta = 1, dt = 0.1 -> 0.2
    auto p = linear_params(2.0, 1.0, 1.0, 0.1);
    Eigen::VectorXd mu = mean_displacement(p, config1d(0.0));
    CHECK(mu[0] == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(mu[1] == 0.0);
    CHECK(mu[2] == 0.0);
}

TEST_CASE("mean displacement for quadratic drift phi = x^2 at x = 3") {
    // m = 2, eta = 1, dt = 0.5: (1 * 0.5 / 2) * 6 = 1.5
    KernelParams p;
    p.masses = Eigen::VectorXd::Constant(1, 2.0);
    p.eta = 1.0;
    p.dt = 0.5;
    Eigen::VectorXd w = Eigen::VectorXd::Zero(3);
    w[0] = 1.0;
    p.drift = DriftField::quadratic(w);
    CHECK(mean_displacement(p, config1d(3.0))[0] == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("non-finite drift gradient is reported with its component") {
    KernelParams p = linear_params(1.0, 1.0, 1.0, 0.1);
    p.drift.gradient = [](const Eigen::VectorXd& x) {
        Eigen::VectorXd g = Eigen::VectorXd::Zero(x.size());
        g[1] = std::numeric_limits<double>::infinity();
        return g;
    };
    CHECK_THROWS_WITH_AS(mean_displacement(p, config1d(0.0)),
                         doctest::Contains("index 1"), std::runtime_error);
}

TEST_CASE("logpdf peak value and symmetry") {
    auto p = linear_params(0.0, 2.0, 1.0, 0.5);  // variance 0.25 per axis
    double v = p.variance(0);
    Configuration x = config1d(1.0);

    // At the mean, each axis contributes -0.5 log(2 pi v).
    double peak = transition_logpdf(p, x, x);
    CHECK(peak == doctest::Approx(3.0 * -0.5 * std::log(2.0 * M_PI * v)).epsilon(1e-14));

    Configuration left = config1d(1.0 - 0.37);
    Configuration right = config1d(1.0 + 0.37);
    CHECK(transition_logpdf(p, x, left) ==
          doctest::Approx(transition_logpdf(p, x, right)).epsilon(1e-14));
}

TEST_CASE("logpdf is a normalized density (quadrature oracle)") {
    auto p = linear_params(1.3, 0.8, 1.2, 0.05);
    Configuration x = config1d(0.4);
    double v = p.variance(0);
    Eigen::VectorXd mu = x.coords + mean_displacement(p, x);

    // Quadrature along axis 0 with axes 1, 2 pinned at their means; the
    // pinned axes contribute a factor (2 pi v)^-1 that is divided out.
    const int n = 4000;
    const double half_width = 10.0 * std::sqrt(v);
    const double h = 2.0 * half_width / n;
    double integral = 0.0;
    for (int i = 0; i <= n; ++i) {
        Eigen::VectorXd c = mu;
        c[0] = mu[0] - half_width + i * h;
        double w = (i == 0 || i == n) ? 0.5 : 1.0;
        integral += w * std::exp(transition_logpdf(p, x, Configuration(c, 1)));
    }
    integral *= h * (2.0 * M_PI * v);
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("dimension mismatch is rejected") {
    auto p = linear_params(0.0, 1.0, 1.0, 0.1);
    Configuration x = config1d(0.0);
    Configuration y(Eigen::VectorXd::Zero(6), 2);
    CHECK_THROWS_AS(transition_logpdf(p, x, y), std::invalid_argument);
}

TEST_CASE("sampling is deterministic under a fixed seed") {
    auto p = linear_params(1.0, 1.0, 1.0, 0.1);
    Configuration x = config1d(0.2);
    Configuration a = transition_sample(p, x, 42u);
    Configuration b = transition_sample(p, x, 42u);
    CHECK(a.coords == b.coords);
    Configuration c = transition_sample(p, x, 43u);
    CHECK(a.coords != c.coords);
}

TEST_CASE("dt -> 0 collapses samples onto x") {
    Configuration x = config1d(1.0);
    double spread_prev = 1e300;
    for (double dt : {1e-2, 1e-4, 1e-6, 1e-8}) {
        auto p = linear_params(1.0, 1.0, 1.0, dt);
        double spread = (transition_sample(p, x, 7u).coords - x.coords).norm();
        CHECK(spread < spread_prev);
        spread_prev = spread;
    }
    CHECK(spread_prev < 1e-3);
}

TEST_CASE("empirical mean within 4 standard errors over several seeds") {
    auto p = linear_params(2.0, 1.0, 1.0, 0.01);
    Configuration x = config1d(0.0);
    Eigen::VectorXd mu = mean_displacement(p, x);
    const int n = 100000;
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        RandomStream rng(seed);
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(3);
        for (int i = 0; i < n; ++i) {
            sum += transition_sample(p, x, rng).coords - x.coords;
        }
        Eigen::VectorXd mean = sum / n;
        double se = std::sqrt(p.variance(0) / n);
        for (int a = 0; a < 3; ++a) {
            CHECK(std::abs(mean[a] - mu[a]) < 4.0 * se);
        }
    }
}

TEST_CASE("evolve_ensemble: zero steps is the identity") {
    auto p = linear_params(1.0, 1.0, 1.0, 0.1);
    std::vector<Configuration> ensemble{config1d(0.0), config1d(1.0)};
    auto out = evolve_ensemble(p, ensemble, 0, 5u);
    REQUIRE(out.size() == 2);
    CHECK(out[0].coords == ensemble[0].coords);
    CHECK(out[1].coords == ensemble[1].coords);
}

TEST_CASE("evolve_ensemble: zero drift variance grows additively") {
    auto p = linear_params(0.0, 1.0, 1.0, 0.02);
    const int members = 20000;
    const int steps = 5;
    std::vector<Configuration> ensemble(members, config1d(0.0));
    auto out = evolve_ensemble(p, ensemble, steps, 11u);
    double var = 0.0;
    for (const auto& c : out) var += c.coords[0] * c.coords[0];
    var /= members;
    double expected = steps * p.variance(0);
    // 4 sigma for a chi^2 variance estimate
    double se = expected * std::sqrt(2.0 / (members - 1));
    CHECK(std::abs(var - expected) < 4.0 * se);
}

TEST_CASE("one step from a point matches the transition density histogram") {
    auto p = linear_params(1.0, 1.0, 1.0, 0.05);
    Configuration x0 = config1d(0.0);
    const int members = 50000;
    auto out = evolve_ensemble(p, std::vector<Configuration>(members, x0), 1, 3u);

    double v = p.variance(0);
    double mu = x0.coords[0] + mean_displacement(p, x0)[0];
    const int bins = 20;
    const double lo = mu - 4.0 * std::sqrt(v), hi = mu + 4.0 * std::sqrt(v);
    const double w = (hi - lo) / bins;
    std::vector<int> counts(bins, 0);
    for (const auto& c : out) {
        int b = static_cast<int>((c.coords[0] - lo) / w);
        if (b >= 0 && b < bins) ++counts[b];
    }
    for (int b = 0; b < bins; ++b) {
        double center = lo + (b + 0.5) * w;
        double expected =
            members * w * std::exp(-0.5 * (center - mu) * (center - mu) / v) /
            std::sqrt(2.0 * M_PI * v);
        double sigma = std::sqrt(std::max(expected, 1.0));
        CHECK(std::abs(counts[b] - expected) < 6.0 * sigma + 6.0);
    }
}

TEST_CASE("verify_constraints: variance and kappa' against analytic values") {
    SUBCASE("zero drift, kappa' consistent with 0") {
        auto p = linear_params(0.0, 1.0, 1.0, 0.01);
        MomentReport r = verify_constraints(p, config1d(0.0), 20000, 1u);
        CHECK(r.pass);
        CHECK(std::abs(r.kappa_prime) < 1e-10);
        for (int a = 0; a < 3; ++a) {
            CHECK(r.covariance_diag[a] == doctest::Approx(0.01).epsilon(0.05));
        }
    }
    SUBCASE("linear drift, kappa' near (eta dt / m) k^2") {
        double k = 3.0;
        auto p = linear_params(k, 2.0, 1.0, 0.02);
        MomentReport r = verify_constraints(p, config1d(0.0), 50000, 2u);
        CHECK(r.pass);
        double expected = p.eta * p.dt / p.masses[0] * k * k;
        CHECK(r.kappa_prime_expected == doctest::Approx(expected).epsilon(1e-12));
        CHECK(r.kappa_prime == doctest::Approx(expected).epsilon(0.05));
    }
    SUBCASE("too few samples rejected") {
        auto p = linear_params(0.0, 1.0, 1.0, 0.01);
        CHECK_THROWS_AS(verify_constraints(p, config1d(0.0), 99, 1u), std::invalid_argument);
    }
}

TEST_CASE("continuity: ensembles approach the start as dt shrinks") {
    // Total-variation estimate between the delta start and the one-step
    // ensemble via a fixed histogram; must decrease monotonically in dt.
    Configuration x0 = config1d(0.0);
    const int members = 20000;
    const int bins = 41;
    const double lo = -1.0, hi = 1.0, w = (hi - lo) / bins;
    auto tv_against_delta = [&](double dt) {
        auto p = linear_params(1.0, 1.0, 1.0, dt);
        auto out = evolve_ensemble(p, std::vector<Configuration>(members, x0), 1, 17u);
        std::vector<double> hist(bins, 0.0);
        for (const auto& c : out) {
            int b = static_cast<int>((c.coords[0] - lo) / w);
            if (b >= 0 && b < bins) hist[b] += 1.0 / members;
        }
        double tv = 0.0;
        int delta_bin = static_cast<int>((0.0 - lo) / w);
        for (int b = 0; b < bins; ++b) {
            tv += 0.5 * std::abs(hist[b] - (b == delta_bin ? 1.0 : 0.0));
        }
        return tv;
    };
    double prev = 2.0;
    for (double dt : {0.2, 0.01, 1e-3, 1e-5}) {
        double tv = tv_against_delta(dt);
        CHECK(tv < prev);
        prev = tv;
    }
    CHECK(prev < 0.05);
}
