#include <doctest.h>

#include <cmath>

#include "ed/grid.hpp"

using namespace ed;

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid1D(0.0, 1.0, 7), std::invalid_argument);
    CHECK_THROWS_AS(Grid1D(0.0, 1.0, 48), std::invalid_argument);
    CHECK_THROWS_AS(Grid1D(1.0, 0.0, 64), std::invalid_argument);
    Grid1D g(-2.0, 2.0, 64);
    CHECK(g.dx() == doctest::Approx(4.0 / 64));
    CHECK(g.nodes()[0] == -2.0);
    CHECK(g.nodes()[63] == doctest::Approx(2.0 - g.dx()));
}

TEST_CASE("spectral first derivative of a smooth periodic function") {
    Grid1D g(0.0, 2.0 * M_PI, 128);
    SpectralDerivative der(g);
    Eigen::VectorXd x = g.nodes();
    Eigen::VectorXd f = x.array().sin();
    Eigen::VectorXd df = der.first(f);
    for (int i = 0; i < g.n_points; ++i) {
        CHECK(df[i] == doctest::Approx(std::cos(x[i])).epsilon(1e-10));
    }
}

TEST_CASE("spectral second derivative") {
    Grid1D g(0.0, 2.0 * M_PI, 128);
    SpectralDerivative der(g);
    Eigen::VectorXd x = g.nodes();
    Eigen::VectorXd f = (2.0 * x).array().cos();
    Eigen::VectorXd d2f = der.second(f);
    for (int i = 0; i < g.n_points; ++i) {
        CHECK(d2f[i] == doctest::Approx(-4.0 * std::cos(2.0 * x[i])).epsilon(1e-9));
    }
}

TEST_CASE("phase gradient handles winding linear phases exactly") {
    Grid1D g(-4.0, 4.0, 64);
    SpectralDerivative der(g);
    // slope commensurate with the box: 3 full windings for scale 1
    double p = 3.0 * 2.0 * M_PI / g.length();
    Eigen::VectorXd phi = p * g.nodes();
    Eigen::VectorXd grad = der.phase_gradient(phi, 1.0);
    for (int i = 0; i < g.n_points; ++i) {
        CHECK(grad[i] == doctest::Approx(p).epsilon(1e-10));
    }
}

TEST_CASE("phase gradient matches plain derivative for smooth periodic phase") {
    Grid1D g(0.0, 2.0 * M_PI, 256);
    SpectralDerivative der(g);
    Eigen::VectorXd phi = g.nodes().array().sin();
    Eigen::VectorXd a = der.phase_gradient(phi, 1.0);
    Eigen::VectorXd b = der.first(phi);
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-8);
}
