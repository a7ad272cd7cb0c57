#include "ed/grid.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

namespace ed {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

Grid1D::Grid1D(double xmin, double xmax, int n) : x_min(xmin), x_max(xmax), n_points(n) {
    if (!(x_max > x_min)) throw std::invalid_argument("Grid1D: x_max must exceed x_min");
    if (n_points < 8 || !is_power_of_two(n_points)) {
        throw std::invalid_argument("Grid1D: n_points must be a power of two >= 8");
    }
}

Eigen::VectorXd Grid1D::nodes() const {
    Eigen::VectorXd x(n_points);
    const double h = dx();
    for (int i = 0; i < n_points; ++i) x[i] = x_min + i * h;
    return x;
}

Eigen::VectorXd Grid1D::wavenumbers() const {
    Eigen::VectorXd k(n_points);
    const double dk = kTwoPi / length();
    for (int i = 0; i <= n_points / 2; ++i) k[i] = dk * i;
    for (int i = n_points / 2 + 1; i < n_points; ++i) k[i] = dk * (i - n_points);
    return k;
}

SpectralDerivative::SpectralDerivative(const Grid1D& grid) : grid_(grid) {
    k_ = grid_.wavenumbers();
    k_odd_ = k_;
    k_odd_[grid_.n_points / 2] = 0.0;  // Nyquist has no well-defined sign
}

namespace {
// Eigen::FFT keeps internal plan state; a fresh instance per call keeps
// the class const-callable and thread-safe.
Eigen::VectorXcd fft_fwd(const Eigen::VectorXcd& f) {
    Eigen::FFT<double> fft;
    Eigen::VectorXcd out(f.size());
    fft.fwd(out, f);
    return out;
}

Eigen::VectorXcd fft_inv(const Eigen::VectorXcd& f) {
    Eigen::FFT<double> fft;
    Eigen::VectorXcd out(f.size());
    fft.inv(out, f);
    return out;
}
}  // namespace

Eigen::VectorXcd SpectralDerivative::forward(const Eigen::VectorXcd& f) const { return fft_fwd(f); }
Eigen::VectorXcd SpectralDerivative::inverse(const Eigen::VectorXcd& f) const { return fft_inv(f); }

Eigen::VectorXd SpectralDerivative::first(const Eigen::VectorXd& f) const {
    if (f.size() != grid_.n_points) throw std::invalid_argument("SpectralDerivative: size mismatch");
    Eigen::VectorXcd fk = fft_fwd(f.cast<std::complex<double>>());
    for (int i = 0; i < grid_.n_points; ++i) fk[i] *= std::complex<double>(0.0, k_odd_[i]);
    return fft_inv(fk).real();
}

Eigen::VectorXd SpectralDerivative::second(const Eigen::VectorXd& f) const {
    if (f.size() != grid_.n_points) throw std::invalid_argument("SpectralDerivative: size mismatch");
    Eigen::VectorXcd fk = fft_fwd(f.cast<std::complex<double>>());
    for (int i = 0; i < grid_.n_points; ++i) fk[i] *= -k_[i] * k_[i];
    return fft_inv(fk).real();
}

Eigen::VectorXd SpectralDerivative::smooth(const Eigen::VectorXd& f) const {
    if (f.size() != grid_.n_points) throw std::invalid_argument("SpectralDerivative: size mismatch");
    const double k_max = k_[grid_.n_points / 2];
    Eigen::VectorXcd fk = fft_fwd(f.cast<std::complex<double>>());
    for (int i = 0; i < grid_.n_points; ++i) {
        double r = std::abs(k_[i]) / k_max;
        double r2 = r * r;
        double r16 = r2 * r2;          // r^4
        r16 = r16 * r16 * r16 * r16;   // r^16
        fk[i] *= std::exp(-36.0 * r16);
    }
    return fft_inv(fk).real();
}

Eigen::VectorXd SpectralDerivative::phase_gradient(const Eigen::VectorXd& f, double scale) const {
    if (f.size() != grid_.n_points) throw std::invalid_argument("SpectralDerivative: size mismatch");
    Eigen::VectorXcd u(f.size());
    for (int i = 0; i < grid_.n_points; ++i) {
        u[i] = std::polar(1.0, f[i] / scale);
    }
    Eigen::VectorXcd uk = fft_fwd(u);
    for (int i = 0; i < grid_.n_points; ++i) uk[i] *= std::complex<double>(0.0, k_odd_[i]);
    Eigen::VectorXcd du = fft_inv(uk);
    Eigen::VectorXd out(f.size());
    for (int i = 0; i < grid_.n_points; ++i) {
        out[i] = scale * (std::conj(u[i]) * du[i]).imag();
    }
    return out;
}

}  // namespace ed
