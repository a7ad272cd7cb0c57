#ifndef ED_GRID_HPP
#define ED_GRID_HPP

#include <complex>

#include <Eigen/Dense>

namespace ed {

/// Uniform periodic 1D grid. n_points must be a power of two (>= 8) so the
/// spectral reference solver can be used on the same nodes.
struct Grid1D {
    double x_min = 0.0;
    double x_max = 1.0;
    int n_points = 0;

    Grid1D() = default;
    Grid1D(double xmin, double xmax, int n);

    double length() const { return x_max - x_min; }
    double dx() const { return length() / n_points; }

    /// Node coordinates x_min + i*dx (x_max excluded, periodic wrap).
    Eigen::VectorXd nodes() const;

    /// Angular wavenumbers in FFT ordering: 0, 1, ..., n/2, -n/2+1, ..., -1
    /// times 2*pi/L.
    Eigen::VectorXd wavenumbers() const;

    bool operator==(const Grid1D& o) const {
        return x_min == o.x_min && x_max == o.x_max && n_points == o.n_points;
    }
};

/// Spectral (FFT) derivatives on a periodic grid.
class SpectralDerivative {
public:
    explicit SpectralDerivative(const Grid1D& grid);

    /// d/dx, with the Nyquist mode zeroed (odd derivative).
    Eigen::VectorXd first(const Eigen::VectorXd& f) const;
    /// d^2/dx^2.
    Eigen::VectorXd second(const Eigen::VectorXd& f) const;

    Eigen::VectorXcd forward(const Eigen::VectorXcd& f) const;
    Eigen::VectorXcd inverse(const Eigen::VectorXcd& f) const;

    /// Exponential low-pass filter exp(-36 (|k|/k_max)^16): ~e^-36 at the
    /// Nyquist mode, > 0.999 below 0.6 k_max. Keeps sawtooth/aliasing noise
    /// from accumulating over many time steps; mass (k = 0) is untouched.
    Eigen::VectorXd smooth(const Eigen::VectorXd& f) const;

    /// Derivative of a real phase field taken through the unit complex
    /// factor exp(i*f/scale): returns scale * Im(conj(u) u') with u =
    /// exp(i f / scale). Equal to f' for smooth periodic f, and exact for
    /// linear (winding) phases commensurate with the grid. Requires the
    /// per-node phase increment |f'|*dx/scale < pi.
    Eigen::VectorXd phase_gradient(const Eigen::VectorXd& f, double scale) const;

    const Grid1D& grid() const { return grid_; }

private:
    Grid1D grid_;
    Eigen::VectorXd k_;      // full wavenumbers
    Eigen::VectorXd k_odd_;  // Nyquist zeroed
};

}  // namespace ed

#endif
