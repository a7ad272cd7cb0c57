#ifndef ED_HILBERT_HPP
#define ED_HILBERT_HPP

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "ed/distribution.hpp"

namespace ed {

/// Finite-dimensional normalized state.
struct StateVector {
    Eigen::VectorXcd amplitudes;

    StateVector() = default;
    explicit StateVector(Eigen::VectorXcd a);  // requires unit norm to 1e-12
    static StateVector normalized(Eigen::VectorXcd raw);
    static StateVector basis_state(int dim, int index);

    int dim() const { return static_cast<int>(amplitudes.size()); }
};

/// Hermitian operator with an eager, deterministically ordered
/// eigendecomposition: eigenvalues ascending, each eigenvector's first
/// component of magnitude > 1e-12 made real positive.
class HermitianOperator {
public:
    /// Symmetrizes the input as (A + A^dagger)/2 and records the deviation.
    explicit HermitianOperator(const Eigen::MatrixXcd& m);

    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXcd& eigenvectors() const { return eigenvectors_; }  // columns
    double hermiticity_deviation() const { return hermiticity_deviation_; }
    int dim() const { return static_cast<int>(matrix_.rows()); }

private:
    Eigen::MatrixXcd matrix_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXcd eigenvectors_;
    double hermiticity_deviation_ = 0.0;
};

/// Applies the deterministic phase convention to each column in place.
void fix_eigenvector_phases(Eigen::MatrixXcd& vectors);

/// Unitary measurement device mapping a source basis to distinct pointer
/// cells: U = sum_i |i><a_i|.
struct PointerDevice {
    Eigen::MatrixXcd source_basis;          // columns |a_i>
    std::vector<std::string> pointer_cells;  // distinct labels
    Eigen::MatrixXcd unitary;

    static PointerDevice for_basis(Eigen::MatrixXcd basis, std::vector<std::string> cells);
    /// Device reading out the eigenbasis of op, cells labeled x0..x{d-1}.
    static PointerDevice for_operator(const HermitianOperator& op);

    int dim() const { return static_cast<int>(unitary.rows()); }
};

/// Column-stochastic detection model q(D | x).
struct Likelihood {
    std::vector<std::string> outcomes;  // rows, D
    std::vector<std::string> cells;     // columns, x
    Eigen::MatrixXd table;

    Likelihood() = default;
    Likelihood(std::vector<std::string> d, std::vector<std::string> x, Eigen::MatrixXd t);
    /// q(D|x) = delta_{D,x} over the given cells.
    static Likelihood identity(std::vector<std::string> cells);
    static Likelihood uniform(std::vector<std::string> outcomes, std::vector<std::string> cells);
};

/// Born probabilities over the eigenvalues of op, degenerate eigenvalues
/// aggregated (grouped at 1e-10).
DiscreteDistribution born_probabilities(const StateVector& state, const HermitianOperator& op);

/// Pointer-cell distribution |<a_i|psi>|^2 realized by applying the unitary.
DiscreteDistribution apply_device(const StateVector& state, const PointerDevice& device);

/// Bayes update of a prior over cells given detection outcome D.
DiscreteDistribution detection_update(const DiscreteDistribution& prior, const Likelihood& like,
                                      const std::string& outcome);

struct InferenceReport {
    std::vector<DiscreteDistribution> per_detection;  // posterior over cells
    DiscreteDistribution pooled;                      // average posterior mass per cell
    double inferred_value = 0.0;                      // pooled posterior mean of lambda
    nlohmann::json to_json() const;
};

/// Per-detection Bayesian posteriors from a uniform prior over pointer
/// cells; `scalars` are the inferable eigenvalues lambda attached to cells.
InferenceReport infer_observable(const std::vector<std::string>& detections,
                                 const PointerDevice& device, const Eigen::VectorXd& scalars,
                                 const Likelihood& like);

/// <post| op |pre> / <post|pre>; throws when the overlap magnitude
/// is at or below 1e-12.
std::complex<double> weak_value(const StateVector& pre, const StateVector& post,
                                const HermitianOperator& op);

// JSON descriptions: complex entries are [re, im] pairs.
HermitianOperator operator_from_json(const nlohmann::json& j);
StateVector state_from_json(const nlohmann::json& j);
Eigen::MatrixXcd complex_matrix_from_json(const nlohmann::json& j);

}  // namespace ed

#endif
