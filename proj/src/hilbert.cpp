#include "ed/hilbert.hpp"

#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ed {

StateVector::StateVector(Eigen::VectorXcd a) : amplitudes(std::move(a)) {
    if (std::abs(amplitudes.squaredNorm() - 1.0) > 1e-12) {
        throw std::invalid_argument("StateVector: not normalized within 1e-12");
    }
}

StateVector StateVector::normalized(Eigen::VectorXcd raw) {
    double n = raw.norm();
    if (!(n > 0.0)) throw std::invalid_argument("StateVector: zero vector");
    return StateVector(raw / n);
}

StateVector StateVector::basis_state(int dim, int index) {
    if (index < 0 || index >= dim) throw std::invalid_argument("StateVector: index out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v[index] = 1.0;
    return StateVector(std::move(v));
}

void fix_eigenvector_phases(Eigen::MatrixXcd& vectors) {
    for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
        for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
            std::complex<double> v = vectors(r, c);
            if (std::abs(v) > 1e-12) {
                vectors.col(c) *= std::conj(v) / std::abs(v);
                break;
            }
        }
    }
}

HermitianOperator::HermitianOperator(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument("HermitianOperator: matrix must be square and nonempty");
    }
    hermiticity_deviation_ = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (hermiticity_deviation_ > 1e-8) {
        throw std::invalid_argument("HermitianOperator: matrix is not Hermitian (deviation " +
                                    std::to_string(hermiticity_deviation_) + ")");
    }
    matrix_ = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("HermitianOperator: eigendecomposition failed");
    }
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
    fix_eigenvector_phases(eigenvectors_);
}

PointerDevice PointerDevice::for_basis(Eigen::MatrixXcd basis, std::vector<std::string> cells) {
    const Eigen::Index d = basis.rows();
    if (basis.cols() != d) throw std::invalid_argument("PointerDevice: basis must be square");
    if (cells.size() != static_cast<std::size_t>(d)) {
        throw std::invalid_argument("PointerDevice: need one cell label per basis vector");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
            if (cells[i] == cells[j]) {
                throw std::invalid_argument("PointerDevice: pointer cells must be distinct ('" +
                                            cells[i] + "' repeated)");
            }
        }
    }
    PointerDevice dev;
    dev.unitary = basis.adjoint();
    if ((dev.unitary * dev.unitary.adjoint() - Eigen::MatrixXcd::Identity(d, d))
            .cwiseAbs()
            .maxCoeff() > 1e-12) {
        throw std::invalid_argument("PointerDevice: source basis is not orthonormal");
    }
    dev.source_basis = std::move(basis);
    dev.pointer_cells = std::move(cells);
    return dev;
}

PointerDevice PointerDevice::for_operator(const HermitianOperator& op) {
    std::vector<std::string> cells(op.dim());
    for (int i = 0; i < op.dim(); ++i) cells[i] = "x" + std::to_string(i);
    return for_basis(op.eigenvectors(), std::move(cells));
}

Likelihood::Likelihood(std::vector<std::string> d, std::vector<std::string> x, Eigen::MatrixXd t)
    : outcomes(std::move(d)), cells(std::move(x)), table(std::move(t)) {
    if (outcomes.size() != static_cast<std::size_t>(table.rows()) ||
        cells.size() != static_cast<std::size_t>(table.cols())) {
        throw std::invalid_argument("Likelihood: label/table shape mismatch");
    }
    if ((table.array() < -1e-15).any()) {
        throw std::invalid_argument("Likelihood: negative entry");
    }
    for (Eigen::Index c = 0; c < table.cols(); ++c) {
        if (std::abs(table.col(c).sum() - 1.0) > 1e-12) {
            throw std::invalid_argument("Likelihood: column '" + cells[c] +
                                        "' is not normalized");
        }
    }
}

Likelihood Likelihood::identity(std::vector<std::string> cells) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Identity(cells.size(), cells.size());
    return Likelihood(cells, cells, std::move(t));
}

Likelihood Likelihood::uniform(std::vector<std::string> outcomes,
                               std::vector<std::string> cells) {
    Eigen::MatrixXd t =
        Eigen::MatrixXd::Constant(outcomes.size(), cells.size(), 1.0 / outcomes.size());
    return Likelihood(std::move(outcomes), std::move(cells), std::move(t));
}

DiscreteDistribution born_probabilities(const StateVector& state, const HermitianOperator& op) {
    if (state.dim() != op.dim()) {
        throw std::invalid_argument("born_probabilities: dimension mismatch");
    }
    // Group by eigenvalue (ascending order is guaranteed by the solver).
    std::vector<double> values;
    std::vector<double> probs;
    for (int i = 0; i < op.dim(); ++i) {
        double p = std::norm(op.eigenvectors().col(i).dot(state.amplitudes));
        if (!values.empty() && std::abs(op.eigenvalues()[i] - values.back()) <= 1e-10) {
            probs.back() += p;
        } else {
            values.push_back(op.eigenvalues()[i]);
            probs.push_back(p);
        }
    }
    Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(values.data(), values.size());
    Eigen::VectorXd p = Eigen::Map<Eigen::VectorXd>(probs.data(), probs.size());
    p /= p.sum();
    return DiscreteDistribution::over_values(v, std::move(p));
}

DiscreteDistribution apply_device(const StateVector& state, const PointerDevice& device) {
    if (state.dim() != device.dim()) {
        throw std::invalid_argument("apply_device: dimension mismatch");
    }
    Eigen::VectorXcd pointer = device.unitary * state.amplitudes;
    Eigen::VectorXd p = pointer.cwiseAbs2();
    p /= p.sum();
    return DiscreteDistribution(device.pointer_cells, std::move(p));
}

DiscreteDistribution detection_update(const DiscreteDistribution& prior, const Likelihood& like,
                                      const std::string& outcome) {
    if (prior.labels != like.cells) {
        throw std::invalid_argument("detection_update: prior support must match likelihood cells");
    }
    auto it = std::find(like.outcomes.begin(), like.outcomes.end(), outcome);
    if (it == like.outcomes.end()) {
        throw std::invalid_argument("detection_update: unknown outcome '" + outcome + "'");
    }
    Eigen::Index row = it - like.outcomes.begin();
    Eigen::VectorXd post = prior.probs.cwiseProduct(like.table.row(row).transpose());
    double evidence = post.sum();
    if (!(evidence > 0.0)) {
        throw std::runtime_error("detection_update: outcome '" + outcome +
                                 "' has zero probability under the prior (impossible data)");
    }
    return DiscreteDistribution(prior.labels, post / evidence);
}

InferenceReport infer_observable(const std::vector<std::string>& detections,
                                 const PointerDevice& device, const Eigen::VectorXd& scalars,
                                 const Likelihood& like) {
    if (detections.empty()) throw std::invalid_argument("infer_observable: no detections");
    if (scalars.size() != device.dim()) {
        throw std::invalid_argument("infer_observable: one scalar per pointer cell required");
    }
    DiscreteDistribution prior(
        device.pointer_cells,
        Eigen::VectorXd::Constant(device.dim(), 1.0 / device.dim()));

    InferenceReport report;
    Eigen::VectorXd pooled = Eigen::VectorXd::Zero(device.dim());
    double value = 0.0;
    for (const auto& d : detections) {
        DiscreteDistribution post = detection_update(prior, like, d);
        value += post.mean_of(scalars);
        pooled += post.probs;
        report.per_detection.push_back(std::move(post));
    }
    pooled /= static_cast<double>(detections.size());
    report.pooled = DiscreteDistribution(device.pointer_cells, std::move(pooled));
    report.inferred_value = value / static_cast<double>(detections.size());
    return report;
}

nlohmann::json InferenceReport::to_json() const {
    nlohmann::json per = nlohmann::json::array();
    for (const auto& p : per_detection) per.push_back(p.to_json());
    return nlohmann::json{{"per_detection", per},
                          {"pooled", pooled.to_json()},
                          {"inferred_value", inferred_value}};
}

std::complex<double> weak_value(const StateVector& pre, const StateVector& post,
                                const HermitianOperator& op) {
    if (pre.dim() != op.dim() || post.dim() != op.dim()) {
        throw std::invalid_argument("weak_value: dimension mismatch");
    }
    std::complex<double> overlap = post.amplitudes.dot(pre.amplitudes);
    if (std::abs(overlap) <= 1e-12) {
        throw std::runtime_error("weak_value: pre/post selection states are orthogonal");
    }
    std::complex<double> numerator = post.amplitudes.dot(op.matrix() * pre.amplitudes);
    return numerator / overlap;
}

Eigen::MatrixXcd complex_matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix JSON must be an array");
    const std::size_t rows = j.size();
    const std::size_t cols = j.at(0).size();
    Eigen::MatrixXcd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        if (j.at(r).size() != cols) throw std::invalid_argument("matrix JSON rows ragged");
        for (std::size_t c = 0; c < cols; ++c) {
            const auto& e = j.at(r).at(c);
            if (e.is_number()) {
                m(r, c) = e.get<double>();
            } else if (e.is_array() && e.size() == 2) {
                m(r, c) = std::complex<double>(e.at(0).get<double>(), e.at(1).get<double>());
            } else {
                throw std::invalid_argument("matrix entry must be a number or [re, im]");
            }
        }
    }
    return m;
}

HermitianOperator operator_from_json(const nlohmann::json& j) {
    return HermitianOperator(complex_matrix_from_json(j));
}

StateVector state_from_json(const nlohmann::json& j) {
    // A state is a flat list of amplitudes, each a number or [re, im].
    if (!j.is_array() || j.empty()) throw std::invalid_argument("state JSON must be an array");
    Eigen::VectorXcd v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& e = j.at(i);
        if (e.is_number()) {
            v[i] = e.get<double>();
        } else if (e.is_array() && e.size() == 2) {
            v[i] = std::complex<double>(e.at(0).get<double>(), e.at(1).get<double>());
        } else {
            throw std::invalid_argument("state amplitude must be a number or [re, im]");
        }
    }
    return StateVector::normalized(std::move(v));
}

}  // namespace ed
