#include "ed/valuation.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ed {

namespace {

// Context signs in table order; shared by the search and the certificate.
struct ContextConstraint {
    std::string name;
    std::vector<int> cells;
    int sign;
};

std::vector<ContextConstraint> constraints_of(const ObservableTable& table) {
    std::vector<ContextConstraint> out;
    auto products = context_products(table);
    for (std::size_t i = 0; i < products.size(); ++i) {
        out.push_back(
            ContextConstraint{products[i].context, table.contexts()[i].cells, products[i].sign});
    }
    return out;
}

long count_satisfying(int n_cells, const std::vector<ContextConstraint>& constraints,
                      std::vector<Valuation>* collect) {
    long count = 0;
    const long total = 1L << n_cells;
    for (long mask = 0; mask < total; ++mask) {
        bool ok = true;
        for (const auto& ctx : constraints) {
            int prod = 1;
            for (int c : ctx.cells) {
                if (mask & (1L << c)) prod = -prod;
            }
            if (prod != ctx.sign) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        ++count;
        if (collect) {
            Valuation v;
            v.values.resize(n_cells);
            for (int c = 0; c < n_cells; ++c) v.values[c] = (mask & (1L << c)) ? -1 : +1;
            collect->push_back(std::move(v));
        }
    }
    return count;
}

}  // namespace

ValuationSearchResult valuation_search(const ObservableTable& table) {
    const int n = table.n_cells();
    if (n > 20) {
        throw std::invalid_argument("valuation_search: enumeration bound (20 cells) exceeded");
    }
    auto constraints = constraints_of(table);

    ValuationSearchResult result;
    result.total = 1L << n;
    count_satisfying(n, constraints, &result.satisfying);
    for (std::size_t drop = 0; drop < constraints.size(); ++drop) {
        std::vector<ContextConstraint> relaxed;
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            if (i != drop) relaxed.push_back(constraints[i]);
        }
        result.dropped_context_counts.emplace_back(constraints[drop].name,
                                                   count_satisfying(n, relaxed, nullptr));
    }
    return result;
}

ParityCertificate parity_certificate(const ObservableTable& table) {
    std::vector<int> membership(table.n_cells(), 0);
    for (const auto& ctx : table.contexts()) {
        for (int c : ctx.cells) ++membership[c];
    }
    for (int c = 0; c < table.n_cells(); ++c) {
        if (membership[c] % 2 != 0) {
            throw std::invalid_argument("parity_certificate: cell " + table.cells()[c].str() +
                                        " sits in an odd number of contexts; not a parity proof");
        }
    }
    ParityCertificate cert;
    cert.context_sign_product = grand_product_sign(context_products(table));
    cert.forced_square_product = +1;
    cert.contradiction = cert.context_sign_product == -1;
    cert.verdict = cert.contradiction ? "contradiction" : "consistent";
    return cert;
}

double position_valuation(const Eigen::MatrixXcd& op, int x0) {
    if (x0 < 0 || x0 >= op.rows()) {
        throw std::out_of_range("position_valuation: basis index out of range");
    }
    return op(x0, x0).real();
}

double position_valuation(const HermitianOperator& op, int x0) {
    return position_valuation(op.matrix(), x0);
}

PositionValuationReport hybrid_check(const ObservableTable& table, int x0) {
    if (table.n_qubits() > 3) {
        throw std::invalid_argument("hybrid_check: matrix form limited to 3 qubits");
    }
    const int dim = 1 << table.n_qubits();
    if (x0 < 0 || x0 >= dim) throw std::out_of_range("hybrid_check: basis index out of range");

    PositionValuationReport report;
    report.x0 = x0;
    report.cell_values.resize(table.rows(), table.cols());
    double square_product = 1.0;
    for (int i = 0; i < table.rows(); ++i) {
        for (int j = 0; j < table.cols(); ++j) {
            double v = position_valuation(table.at(i, j).to_matrix(), x0);
            report.cell_values(i, j) = v;
            square_product *= v * v;
        }
    }

    bool any_violation = false;
    double grand = 1.0;
    for (const auto& ctx : table.contexts()) {
        Eigen::MatrixXcd chain = Eigen::MatrixXcd::Identity(dim, dim);
        double member_product = 1.0;
        for (int c : ctx.cells) {
            chain = chain * table.cells()[c].to_matrix();
            member_product *= position_valuation(table.cells()[c].to_matrix(), x0);
        }
        double ctx_value = position_valuation(chain, x0);
        bool holds = std::abs(ctx_value - member_product) <= 1e-12;
        if (!holds) any_violation = true;
        report.context_names.push_back(ctx.name);
        report.context_values.push_back(ctx_value);
        report.context_member_products.push_back(member_product);
        report.product_relation_holds.push_back(holds);
        grand *= ctx_value;
    }
    report.grand_context_product = grand;
    report.grand_cell_square_product = square_product;
    report.functional_relation_fails = any_violation;
    return report;
}

Eigen::MatrixXcd joint_eigenbasis(const std::vector<Eigen::MatrixXcd>& ops) {
    if (ops.empty()) throw std::invalid_argument("joint_eigenbasis: no operators");
    const Eigen::Index dim = ops.front().rows();
    // Subspace blocks, refined one operator at a time.
    std::vector<Eigen::MatrixXcd> blocks{Eigen::MatrixXcd::Identity(dim, dim)};
    for (const auto& op : ops) {
        if (op.rows() != dim || op.cols() != dim) {
            throw std::invalid_argument("joint_eigenbasis: dimension mismatch");
        }
        std::vector<Eigen::MatrixXcd> refined;
        for (const auto& block : blocks) {
            Eigen::MatrixXcd restricted = block.adjoint() * op * block;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(restricted);
            if (solver.info() != Eigen::Success) {
                throw std::runtime_error("joint_eigenbasis: eigendecomposition failed");
            }
            const Eigen::VectorXd& evs = solver.eigenvalues();
            Eigen::Index start = 0;
            for (Eigen::Index i = 1; i <= evs.size(); ++i) {
                if (i == evs.size() || std::abs(evs[i] - evs[start]) > 1e-8) {
                    refined.push_back(block * solver.eigenvectors().middleCols(start, i - start));
                    start = i;
                }
            }
        }
        blocks = std::move(refined);
    }
    Eigen::MatrixXcd basis(dim, dim);
    Eigen::Index col = 0;
    for (const auto& block : blocks) {
        basis.middleCols(col, block.cols()) = block;
        col += block.cols();
    }
    fix_eigenvector_phases(basis);
    return basis;
}

ContextMeasurement context_selection_pipeline(const StateVector& state,
                                              const ObservableTable& table, int context_index) {
    if (context_index < 0 ||
        context_index >= static_cast<int>(table.contexts().size())) {
        throw std::out_of_range("context_selection_pipeline: context index out of range");
    }
    const auto& ctx = table.contexts()[context_index];
    for (std::size_t i = 0; i < ctx.cells.size(); ++i) {
        for (std::size_t j = i + 1; j < ctx.cells.size(); ++j) {
            if (!pauli_commutes(table.cells()[ctx.cells[i]], table.cells()[ctx.cells[j]])) {
                throw std::invalid_argument("context_selection_pipeline: context " + ctx.name +
                                            " is not mutually commuting");
            }
        }
    }
    const int dim = 1 << table.n_qubits();
    if (state.dim() != dim) {
        throw std::invalid_argument("context_selection_pipeline: state dimension mismatch");
    }

    std::vector<Eigen::MatrixXcd> member_ops;
    for (int c : ctx.cells) member_ops.push_back(table.cells()[c].to_matrix());

    ContextMeasurement out;
    out.context = ctx.name;
    out.joint_basis = joint_eigenbasis(member_ops);

    out.joint_eigenvalues.resize(dim, static_cast<int>(member_ops.size()));
    out.cell_tags.resize(dim);
    std::vector<std::string> cells(dim);
    for (int v = 0; v < dim; ++v) {
        std::string tag = "(";
        for (std::size_t m = 0; m < member_ops.size(); ++m) {
            double ev = (out.joint_basis.col(v).adjoint() * member_ops[m] *
                         out.joint_basis.col(v))(0, 0).real();
            double rounded = ev >= 0.0 ? 1.0 : -1.0;
            if (std::abs(ev - rounded) > 1e-8) {
                throw std::runtime_error(
                    "context_selection_pipeline: joint eigenvalue not +/-1");
            }
            out.joint_eigenvalues(v, m) = rounded;
            tag += (rounded > 0 ? "+1" : "-1");
            tag += (m + 1 < member_ops.size() ? "," : ")");
        }
        out.cell_tags[v] = tag;
        cells[v] = "x" + std::to_string(v);
    }
    out.device = PointerDevice::for_basis(out.joint_basis, cells);
    out.distribution = apply_device(state, out.device);
    return out;
}

nlohmann::json Valuation::to_json() const { return nlohmann::json(values); }

nlohmann::json ValuationSearchResult::to_json() const {
    nlohmann::json sats = nlohmann::json::array();
    for (const auto& v : satisfying) sats.push_back(v.to_json());
    nlohmann::json dropped = nlohmann::json::object();
    for (const auto& [name, count] : dropped_context_counts) dropped[name] = count;
    return nlohmann::json{{"satisfying", sats},
                          {"satisfying_count", static_cast<long>(satisfying.size())},
                          {"total", total},
                          {"dropped_context_counts", dropped}};
}

nlohmann::json ParityCertificate::to_json() const {
    return nlohmann::json{{"context_sign_product", context_sign_product},
                          {"forced_square_product", forced_square_product},
                          {"contradiction", contradiction},
                          {"verdict", verdict}};
}

nlohmann::json PositionValuationReport::to_json() const {
    nlohmann::json cells = nlohmann::json::array();
    for (Eigen::Index i = 0; i < cell_values.rows(); ++i) {
        cells.push_back(std::vector<double>(cell_values.row(i).begin(), cell_values.row(i).end()));
    }
    nlohmann::json contexts = nlohmann::json::array();
    for (std::size_t i = 0; i < context_names.size(); ++i) {
        contexts.push_back({{"name", context_names[i]},
                            {"value", context_values[i]},
                            {"member_product", context_member_products[i]},
                            {"product_relation_holds", bool(product_relation_holds[i])}});
    }
    return nlohmann::json{{"x0", x0},
                          {"cell_values", cells},
                          {"contexts", contexts},
                          {"grand_context_product", grand_context_product},
                          {"grand_cell_square_product", grand_cell_square_product},
                          {"functional_relation_fails", functional_relation_fails}};
}

nlohmann::json ContextMeasurement::to_json() const {
    return nlohmann::json{{"context", context},
                          {"distribution", distribution.to_json()},
                          {"cell_tags", cell_tags}};
}

}  // namespace ed
