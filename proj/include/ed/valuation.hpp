#ifndef ED_VALUATION_HPP
#define ED_VALUATION_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "ed/hilbert.hpp"
#include "ed/pauli.hpp"

namespace ed {

/// Assignment cell -> +/-1, one value per table cell.
struct Valuation {
    std::vector<int> values;  // +1 or -1, indexed like ObservableTable::cells()

    nlohmann::json to_json() const;
};

struct ValuationSearchResult {
    std::vector<Valuation> satisfying;
    long total = 0;  // 2^cells examined
    /// For each context, the satisfying count when that context's
    /// constraint alone is dropped.
    std::vector<std::pair<std::string, long>> dropped_context_counts;

    nlohmann::json to_json() const;
};

/// Exhaustive enumeration of all 2^cells valuations against the context
/// product constraints. Enumeration bound: 20 cells.
ValuationSearchResult valuation_search(const ObservableTable& table);

struct ParityCertificate {
    int context_sign_product = +1;  // product of all context signs
    int forced_square_product = +1; // what cellwise valuation squares force
    bool contradiction = false;     // sign product == -1
    std::string verdict;

    nlohmann::json to_json() const;
};

/// Parity argument: requires every cell to appear in an even number of
/// contexts; the verdict is read off the context signs alone.
ParityCertificate parity_certificate(const ObservableTable& table);

/// Diagonal matrix element <x0| op |x0> (real by Hermiticity).
double position_valuation(const HermitianOperator& op, int x0);
double position_valuation(const Eigen::MatrixXcd& op, int x0);

struct PositionValuationReport {
    int x0 = 0;
    Eigen::MatrixXd cell_values;                 // v_x(A^{ij}) on the grid
    std::vector<std::string> context_names;
    std::vector<double> context_values;          // v_x of each context product
    std::vector<double> context_member_products; // prod_j v_x(A^{ij})
    std::vector<bool> product_relation_holds;    // per context, at 1e-12
    double grand_context_product = 0.0;          // prod over contexts of v_x(product)
    double grand_cell_square_product = 0.0;      // prod over cells of v_x^2
    bool functional_relation_fails = false;

    nlohmann::json to_json() const;
};

/// Position-basis valuation of every cell and context of a grid table,
/// with the product-relation checks.
PositionValuationReport hybrid_check(const ObservableTable& table, int x0);

struct ContextMeasurement {
    std::string context;
    PointerDevice device;                 // reads out the joint eigenbasis
    DiscreteDistribution distribution;    // over pointer cells
    Eigen::MatrixXcd joint_basis;         // columns, deterministic phase fix
    Eigen::MatrixXd joint_eigenvalues;    // (2^N) x members, entries +/-1
    std::vector<std::string> cell_tags;   // eigenvalue tuple per cell

    nlohmann::json to_json() const;
};

/// Joint eigenbasis of a commuting set by sequential eigenspace
/// refinement, with the shared deterministic phase convention.
Eigen::MatrixXcd joint_eigenbasis(const std::vector<Eigen::MatrixXcd>& ops);

/// Builds the pointer device for context i (rows first, then columns),
/// applies it to the state, and attaches the joint eigenvalue tuples.
ContextMeasurement context_selection_pipeline(const StateVector& state,
                                              const ObservableTable& table, int context_index);

}  // namespace ed

#endif
