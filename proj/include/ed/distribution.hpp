#ifndef ED_DISTRIBUTION_HPP
#define ED_DISTRIBUTION_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace ed {

/// Finite distribution over labeled outcomes.
struct DiscreteDistribution {
    std::vector<std::string> labels;
    Eigen::VectorXd probs;

    DiscreteDistribution() = default;
    DiscreteDistribution(std::vector<std::string> l, Eigen::VectorXd p);

    /// Support given by numeric values; labels are their decimal form.
    static DiscreteDistribution over_values(const Eigen::VectorXd& values,
                                            Eigen::VectorXd probs);

    int size() const { return static_cast<int>(probs.size()); }
    int index_of(const std::string& label) const;  // -1 if absent
    /// Parses every label as a number; throws if any is not numeric.
    Eigen::VectorXd numeric_support() const;
    double mean_of(const Eigen::VectorXd& values) const;

    nlohmann::json to_json() const;
};

/// Distribution over a rectangular product support (a, b).
struct JointDistribution {
    std::vector<std::string> row_labels;  // a
    std::vector<std::string> col_labels;  // b
    Eigen::MatrixXd probs;                // probs(a, b), sums to 1

    JointDistribution() = default;
    JointDistribution(std::vector<std::string> rows, std::vector<std::string> cols,
                      Eigen::MatrixXd p);

    DiscreteDistribution marginal_rows() const;
    DiscreteDistribution marginal_cols() const;

    nlohmann::json to_json() const;
};

/// P(a, b) = p(a) delta(b - f(a)); support of b is the image of f, sorted.
JointDistribution function_joint(const DiscreteDistribution& p_a,
                                 const std::function<double(double)>& f);

/// Half L1 distance; 1 iff supports are disjoint. Distributions must share
/// their label set (order included).
double overlap_distance(const DiscreteDistribution& p1, const DiscreteDistribution& p2);

struct IndependenceResult {
    bool independent = false;
    double max_deviation = 0.0;  // max |joint - product of marginals|
};

IndependenceResult independence_check(const JointDistribution& joint);

/// Fixed-width numeric label used across distribution supports ("%.12g").
std::string format_value(double v);

}  // namespace ed

#endif
