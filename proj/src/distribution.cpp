#include "ed/distribution.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ed {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

DiscreteDistribution::DiscreteDistribution(std::vector<std::string> l, Eigen::VectorXd p)
    : labels(std::move(l)), probs(std::move(p)) {
    if (labels.size() != static_cast<std::size_t>(probs.size())) {
        throw std::invalid_argument("DiscreteDistribution: label/probability count mismatch");
    }
    if ((probs.array() < -1e-15).any()) {
        throw std::invalid_argument("DiscreteDistribution: negative probability");
    }
    if (std::abs(probs.sum() - 1.0) > 1e-12) {
        throw std::invalid_argument("DiscreteDistribution: probabilities must sum to 1");
    }
    std::set<std::string> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) {
        throw std::invalid_argument("DiscreteDistribution: duplicate support label");
    }
}

DiscreteDistribution DiscreteDistribution::over_values(const Eigen::VectorXd& values,
                                                       Eigen::VectorXd probs) {
    std::vector<std::string> labels(values.size());
    for (Eigen::Index i = 0; i < values.size(); ++i) labels[i] = format_value(values[i]);
    return DiscreteDistribution(std::move(labels), std::move(probs));
}

int DiscreteDistribution::index_of(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

Eigen::VectorXd DiscreteDistribution::numeric_support() const {
    Eigen::VectorXd out(probs.size());
    for (int i = 0; i < size(); ++i) {
        std::size_t pos = 0;
        try {
            out[i] = std::stod(labels[i], &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != labels[i].size() || labels[i].empty()) {
            throw std::invalid_argument("DiscreteDistribution: label '" + labels[i] +
                                        "' is not numeric");
        }
    }
    return out;
}

double DiscreteDistribution::mean_of(const Eigen::VectorXd& values) const {
    if (values.size() != probs.size()) {
        throw std::invalid_argument("DiscreteDistribution: value vector size mismatch");
    }
    return probs.dot(values);
}

nlohmann::json DiscreteDistribution::to_json() const {
    nlohmann::json j;
    j["labels"] = labels;
    j["probs"] = std::vector<double>(probs.data(), probs.data() + probs.size());
    return j;
}

JointDistribution::JointDistribution(std::vector<std::string> rows, std::vector<std::string> cols,
                                     Eigen::MatrixXd p)
    : row_labels(std::move(rows)), col_labels(std::move(cols)), probs(std::move(p)) {
    if (row_labels.size() != static_cast<std::size_t>(probs.rows()) ||
        col_labels.size() != static_cast<std::size_t>(probs.cols())) {
        throw std::invalid_argument("JointDistribution: label/matrix shape mismatch");
    }
    if ((probs.array() < -1e-15).any() || std::abs(probs.sum() - 1.0) > 1e-12) {
        throw std::invalid_argument("JointDistribution: not a probability table");
    }
}

DiscreteDistribution JointDistribution::marginal_rows() const {
    return DiscreteDistribution(row_labels, probs.rowwise().sum());
}

DiscreteDistribution JointDistribution::marginal_cols() const {
    return DiscreteDistribution(col_labels, probs.colwise().sum().transpose());
}

nlohmann::json JointDistribution::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < probs.rows(); ++i) {
        rows.push_back(std::vector<double>(probs.row(i).begin(), probs.row(i).end()));
    }
    return nlohmann::json{
        {"row_labels", row_labels}, {"col_labels", col_labels}, {"probs", rows}};
}

JointDistribution function_joint(const DiscreteDistribution& p_a,
                                 const std::function<double(double)>& f) {
    if (!f) throw std::invalid_argument("function_joint: missing function");
    Eigen::VectorXd a_vals = p_a.numeric_support();
    std::vector<double> b_image(a_vals.size());
    for (Eigen::Index i = 0; i < a_vals.size(); ++i) b_image[i] = f(a_vals[i]);

    std::map<double, int> b_index;
    for (double b : b_image) b_index.emplace(b, 0);
    std::vector<std::string> b_labels;
    int idx = 0;
    for (auto& [b, bi] : b_index) {
        bi = idx++;
        b_labels.push_back(format_value(b));
    }

    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(a_vals.size(), idx);
    for (Eigen::Index i = 0; i < a_vals.size(); ++i) {
        joint(i, b_index.at(b_image[i])) = p_a.probs[i];
    }
    return JointDistribution(p_a.labels, std::move(b_labels), std::move(joint));
}

double overlap_distance(const DiscreteDistribution& p1, const DiscreteDistribution& p2) {
    if (p1.labels != p2.labels) {
        throw std::invalid_argument("overlap_distance: distributions must share support labels");
    }
    return 0.5 * (p1.probs - p2.probs).cwiseAbs().sum();
}

IndependenceResult independence_check(const JointDistribution& joint) {
    Eigen::VectorXd pa = joint.probs.rowwise().sum();
    Eigen::VectorXd pb = joint.probs.colwise().sum().transpose();
    IndependenceResult r;
    r.max_deviation = (joint.probs - pa * pb.transpose()).cwiseAbs().maxCoeff();
    r.independent = r.max_deviation < 1e-10;
    return r;
}

}  // namespace ed
