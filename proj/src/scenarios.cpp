#include "ed/scenarios.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ed/evolution.hpp"
#include "ed/io.hpp"
#include "ed/maxent.hpp"
#include "ed/valuation.hpp"

namespace ed {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& message) {
    throw ScenarioError(kExitValidation, "config error at '" + path + "': " + message);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) invalid(path + "." + key, "unknown key");
    }
}

const json& require_key(const json& obj, const std::string& key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) invalid(path + "." + key, "missing required key");
    return *it;
}

double require_number(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require_key(obj, key, path);
    if (!v.is_number()) invalid(path + "." + key, "expected a number");
    return v.get<double>();
}

double positive_number(const json& obj, const std::string& key, const std::string& path) {
    double v = require_number(obj, key, path);
    if (!(v > 0.0)) invalid(path + "." + key, "must be positive");
    return v;
}

long require_integer(const json& obj, const std::string& key, const std::string& path) {
    const json& v = require_key(obj, key, path);
    if (!v.is_number_integer()) invalid(path + "." + key, "expected an integer");
    return v.get<long>();
}

Eigen::VectorXd number_array(const json& v, const std::string& path) {
    if (!v.is_array()) invalid(path, "expected an array of numbers");
    Eigen::VectorXd out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v.at(i).is_number()) invalid(path + "[" + std::to_string(i) + "]", "expected a number");
        out[i] = v.at(i).get<double>();
    }
    return out;
}

// --- shared sub-schemas ---------------------------------------------------

Grid1D parse_grid(const json& j, const std::string& path) {
    if (!j.is_object()) invalid(path, "expected an object");
    reject_unknown_keys(j, {"x_min", "x_max", "n_points"}, path);
    double x_min = require_number(j, "x_min", path);
    double x_max = require_number(j, "x_max", path);
    long n = require_integer(j, "n_points", path);
    if (!(x_max > x_min)) invalid(path + ".x_max", "must exceed x_min");
    if (n < 8 || (n & (n - 1)) != 0) invalid(path + ".n_points", "must be a power of two >= 8");
    return Grid1D(x_min, x_max, static_cast<int>(n));
}

struct FieldSetup {
    Grid1D grid;
    DensityField rho;
    PhaseField phi;
    HamiltonianSpec spec;
    double dt;
    double t_final;
};

FieldSetup parse_field_setup(const json& p, const std::string& path) {
    reject_unknown_keys(p,
                        {"grid", "initial", "mass", "hbar", "potential", "dt", "t_final",
                         "outputs", "snapshots"},
                        path);
    Grid1D grid = parse_grid(require_key(p, "grid", path), path + ".grid");

    const json& init = require_key(p, "initial", path);
    if (!init.is_object()) invalid(path + ".initial", "expected an object");
    reject_unknown_keys(init, {"sigma", "center", "momentum"}, path + ".initial");
    double sigma = positive_number(init, "sigma", path + ".initial");
    double center = init.contains("center") ? require_number(init, "center", path + ".initial") : 0.0;
    double momentum =
        init.contains("momentum") ? require_number(init, "momentum", path + ".initial") : 0.0;

    double mass = positive_number(p, "mass", path);
    double hbar = p.contains("hbar") ? positive_number(p, "hbar", path) : 1.0;

    const json& pot = require_key(p, "potential", path);
    if (!pot.is_object()) invalid(path + ".potential", "expected an object");
    reject_unknown_keys(pot, {"kind", "omega"}, path + ".potential");
    const json& kind = require_key(pot, "kind", path + ".potential");
    Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.n_points);
    if (kind == "harmonic") {
        double omega = positive_number(pot, "omega", path + ".potential");
        Eigen::VectorXd x = grid.nodes();
        for (int i = 0; i < grid.n_points; ++i) {
            v[i] = 0.5 * mass * omega * omega * x[i] * x[i];
        }
    } else if (kind != "zero") {
        invalid(path + ".potential.kind", "must be 'zero' or 'harmonic'");
    }

    FieldSetup setup;
    setup.grid = grid;
    setup.spec = HamiltonianSpec::with_hbar(mass, std::move(v), hbar);
    setup.rho = gaussian_density(grid, center, sigma);

    // A nonzero momentum must wind an integer number of times around the
    // periodic box so the phase factor stays single-valued.
    if (momentum != 0.0) {
        double quantum = 2.0 * 3.14159265358979323846 * hbar / grid.length();
        double ratio = momentum / quantum;
        if (std::abs(ratio - std::round(ratio)) > 1e-9) {
            invalid(path + ".initial.momentum",
                    "must be an integer multiple of 2*pi*hbar/L = " + format_double(quantum));
        }
    }
    setup.phi = PhaseField(grid, momentum * grid.nodes());

    double dt_max = stability_dt_max(setup.spec, grid);
    setup.dt = p.contains("dt") ? positive_number(p, "dt", path) : 0.5 * dt_max;
    if (setup.dt > dt_max) {
        invalid(path + ".dt", "exceeds stability bound " + format_double(dt_max));
    }
    setup.t_final = positive_number(p, "t_final", path);
    return setup;
}

DriftField parse_drift(const json& j, const std::string& path, Eigen::Index dim) {
    if (!j.is_object()) invalid(path, "expected an object");
    reject_unknown_keys(j, {"kind", "coefficients"}, path);
    const json& kind = require_key(j, "kind", path);
    if (kind == "none") return DriftField::constant();
    Eigen::VectorXd coeffs = number_array(require_key(j, "coefficients", path),
                                          path + ".coefficients");
    if (coeffs.size() != dim) {
        invalid(path + ".coefficients", "expected " + std::to_string(dim) + " entries");
    }
    if (kind == "linear") return DriftField::linear(std::move(coeffs));
    if (kind == "quadratic") return DriftField::quadratic(std::move(coeffs));
    invalid(path + ".kind", "must be 'none', 'linear' or 'quadratic'");
}

ObservableTable parse_table(const json& p, const std::string& path) {
    if (!p.contains("table")) return ObservableTable::mermin_square();
    const json& t = p.at("table");
    if (!t.is_string()) invalid(path + ".table", "expected a string");
    std::string s = t.get<std::string>();
    if (s == "mermin") return ObservableTable::mermin_square();
    try {
        return ObservableTable::parse(s);
    } catch (const std::exception& e) {
        invalid(path + ".table", e.what());
    }
}

// --- per-scenario validation + execution ----------------------------------

struct ScenarioIO {
    fs::path dir;
    std::vector<fs::path> artifacts;

    void save(const std::string& name, const json& j) {
        fs::path p = dir / name;
        write_json(p, j);
        artifacts.push_back(p);
    }
};

std::string run_sample(const json& p, std::uint64_t seed, ScenarioIO& io) {
    reject_unknown_keys(p, {"n_particles", "masses", "eta", "dt", "drift", "x0", "n_samples"},
                        "params");
    long n_particles = require_integer(p, "n_particles", "params");
    if (n_particles < 1) invalid("params.n_particles", "must be >= 1");
    KernelParams params;
    params.masses = number_array(require_key(p, "masses", "params"), "params.masses");
    if (params.masses.size() != n_particles) invalid("params.masses", "one mass per particle");
    params.eta = positive_number(p, "eta", "params");
    params.dt = positive_number(p, "dt", "params");
    params.drift = parse_drift(require_key(p, "drift", "params"), "params.drift",
                               3 * n_particles);
    Eigen::VectorXd x0 = number_array(require_key(p, "x0", "params"), "params.x0");
    if (x0.size() != 3 * n_particles) invalid("params.x0", "expected 3 * n_particles entries");
    long n_samples = require_integer(p, "n_samples", "params");
    if (n_samples < 100) invalid("params.n_samples", "must be >= 100");

    try {
        params.validate();
        Configuration x(std::move(x0), static_cast<int>(n_particles));
        MomentReport report = verify_constraints(params, x, n_samples, seed);
        io.save("moment_report.json", report.to_json());
        return std::string("sample: moment check ") + (report.pass ? "pass" : "FAIL") +
               ", kappa_prime = " + format_double(report.kappa_prime);
    } catch (const std::invalid_argument& e) {
        throw ScenarioError(kExitValidation, e.what());
    }
}

std::string run_evolve(const json& p, ScenarioIO& io) {
    FieldSetup s = parse_field_setup(p, "params");
    long snapshots =
        p.contains("snapshots") ? require_integer(p, "snapshots", "params") : 5;
    if (snapshots < 1) invalid("params.snapshots", "must be >= 1");

    int n_steps = std::max(1, static_cast<int>(std::ceil(s.t_final / s.dt)));
    double dt = s.t_final / n_steps;
    DensityField rho = s.rho;
    PhaseField phi = s.phi;
    double h0 = ensemble_hamiltonian(rho, phi, s.spec);
    double max_renorm = 0.0, max_energy_drift = 0.0;

    auto snap = [&](int index, double t) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%04d.csv", index);
        fs::path path = io.dir / name;
        write_field_csv(path, rho, phi, to_wavefunction(rho, phi, s.spec));
        io.artifacts.push_back(path);
        (void)t;
    };
    snap(0, 0.0);
    int next = 1;
    for (int step = 1; step <= n_steps; ++step) {
        HamiltonStepResult r = hamilton_step(rho, phi, s.spec, dt);
        max_renorm = std::max(max_renorm, r.renorm_correction);
        rho = std::move(r.rho);
        phi = std::move(r.phi);
        double h = ensemble_hamiltonian(rho, phi, s.spec);
        max_energy_drift =
            std::max(max_energy_drift, std::abs(h - h0) / std::max(std::abs(h0), 1e-30));
        if (step * snapshots >= next * n_steps) snap(next++, step * dt);
    }
    io.save("evolve_report.json", json{{"schema", 1},
                                       {"steps", n_steps},
                                       {"dt", dt},
                                       {"max_renorm", max_renorm},
                                       {"max_energy_drift", max_energy_drift}});
    return "evolve: " + std::to_string(n_steps) +
           " steps, max energy drift = " + format_double(max_energy_drift);
}

std::string run_compare(const json& p, ScenarioIO& io) {
    FieldSetup s = parse_field_setup(p, "params");
    long outputs = p.contains("outputs") ? require_integer(p, "outputs", "params") : 10;
    if (outputs < 1) invalid("params.outputs", "must be >= 1");

    CompareReport report =
        evolve_compare(s.rho, s.phi, s.spec, s.t_final, s.dt, static_cast<int>(outputs));
    io.save("compare_report.json", report.to_json());

    fs::path csv = io.dir / "compare_timeseries.csv";
    std::ofstream out(csv);
    out << "t,l2,linf,width_sq_ed,width_sq_ref\n";
    for (const auto& sample : report.samples) {
        out << format_double(sample.t) << ',' << format_double(sample.l2) << ','
            << format_double(sample.linf) << ',' << format_double(sample.width_sq_ed) << ','
            << format_double(sample.width_sq_ref) << '\n';
    }
    io.artifacts.push_back(csv);
    return "compare: final L2 distance = " + format_double(report.final_l2());
}

std::string run_measure(const json& p, ScenarioIO& io) {
    reject_unknown_keys(p, {"state", "operator", "detections", "likelihood"}, "params");
    StateVector state = state_from_json(require_key(p, "state", "params"));
    HermitianOperator op = operator_from_json(require_key(p, "operator", "params"));
    if (state.dim() != op.dim()) invalid("params.state", "dimension mismatch with operator");

    PointerDevice device = PointerDevice::for_operator(op);
    DiscreteDistribution born = born_probabilities(state, op);
    DiscreteDistribution pointer = apply_device(state, device);

    Likelihood like = Likelihood::identity(device.pointer_cells);
    if (p.contains("likelihood")) {
        const json& lj = p.at("likelihood");
        if (!lj.is_object()) invalid("params.likelihood", "expected an object");
        reject_unknown_keys(lj, {"outcomes", "table"}, "params.likelihood");
        const json& outcomes = require_key(lj, "outcomes", "params.likelihood");
        const json& table = require_key(lj, "table", "params.likelihood");
        if (!outcomes.is_array()) invalid("params.likelihood.outcomes", "expected an array");
        std::vector<std::string> names;
        for (const auto& o : outcomes) names.push_back(o.get<std::string>());
        if (!table.is_array()) invalid("params.likelihood.table", "expected row arrays");
        Eigen::MatrixXd t(names.size(), device.pointer_cells.size());
        for (std::size_t r = 0; r < names.size(); ++r) {
            Eigen::VectorXd row = number_array(table.at(r), "params.likelihood.table");
            if (row.size() != t.cols()) invalid("params.likelihood.table", "row length mismatch");
            t.row(r) = row;
        }
        like = Likelihood(std::move(names), device.pointer_cells, std::move(t));
    }

    std::vector<std::string> detections;
    const json& dets = require_key(p, "detections", "params");
    if (!dets.is_array() || dets.empty()) invalid("params.detections", "expected a nonempty array");
    for (const auto& d : dets) detections.push_back(d.get<std::string>());

    InferenceReport inference = infer_observable(detections, device, op.eigenvalues(), like);
    io.save("measure_report.json", json{{"schema", 1},
                                        {"born", born.to_json()},
                                        {"pointer", pointer.to_json()},
                                        {"inference", inference.to_json()}});
    return "measure: inferred value = " + format_double(inference.inferred_value);
}

std::string run_weak(const json& p, ScenarioIO& io) {
    reject_unknown_keys(p, {"pre", "post", "operator"}, "params");
    StateVector pre = state_from_json(require_key(p, "pre", "params"));
    StateVector post = state_from_json(require_key(p, "post", "params"));
    HermitianOperator op = operator_from_json(require_key(p, "operator", "params"));
    std::complex<double> w = weak_value(pre, post, op);
    io.save("weak_value.json",
            json{{"schema", 1},
                 {"weak_value", {w.real(), w.imag()}},
                 {"magnitude", std::abs(w)},
                 {"spectrum_min", op.eigenvalues().minCoeff()},
                 {"spectrum_max", op.eigenvalues().maxCoeff()}});
    return "weak: A_W = " + format_double(w.real()) + " + " + format_double(w.imag()) +
           "i, |A_W| = " + format_double(std::abs(w));
}

std::string run_ks(const json& p, ScenarioIO& io) {
    reject_unknown_keys(p, {"table"}, "params");
    ObservableTable table = parse_table(p, "params");
    auto products = context_products(table);
    ValuationSearchResult search = valuation_search(table);

    json products_json = json::array();
    for (const auto& cp : products) {
        products_json.push_back({{"context", cp.context}, {"sign", cp.sign},
                                 {"product", cp.product.str()}});
    }
    json report{{"schema", 1},
                {"satisfying", static_cast<long>(search.satisfying.size())},
                {"grand_sign", grand_product_sign(products)},
                {"context_products", products_json},
                {"search", search.to_json()}};
    try {
        report["certificate"] = parity_certificate(table).to_json();
    } catch (const std::invalid_argument&) {
        report["certificate"] = nullptr;  // not a parity-shaped table
    }
    io.save("ks_report.json", report);
    return "ks: satisfying = " + std::to_string(search.satisfying.size()) +
           ", grand sign = " + std::to_string(grand_product_sign(products));
}

std::string run_hybrid(const json& p, ScenarioIO& io) {
    reject_unknown_keys(p, {"table", "x0"}, "params");
    ObservableTable table = parse_table(p, "params");
    const int dim = 1 << table.n_qubits();
    std::vector<int> basis_indices;
    if (!p.contains("x0") || p.at("x0") == "all") {
        for (int i = 0; i < dim; ++i) basis_indices.push_back(i);
    } else if (p.at("x0").is_number_integer()) {
        long x0 = p.at("x0").get<long>();
        if (x0 < 0 || x0 >= dim) invalid("params.x0", "basis index out of range");
        basis_indices.push_back(static_cast<int>(x0));
    } else {
        invalid("params.x0", "expected an integer or 'all'");
    }
    json reports = json::array();
    int violations = 0;
    for (int x0 : basis_indices) {
        PositionValuationReport r = hybrid_check(table, x0);
        if (r.functional_relation_fails) ++violations;
        reports.push_back(r.to_json());
    }
    io.save("hybrid_report.json", json{{"schema", 1}, {"reports", reports}});
    return "hybrid: functional relation fails for " + std::to_string(violations) + " of " +
           std::to_string(basis_indices.size()) + " basis states";
}

std::string run_context(const json& p, ScenarioIO& io) {
    reject_unknown_keys(p, {"table", "state", "context_index"}, "params");
    ObservableTable table = parse_table(p, "params");
    StateVector state = state_from_json(require_key(p, "state", "params"));
    long index = require_integer(p, "context_index", "params");
    if (index < 0 || index >= static_cast<long>(table.contexts().size())) {
        invalid("params.context_index", "context index out of range");
    }
    ContextMeasurement m = context_selection_pipeline(state, table, static_cast<int>(index));
    io.save("context_report.json", json{{"schema", 1}, {"measurement", m.to_json()}});
    std::ostringstream summary;
    summary << "context: " << m.context << ", p = [";
    for (int i = 0; i < m.distribution.size(); ++i) {
        summary << (i ? ", " : "") << format_double(m.distribution.probs[i]);
    }
    summary << "]";
    return summary.str();
}

const std::set<std::string> kKinds = {"sample", "evolve", "compare", "measure",
                                      "weak",   "ks",     "hybrid",  "context"};

}  // namespace

std::string list_scenarios() {
    return
        "sample   Monte-Carlo check of the maximum-entropy transition kernel moments\n"
        "         (drift mean and eta*dt/m variances).\n"
        "         params: n_particles, masses[], eta, dt, drift{kind,coefficients}, x0[],\n"
        "                 n_samples\n"
        "evolve   Coupled density/phase evolution under the ensemble Hamiltonian on a\n"
        "         periodic grid; writes field snapshots.\n"
        "         params: grid{x_min,x_max,n_points}, initial{sigma,center,momentum},\n"
        "                 mass, hbar, potential{kind,omega}, dt, t_final, snapshots\n"
        "compare  Schroedinger equivalence check: density/phase stepper against the\n"
        "         split-step spectral reference from identical initial data.\n"
        "         params: as evolve, plus outputs\n"
        "measure  Pointer-device measurement chain: Born probabilities, unitary device\n"
        "         readout, Bayesian detection updates, inferred observable value.\n"
        "         params: state[], operator[][], detections[], likelihood{outcomes,table}\n"
        "weak     Pre/post-selected weak value of an operator (may lie outside the\n"
        "         eigenvalue spectrum).\n"
        "         params: pre[], post[], operator[][]\n"
        "ks       Noncontextual valuation search and parity contradiction for an\n"
        "         observable table (default: the Peres-Mermin square).\n"
        "         params: table\n"
        "hybrid   Position-basis valuations of a table: per-cell and per-context values\n"
        "         and the product-relation checks.\n"
        "         params: table, x0 (integer or 'all')\n"
        "context  Context-selection pipeline: joint eigenbasis pointer device for one\n"
        "         row/column, applied to a state.\n"
        "         params: table, state[], context_index\n";
}

void validate_config(const json& config) {
    if (!config.is_object()) {
        throw ScenarioError(kExitValidation, "config error at '.': expected a JSON object");
    }
    reject_unknown_keys(config, {"scenario", "params", "output_dir", "label", "seed"}, "");
    const json& kind = require_key(config, "scenario", "");
    if (!kind.is_string() || !kKinds.count(kind.get<std::string>())) {
        invalid(".scenario", "unknown scenario kind");
    }
    const json& params = require_key(config, "params", "");
    if (!params.is_object()) invalid(".params", "expected an object");
    if (config.contains("output_dir") && !config.at("output_dir").is_string()) {
        invalid(".output_dir", "expected a string");
    }
    if (config.contains("label") && !config.at("label").is_string()) {
        invalid(".label", "expected a string");
    }
    if (config.contains("seed") && !config.at("seed").is_number_integer()) {
        invalid(".seed", "expected an integer");
    }
}

RunResult run_scenario(const json& config) {
    validate_config(config);
    const std::string kind = config.at("scenario").get<std::string>();
    const json& params = config.at("params");

    std::string output_dir = ".";
    if (const char* env = std::getenv("EDLAB_OUTPUT_DIR")) output_dir = env;
    if (config.contains("output_dir")) output_dir = config.at("output_dir").get<std::string>();
    std::string label = config.contains("label") ? config.at("label").get<std::string>() : "run";
    std::uint64_t seed =
        config.contains("seed") ? config.at("seed").get<std::uint64_t>() : 0;

    ScenarioIO io;
    io.dir = fs::path(output_dir) / kind / label;

    // Validate before touching the filesystem: scenarios surface parameter
    // problems as ScenarioError(2) and leave no artifacts behind.
    try {
        fs::create_directories(io.dir);
        RunResult result;
        if (kind == "sample") result.summary = run_sample(params, seed, io);
        else if (kind == "evolve") result.summary = run_evolve(params, io);
        else if (kind == "compare") result.summary = run_compare(params, io);
        else if (kind == "measure") result.summary = run_measure(params, io);
        else if (kind == "weak") result.summary = run_weak(params, io);
        else if (kind == "ks") result.summary = run_ks(params, io);
        else if (kind == "hybrid") result.summary = run_hybrid(params, io);
        else result.summary = run_context(params, io);
        result.artifacts = std::move(io.artifacts);
        return result;
    } catch (const std::exception& e) {
        // A failed run leaves no artifacts behind.
        std::error_code ec;
        for (const auto& f : io.artifacts) fs::remove(f, ec);
        if (const auto* se = dynamic_cast<const ScenarioError*>(&e)) {
            throw ScenarioError(se->exit_code(), se->what());
        }
        if (dynamic_cast<const std::invalid_argument*>(&e)) {
            throw ScenarioError(kExitValidation, e.what());
        }
        throw ScenarioError(kExitRuntime, e.what());
    }
}

}  // namespace ed
