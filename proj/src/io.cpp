#include "ed/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace ed {

std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_field_csv(const std::filesystem::path& path, const DensityField& rho,
                     const PhaseField& phi, const WaveField& psi) {
    if (!(rho.grid == phi.grid) || !(rho.grid == psi.grid)) {
        throw std::invalid_argument("write_field_csv: grid mismatch");
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_field_csv: cannot open " + path.string());
    out << "x,rho,phi,re_psi,im_psi\n";
    Eigen::VectorXd x = rho.grid.nodes();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out << format_double(x[i]) << ',' << format_double(rho.values[i]) << ','
            << format_double(phi.values[i]) << ',' << format_double(psi.values[i].real()) << ','
            << format_double(psi.values[i].imag()) << '\n';
    }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_json: cannot open " + path.string());
    out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_json: cannot open " + path.string());
    return nlohmann::json::parse(in);
}

}  // namespace ed
