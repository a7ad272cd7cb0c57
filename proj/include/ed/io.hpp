#ifndef ED_IO_HPP
#define ED_IO_HPP

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "ed/fields.hpp"

namespace ed {

/// 17 significant digits, round-trip exact for doubles.
std::string format_double(double v);

/// Field snapshot CSV: header then one row per node with columns
/// x, rho, phi, re_psi, im_psi.
void write_field_csv(const std::filesystem::path& path, const DensityField& rho,
                     const PhaseField& phi, const WaveField& psi);

/// Pretty-printed JSON with a trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& j);

nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace ed

#endif
