#ifndef ED_SCENARIOS_HPP
#define ED_SCENARIOS_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace ed {

/// Exit codes used by the CLI: 0 success, 2 config validation failure,
/// 3 runtime/module error.
inline constexpr int kExitValidation = 2;
inline constexpr int kExitRuntime = 3;

class ScenarioError : public std::runtime_error {
public:
    ScenarioError(int exit_code, const std::string& what)
        : std::runtime_error(what), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

private:
    int exit_code_;
};

struct RunResult {
    std::string summary;  // one line with the headline number
    std::vector<std::filesystem::path> artifacts;
};

/// Stable (byte-identical) catalog of scenario kinds and their parameters.
std::string list_scenarios();

/// Strict-schema validation; throws ScenarioError(2) naming the offending
/// key path. Unknown keys are rejected at every level.
void validate_config(const nlohmann::json& config);

/// Validates, executes, and writes artifacts under
/// <output_dir>/<scenario>/<label>/. Environment variable EDLAB_OUTPUT_DIR
/// provides the default output directory.
RunResult run_scenario(const nlohmann::json& config);

}  // namespace ed

#endif
