// edlab: scenario-driven front end for the entropic-dynamics laboratory.
//
// Verbs:
//   edlab run <config.json>       execute a scenario, write artifacts
//   edlab validate <config.json>  schema-check a config without running it
//   edlab list                    print the scenario catalog
//
// Exit codes: 0 success, 2 config validation failure, 3 runtime error.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ed/scenarios.hpp"

namespace {

nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ed::ScenarioError(ed::kExitValidation, "cannot open config file '" + path + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ed::ScenarioError(ed::kExitValidation,
                                std::string("config is not valid JSON: ") + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"entropic-dynamics laboratory"};
    app.require_subcommand(1);

    std::string run_config;
    auto* run_cmd = app.add_subcommand("run", "execute a scenario config");
    run_cmd->add_option("config", run_config, "JSON scenario config")->required();

    std::string validate_config_path;
    auto* validate_cmd = app.add_subcommand("validate", "schema-check a scenario config");
    validate_cmd->add_option("config", validate_config_path, "JSON scenario config")->required();

    auto* list_cmd = app.add_subcommand("list", "print the scenario catalog");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            std::cout << ed::list_scenarios();
            return 0;
        }
        if (validate_cmd->parsed()) {
            ed::validate_config(load_config(validate_config_path));
            std::cout << "ok\n";
            return 0;
        }
        ed::RunResult result = ed::run_scenario(load_config(run_config));
        std::cout << result.summary << '\n';
        for (const auto& artifact : result.artifacts) {
            std::cout << "  wrote " << artifact.string() << '\n';
        }
        return 0;
    } catch (const ed::ScenarioError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ed::kExitRuntime;
    }
}
