// cacwb — call admission control workbench.
//
// Five subcommands over one config format: exact chain solutions (solve,
// sweep), the event-driven simulator (simulate), the acceptance-factor
// search (optimize), and the flow-balance handover estimator
// (estimate-handover). Exit codes: 0 ok, 2 validation error, 3 solver
// error, 4 fixed point did not converge (output is still written).

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cacwb/config.hpp"
#include "cacwb/errors.hpp"
#include "cacwb/runner.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out;
    std::string format;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

int run(cacwb::RunMode mode, const CliOptions& options) {
    using namespace cacwb;
    try {
        ExperimentConfig config = load_config(options.config_path);
        if (config.run.mode != mode) {
            throw ValidationError("config run.mode is '" + to_string(config.run.mode) +
                                  "' but the '" + to_string(mode) +
                                  "' subcommand was invoked");
        }
        if (options.seed_set) config.run.seed = options.seed;
        if (!options.format.empty()) {
            if (options.format == "csv") config.run.format = OutputFormat::Csv;
            else if (options.format == "json") config.run.format = OutputFormat::Json;
            else throw ValidationError("--format: expected 'csv' or 'json'");
        }
        if (!options.out.empty()) config.run.out = options.out;

        const RunOutcome outcome = run_experiment(config);
        if (config.run.out.empty()) {
            std::cout << outcome.output;
        } else {
            std::ofstream file(config.run.out, std::ios::binary);
            if (!file) {
                throw ValidationError("cannot open output file: " + config.run.out);
            }
            file << outcome.output;
        }
        return outcome.exit_code;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cacwb — admission control analysis workbench for cellular loss systems"};
    app.require_subcommand(1);

    const std::pair<const char*, cacwb::RunMode> modes[] = {
        {"solve", cacwb::RunMode::Solve},
        {"sweep", cacwb::RunMode::Sweep},
        {"simulate", cacwb::RunMode::Simulate},
        {"optimize", cacwb::RunMode::Optimize},
        {"estimate-handover", cacwb::RunMode::EstimateHandover},
    };

    CliOptions options;
    int exit_code = 0;
    for (const auto& [name, mode] : modes) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", options.config_path, "experiment config (JSON)")
            ->required();
        sub->add_option("--out", options.out, "output path (default: stdout)");
        sub->add_option("--format", options.format, "csv or json");
        auto* seed = sub->add_option("--seed", options.seed, "override the config seed");
        sub->callback([&, mode, seed]() {
            options.seed_set = seed->count() > 0;
            exit_code = run(mode, options);
        });
    }

    CLI11_PARSE(app, argc, argv);
    return exit_code;
}
