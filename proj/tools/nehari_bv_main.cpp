// Batch front end: `nehari-bv run <config> [--out DIR] [--seed N]` and
// `nehari-bv audit <config>`. Exit codes: 0 success, 2 validation error,
// 3 solver failure.
#include <cstdint>
#include <iostream>

#include "CLI11.hpp"

#include "nbv/errors.hpp"
#include "nbv/io.hpp"
#include "nbv/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Nehari-set ground states for the 1-Laplacian and prescribed mean-curvature "
                 "problems on discrete BV spaces"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;

    auto* run_cmd = app.add_subcommand("run", "execute the commands listed in the config");
    run_cmd->add_option("config", config_path, "run config file")->required();
    auto* out_opt = run_cmd->add_option("--out", out_dir, "override the output directory");
    auto* seed_opt = run_cmd->add_option("--seed", seed, "override the solver seed");

    auto* audit_cmd = app.add_subcommand("audit", "audit the nonlinearity hypotheses only");
    audit_cmd->add_option("config", config_path, "run config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        nbv::RunConfig cfg = nbv::parse_config(nbv::read_file(config_path));
        if (app.got_subcommand(audit_cmd)) cfg.commands = {nbv::Command::Audit};
        if (*out_opt) cfg.output_dir = out_dir;
        if (*seed_opt) cfg.solver.seed = seed;

        const nbv::RunOutcome outcome = nbv::run(cfg);
        std::cout << "status: " << outcome.status << "\n"
                  << "manifest: " << outcome.manifest_path.string() << "\n";
        return outcome.exit_code;
    } catch (const nbv::ConfigError& e) {
        std::cerr << "config error";
        if (e.line > 0) std::cerr << " at line " << e.line << ", column " << e.col;
        std::cerr << ": " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
