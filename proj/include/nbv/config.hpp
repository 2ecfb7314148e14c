#pragma once
#include <string>
#include <vector>

#include "nbv/ground_state.hpp"

namespace nbv {

enum class Command { Audit, Solve, Certify, Continuation };

// One self-describing config file per run; sectioned key-value text.
struct RunConfig {
    // [problem]
    Functional functional = Functional::OneLaplacian;
    double lambda = 1.0;
    Nonlinearity::Kind kind = Nonlinearity::Kind::Power;
    double p = 1.5;
    double q = 0.0, c1 = 0.0, c2 = 0.0;
    TvFlavor flavor = TvFlavor::Isotropic;

    // [grid]
    int nx = 16, ny = 16;
    double h = 0.0625;

    // [solver]
    SolverConfig solver;

    // [run]
    std::vector<Command> commands = {Command::Solve};
    std::string output_dir = "out";
    std::vector<double> p_list; // continuation command

    Nonlinearity make_nonlinearity() const;
    ProblemSpec to_problem_spec() const;
};

// Parses and validates; throws ConfigError with line/column on parse errors
// and with the offending field named on validation errors. Unknown keys are
// rejected with a nearest-key suggestion.
RunConfig parse_config(const std::string& text);

std::string command_name(Command c);

} // namespace nbv
