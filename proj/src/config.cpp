#include "nbv/config.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "nbv/errors.hpp"

namespace nbv {

namespace {

struct Token {
    std::string text;
    int line = 0;
    int col = 0;
};

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

const std::vector<std::string>& known_keys(const std::string& section) {
    static const std::vector<std::string> problem = {"functional", "lambda", "kind", "p",
                                                     "q", "c1", "c2", "flavor"};
    static const std::vector<std::string> grid = {"nx", "ny", "h"};
    static const std::vector<std::string> solver = {"restarts", "seed", "eps_schedule",
                                                    "step_init", "backtrack", "max_iters",
                                                    "psi_stop_tol", "workers", "probes"};
    static const std::vector<std::string> run = {"commands", "output_dir", "p_list"};
    static const std::vector<std::string> none;
    if (section == "problem") return problem;
    if (section == "grid") return grid;
    if (section == "solver") return solver;
    if (section == "run") return run;
    return none;
}

[[noreturn]] void fail(const std::string& msg, const Token& where) {
    throw ConfigError(msg, where.line, where.col);
}

double to_double(const Token& t) {
    try {
        std::size_t used = 0;
        const double v = std::stod(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail("expected a number, got '" + t.text + "'", t);
    }
}

long long to_int(const Token& t) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        fail("expected an integer, got '" + t.text + "'", t);
    }
}

std::vector<Token> split_list(const Token& t) {
    std::vector<Token> out;
    std::stringstream ss(t.text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string v = trim(item);
        if (!v.empty()) out.push_back({v, t.line, t.col});
    }
    return out;
}

} // namespace

std::string command_name(Command c) {
    switch (c) {
        case Command::Audit: return "audit";
        case Command::Solve: return "solve";
        case Command::Certify: return "certify";
        case Command::Continuation: return "continuation";
    }
    return "?";
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    bool commands_set = false;

    std::istringstream is(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = raw;
        const std::size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        const std::string body = trim(line);
        if (body.empty()) continue;

        if (body.front() == '[') {
            if (body.back() != ']')
                throw ConfigError("unterminated section header", line_no, 1);
            section = trim(body.substr(1, body.size() - 2));
            if (known_keys(section).empty())
                throw ConfigError("unknown section [" + section + "]", line_no, 1);
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value'", line_no, 1);
        const std::string key = trim(line.substr(0, eq));
        const int key_col = static_cast<int>(line.find_first_not_of(" \t")) + 1;
        const Token val{trim(line.substr(eq + 1)), line_no, static_cast<int>(eq) + 2};
        if (key.empty()) throw ConfigError("empty key", line_no, key_col);
        if (section.empty())
            throw ConfigError("key '" + key + "' outside any section", line_no, key_col);

        const auto& keys = known_keys(section);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
            std::string best;
            int best_d = 1 << 30;
            for (const auto& k : keys) {
                const int dist = edit_distance(key, k);
                if (dist < best_d) {
                    best_d = dist;
                    best = k;
                }
            }
            std::string msg = "unknown key '" + key + "' in [" + section + "]";
            if (best_d <= 2) msg += "; did you mean '" + best + "'?";
            throw ConfigError(msg, line_no, key_col);
        }
        if (val.text.empty()) throw ConfigError("missing value for '" + key + "'", val.line, val.col);

        if (section == "problem") {
            if (key == "functional") {
                if (val.text == "one_laplacian")
                    cfg.functional = Functional::OneLaplacian;
                else if (val.text == "mean_curvature")
                    cfg.functional = Functional::MeanCurvature;
                else
                    fail("functional must be one_laplacian or mean_curvature", val);
            } else if (key == "lambda") {
                cfg.lambda = to_double(val);
            } else if (key == "kind") {
                if (val.text == "power")
                    cfg.kind = Nonlinearity::Kind::Power;
                else if (val.text == "power_sum")
                    cfg.kind = Nonlinearity::Kind::PowerSum;
                else
                    fail("kind must be power or power_sum", val);
            } else if (key == "p") {
                cfg.p = to_double(val);
            } else if (key == "q") {
                cfg.q = to_double(val);
            } else if (key == "c1") {
                cfg.c1 = to_double(val);
            } else if (key == "c2") {
                cfg.c2 = to_double(val);
            } else if (key == "flavor") {
                if (val.text == "isotropic")
                    cfg.flavor = TvFlavor::Isotropic;
                else if (val.text == "anisotropic")
                    cfg.flavor = TvFlavor::Anisotropic;
                else
                    fail("flavor must be isotropic or anisotropic", val);
            }
        } else if (section == "grid") {
            if (key == "nx")
                cfg.nx = static_cast<int>(to_int(val));
            else if (key == "ny")
                cfg.ny = static_cast<int>(to_int(val));
            else if (key == "h")
                cfg.h = to_double(val);
        } else if (section == "solver") {
            if (key == "restarts")
                cfg.solver.restarts = static_cast<int>(to_int(val));
            else if (key == "seed")
                cfg.solver.seed = static_cast<std::uint64_t>(to_int(val));
            else if (key == "eps_schedule") {
                cfg.solver.eps_schedule.clear();
                for (const Token& t : split_list(val)) cfg.solver.eps_schedule.push_back(to_double(t));
            } else if (key == "step_init")
                cfg.solver.step_init = to_double(val);
            else if (key == "backtrack")
                cfg.solver.backtrack = to_double(val);
            else if (key == "max_iters")
                cfg.solver.max_iters = static_cast<int>(to_int(val));
            else if (key == "psi_stop_tol")
                cfg.solver.psi_stop_tol = to_double(val);
            else if (key == "workers")
                cfg.solver.workers = static_cast<int>(to_int(val));
            else if (key == "probes")
                cfg.solver.certificate_probes = static_cast<int>(to_int(val));
        } else if (section == "run") {
            if (key == "commands") {
                cfg.commands.clear();
                commands_set = true;
                for (const Token& t : split_list(val)) {
                    if (t.text == "audit")
                        cfg.commands.push_back(Command::Audit);
                    else if (t.text == "solve")
                        cfg.commands.push_back(Command::Solve);
                    else if (t.text == "certify")
                        cfg.commands.push_back(Command::Certify);
                    else if (t.text == "continuation")
                        cfg.commands.push_back(Command::Continuation);
                    else
                        fail("unknown command '" + t.text + "'", t);
                }
            } else if (key == "output_dir") {
                cfg.output_dir = val.text;
            } else if (key == "p_list") {
                cfg.p_list.clear();
                for (const Token& t : split_list(val)) cfg.p_list.push_back(to_double(t));
            }
        }
    }

    // Field validation (line numbers no longer apply; name the field instead).
    const auto vfail = [](const std::string& msg) { throw ConfigError(msg, 0, 0); };
    if (!(cfg.p > 1.0 && cfg.p < 2.0)) vfail("p must lie in (1, 2) for N = 2");
    if (cfg.kind == Nonlinearity::Kind::PowerSum) {
        if (!(cfg.q > 1.0 && cfg.q < 2.0)) vfail("q must lie in (1, 2) for N = 2");
        if (!(cfg.c1 > 0.0) || !(cfg.c2 > 0.0)) vfail("c1 and c2 must be positive");
    }
    if (cfg.functional == Functional::OneLaplacian) {
        if (cfg.lambda != 1.0) vfail("lambda must be 1 for the one_laplacian functional");
    } else if (!(cfg.lambda > 0.0)) {
        vfail("lambda must be positive");
    }
    if (cfg.nx < 1 || cfg.ny < 1) vfail("nx and ny must be positive");
    if (!(cfg.h > 0.0)) vfail("h must be positive");
    try {
        cfg.solver.validate();
    } catch (const std::invalid_argument& e) {
        vfail(e.what());
    }
    if (!commands_set) cfg.commands = {Command::Solve};
    if (cfg.commands.empty()) vfail("commands must not be empty");
    for (double p : cfg.p_list)
        if (!(p > 1.0 && p <= 2.0)) vfail("p_list entries must lie in (1, 2]");
    if (cfg.output_dir.empty()) vfail("output_dir must not be empty");
    return cfg;
}

Nonlinearity RunConfig::make_nonlinearity() const {
    if (kind == Nonlinearity::Kind::PowerSum) return Nonlinearity::power_sum(p, q, c1, c2);
    return Nonlinearity::power(p);
}

ProblemSpec RunConfig::to_problem_spec() const {
    const DiscreteDomain d(nx, ny, h);
    if (functional == Functional::OneLaplacian)
        return ProblemSpec::one_laplacian(d, make_nonlinearity(), flavor);
    return ProblemSpec::mean_curvature(d, make_nonlinearity(), lambda, flavor);
}

} // namespace nbv
