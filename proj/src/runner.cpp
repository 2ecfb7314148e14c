#include "nbv/runner.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include "json.hpp"

#include "nbv/errors.hpp"
#include "nbv/io.hpp"

namespace nbv {

namespace {

using nlohmann::json;

json echo_config(const RunConfig& cfg) {
    json j;
    j["problem"]["functional"] =
        cfg.functional == Functional::OneLaplacian ? "one_laplacian" : "mean_curvature";
    j["problem"]["lambda"] = cfg.lambda;
    j["problem"]["kind"] = cfg.kind == Nonlinearity::Kind::PowerSum ? "power_sum" : "power";
    j["problem"]["p"] = cfg.p;
    if (cfg.kind == Nonlinearity::Kind::PowerSum) {
        j["problem"]["q"] = cfg.q;
        j["problem"]["c1"] = cfg.c1;
        j["problem"]["c2"] = cfg.c2;
    }
    j["problem"]["flavor"] = cfg.flavor == TvFlavor::Isotropic ? "isotropic" : "anisotropic";
    j["grid"] = {{"nx", cfg.nx}, {"ny", cfg.ny}, {"h", cfg.h}};
    j["solver"] = {{"restarts", cfg.solver.restarts},
                   {"seed", cfg.solver.seed},
                   {"eps_schedule", cfg.solver.eps_schedule},
                   {"step_init", cfg.solver.step_init},
                   {"backtrack", cfg.solver.backtrack},
                   {"max_iters", cfg.solver.max_iters},
                   {"psi_stop_tol", cfg.solver.psi_stop_tol},
                   {"workers", cfg.solver.workers},
                   {"probes", cfg.solver.certificate_probes}};
    json cmds = json::array();
    for (Command c : cfg.commands) cmds.push_back(command_name(c));
    j["run"] = {{"commands", cmds}, {"output_dir", cfg.output_dir}};
    if (!cfg.p_list.empty()) j["run"]["p_list"] = cfg.p_list;
    return j;
}

json audit_to_json(const AuditReport& rep) {
    json j;
    j["all_pass"] = rep.all_pass;
    json checks = json::array();
    for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name},
                          {"pass", c.pass},
                          {"witness", c.witness},
                          {"detail", c.detail}});
    j["checks"] = checks;
    j["c1_fit"] = rep.c1_fit;
    j["c2_fit"] = rep.c2_fit;
    j["eps_pair"] = rep.eps_pair;
    j["C_eps"] = rep.C_eps;
    j["warnings"] = rep.warnings;
    return j;
}

json finite_or_null(double v) {
    if (std::isfinite(v)) return json(v);
    return json();
}

std::string trace_to_csv(const std::vector<TraceRow>& trace) {
    std::string out = "restart,eps,iter,psi,t_w,step\n";
    char buf[160];
    for (const auto& r : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%.17g,%.17g,%.17g\n", r.restart, r.eps,
                      r.iter, r.psi, r.t_w, r.step);
        out += buf;
    }
    return out;
}

std::string vector_component_csv(const VectorField& z, bool xcomp) {
    ScalarField tmp(z.domain);
    tmp.values = xcomp ? z.x : z.y;
    return field_to_csv(tmp);
}

} // namespace

RunOutcome run(const RunConfig& cfg) {
    const auto t_start = std::chrono::steady_clock::now();
    const std::filesystem::path out_dir(cfg.output_dir);
    std::filesystem::create_directories(out_dir);

    json manifest;
    manifest["artifact_version"] = kArtifactVersion;
    manifest["config"] = echo_config(cfg);
    manifest["seed"] = cfg.solver.seed;
    manifest["status"] = "ok";
    manifest["commands"] = json::object();

    // Written files, hashed at the end into the manifest inventory.
    std::map<std::string, std::string> file_contents;
    const auto emit = [&](const std::string& name, const std::string& content) {
        write_file_atomic(out_dir / name, content);
        file_contents[name] = content;
    };

    RunOutcome outcome;
    outcome.exit_code = 0;

    const ProblemSpec spec = cfg.to_problem_spec();
    std::optional<GroundStateResult> solved;

    // Canonical order; only requested commands execute.
    const Command order[] = {Command::Audit, Command::Solve, Command::Certify,
                             Command::Continuation};
    for (Command cmd : order) {
        bool requested = false;
        for (Command c : cfg.commands) requested = requested || c == cmd;
        if (!requested) continue;
        const std::string name = command_name(cmd);
        try {
            if (cmd == Command::Audit) {
                const AuditReport rep = audit(spec.nl, default_audit_grid());
                const json j = audit_to_json(rep);
                emit("audit.json", j.dump(2) + "\n");
                manifest["commands"]["audit"] = j;
            } else if (cmd == Command::Solve) {
                GroundStateResult res = solve(spec, cfg.solver);
                emit("field.csv", field_to_csv(res.u_star));
                emit("field.pgm", field_to_pgm(res.u_star));
                emit("trace.csv", trace_to_csv(res.trace));
                json j;
                j["energy"] = res.energy;
                j["nehari_residual"] = res.nehari_residual_value;
                j["best_restart"] = res.best_restart;
                json energies = json::array();
                for (double e : res.restart_energies) energies.push_back(finite_or_null(e));
                j["restart_energies"] = energies;
                j["certificate"] = {{"subdiff_min_slack", res.certificate.subdiff_min_slack},
                                    {"n_probes", res.certificate.n_probes}};
                if (res.certificate.nondegeneracy)
                    j["certificate"]["nondegeneracy"] = *res.certificate.nondegeneracy;
                manifest["commands"]["solve"] = j;
                solved = std::move(res);
            } else if (cmd == Command::Certify) {
                ScalarField u;
                if (solved) {
                    u = solved->u_star;
                } else {
                    const auto field_path = out_dir / "field.csv";
                    if (!std::filesystem::exists(field_path))
                        throw std::runtime_error(
                            "certify: no field available (run solve first or point at a "
                            "directory holding field.csv)");
                    u = field_from_csv(read_file(field_path), cfg.h);
                }
                CriticalityReport rep =
                    subdiff_check(spec, u, cfg.solver.certificate_probes,
                                  cfg.solver.seed ^ 0x5EEDC0DE5EEDC0DEULL);
                if (spec.nl.has_derivative()) rep.nondegeneracy = nondegeneracy(u, spec.nl);
                json j;
                j["subdiff_min_slack"] = rep.subdiff_min_slack;
                j["n_probes"] = rep.n_probes;
                if (rep.nondegeneracy) j["nondegeneracy"] = *rep.nondegeneracy;
                j["nehari_residual"] = nehari_residual(spec, u);
                if (spec.functional == Functional::OneLaplacian) {
                    const VectorFieldCertificate cert = el_certificate(u, spec.nl);
                    j["el_residual"] = cert.el_residual;
                    j["pairing_gap"] = cert.pairing_gap;
                    j["el_iterations"] = cert.iterations;
                    j["el_converged"] = cert.converged;
                    j["max_cellwise_z"] = cert.max_cellwise_norm();
                    emit("zx.csv", vector_component_csv(cert.z, true));
                    emit("zy.csv", vector_component_csv(cert.z, false));
                } else {
                    j["mc_el_residual"] = mc_el_residual(u, spec.lambda, spec.nl);
                }
                emit("certificate.json", j.dump(2) + "\n");
                manifest["commands"]["certify"] = j;
            } else { // Continuation
                const auto points = p_continuation(spec, cfg.p_list, cfg.solver);
                std::string csv = "p,energy,bracketed\n";
                char buf[96];
                json j = json::array();
                for (const auto& pt : points) {
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", pt.p, pt.energy,
                                  pt.bracketed ? 1 : 0);
                    csv += buf;
                    j.push_back({{"p", pt.p},
                                 {"energy", finite_or_null(pt.energy)},
                                 {"bracketed", pt.bracketed}});
                }
                emit("continuation.csv", csv);
                manifest["commands"]["continuation"] = j;
            }
        } catch (const std::exception& e) {
            manifest["status"] = "failed";
            manifest["failed_command"] = name;
            manifest["error"] = e.what();
            outcome.exit_code = 3;
            break;
        }
    }

    json files = json::object();
    for (const auto& [name, content] : file_contents) files[name] = fnv1a_hex(content);
    manifest["files"] = files;
    const auto t_end = std::chrono::steady_clock::now();
    manifest["wall_time_seconds"] =
        std::chrono::duration<double>(t_end - t_start).count();

    outcome.manifest_path = out_dir / "manifest.json";
    write_file_atomic(outcome.manifest_path, manifest.dump(2) + "\n");
    outcome.status = manifest["status"];
    return outcome;
}

} // namespace nbv
