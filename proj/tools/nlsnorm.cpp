// Command-line driver: ground / mpass / fiber / bubble / path / evolve /
// sweep / certify. Results land in <out>/result.json (+ series.csv where a
// table is produced); failures write <out>/diagnostic.json.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 a checked
// inequality failed numerically, 3 numeric / convergence / search failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>

#include "nlsnorm/dynamics.hpp"
#include "nlsnorm/errors.hpp"
#include "nlsnorm/fibermap.hpp"
#include "nlsnorm/io.hpp"
#include "nlsnorm/pathlab.hpp"
#include "nlsnorm/solvers.hpp"

using nlohmann::json;
using namespace nlsnorm;

namespace {

struct Cli {
  RunConfig cfg;
  std::string command;
  double fiber_A = 1.0, fiber_B = 0.5, fiber_C = 1.0;
};

void write_result(const Cli& cli, json result) {
  result["config"] = to_json(cli.cfg);
  result["command"] = cli.command;
  write_text_file(cli.cfg.out_dir + "/result.json", result.dump(2) + "\n");
}

void write_diagnostic(const Cli& cli, const std::string& kind,
                      const std::string& message) {
  json d{{"command", cli.command},
         {"error", kind},
         {"message", message},
         {"config", to_json(cli.cfg)}};
  try {
    write_text_file(cli.cfg.out_dir + "/diagnostic.json", d.dump(2) + "\n");
  } catch (...) {
    // diagnostics are best effort
  }
}

int run_ground(const Cli& cli) {
  const auto p = cli.cfg.problem();
  auto gs = solve_ground_state(p, cli.cfg.make_solver_grid(),
                               cli.cfg.solver_options());
  json r{{"m_of_c", gs.m_of_c},
         {"iterations", gs.iterations},
         {"certificate",
          to_json(gs.certificate, p, cli.cfg.solver_options().tol)}};
  write_result(cli, r);
  return 0;
}

int run_mpass(const Cli& cli) {
  const auto p = cli.cfg.problem();
  auto mp = solve_mountain_pass(p, cli.cfg.make_solver_grid(),
                                cli.cfg.solver_options());
  json r{{"level", mp.level},
         {"m_of_c", mp.m_of_c},
         {"gap_to_bound", mp.gap_to_bound},
         {"iterations", mp.iterations},
         {"certificate",
          to_json(mp.certificate, p, cli.cfg.solver_options().tol)}};
  write_result(cli, r);
  return 0;
}

int run_fiber(const Cli& cli) {
  const auto p = cli.cfg.problem();
  const FiberCoeffs co{cli.fiber_A, cli.fiber_B, cli.fiber_C};
  const auto cp = critical_points(co, p);
  json r{{"s_minus", cp.s_minus},
         {"s_plus", cp.s_plus},
         {"psi_at_minus", cp.psi_at_minus},
         {"psi_at_plus", cp.psi_at_plus},
         {"second_deriv_at_plus", cp.second_deriv_at_plus},
         {"coeffs",
          {{"A", co.grad_sq}, {"B", co.lq_pow}, {"C", co.crit_pow}}}};
  write_result(cli, r);
  return 0;
}

int run_bubble(const Cli& cli) {
  const auto p = cli.cfg.problem();
  std::vector<double> eps = cli.cfg.eps_list;
  if (eps.empty())
    for (int k = 4; k <= 12; ++k) eps.push_back(std::pow(2.0, -k));
  const auto rep = asymptotic_exponents(eps, p);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < rep.eps.size(); ++i)
    rows.push_back({rep.eps[i], rep.norms[i].grad_sq, rep.norms[i].mass_sq,
                    rep.norms[i].lq_pow, rep.norms[i].crit_pow});
  if (cli.cfg.write_csv)
    write_csv(cli.cfg.out_dir + "/series.csv",
              {"eps", "grad_sq", "mass_sq", "lq_pow", "crit_pow"}, rows);
  auto fit_json = [](const ExponentFit& f) {
    return json{{"exponent", f.exponent},
                {"log_coeff", f.log_coeff},
                {"log_detected", f.log_detected}};
  };
  json r{{"grad_deficit_fit", fit_json(rep.grad_deficit_fit)},
         {"crit_deficit_fit", fit_json(rep.crit_deficit_fit)},
         {"mass_fit", fit_json(rep.mass_fit)},
         {"lq_fit", fit_json(rep.lq_fit)}};
  write_result(cli, r);
  return 0;
}

int run_path(const Cli& cli) {
  const auto p = cli.cfg.problem();
  const auto rep = build_and_check_path(p, cli.cfg.eps,
                                        cli.cfg.make_solver_grid(),
                                        cli.cfg.solver_options());
  if (cli.cfg.write_csv) {
    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < rep.t_nodes.size(); ++j)
      rows.push_back({rep.t_nodes[j], rep.masses[j], rep.energies[j],
                      rep.superadditive_bound[j]});
    write_csv(cli.cfg.out_dir + "/series.csv",
              {"t", "mass", "F_mu", "superadditive_bound"}, rows);
  }
  json r = to_json(rep);
  if (p.N >= 4) {
    if (!rep.below_bound)
      throw check_failure("path peak reached m(c) + S^{N/2}/N at N >= 4");
    r["strict_bound"] = "certified";
  } else {
    r["strict_bound"] = "not-certified (N=3)";
    std::cerr << "[note] N = 3: strict-bound assertion skipped\n";
  }
  write_result(cli, r);
  return 0;
}

int run_evolve(const Cli& cli) {
  const auto p = cli.cfg.problem();
  auto grid = cli.cfg.make_solver_grid();
  const auto opts = cli.cfg.solver_options();
  EvolveOptions eo;
  eo.T = cli.cfg.T;
  eo.dt = cli.cfg.dt;
  eo.absorber = cli.cfg.absorber;

  RadialFunction datum;
  if (cli.cfg.init == "ground") {
    datum = solve_ground_state(p, grid, opts).certificate.profile;
  } else if (cli.cfg.init == "mpass") {
    datum = rescale(solve_mountain_pass(p, grid, opts).certificate.profile,
                    cli.cfg.dilation);
  } else {
    throw std::invalid_argument("dynamics.init must be ground or mpass");
  }
  auto st = evolve(ComplexField::from_real(datum), p, eo);
  if (cli.cfg.write_csv) {
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < st.times.size(); ++i)
      rows.push_back(
          {st.times[i], st.mass[i], st.energy[i], st.grad_sq[i], st.sup_amp[i]});
    write_csv(cli.cfg.out_dir + "/series.csv",
              {"t", "mass", "energy", "grad_sq", "sup_amp"}, rows);
  }
  json r = to_json(st);
  auto cons = conservation_check(st);
  r["mass_drift_rate"] = cons.mass_drift_rate;
  r["energy_drift_rate"] = cons.energy_drift_rate;
  write_result(cli, r);
  return 0;
}

int run_sweep(const Cli& cli) {
  const auto p = cli.cfg.problem();
  std::vector<double> values = cli.cfg.values;
  if (values.empty())
    throw std::invalid_argument("sweep.values must be provided");
  const auto mode =
      cli.cfg.sweep_mode == "mu" ? SweepMode::mu_to_zero : SweepMode::c_to_zero;
  if (cli.cfg.sweep_mode != "mu" && cli.cfg.sweep_mode != "c")
    throw std::invalid_argument("sweep.mode must be c or mu");
  auto rows = asymptotic_sweep(mode, p, values, cli.cfg.make_solver_grid(),
                               cli.cfg.solver_options());
  std::vector<std::vector<double>> csv;
  json jrows = json::array();
  for (const auto& row : rows) {
    csv.push_back({row.parameter, row.grad_sq, row.level, row.mu_lq});
    jrows.push_back({{"parameter", row.parameter},
                     {"grad_sq", row.grad_sq},
                     {"level", row.level},
                     {"mu_lq", row.mu_lq},
                     {"ok", row.ok},
                     {"error", row.error}});
  }
  if (cli.cfg.write_csv)
    write_csv(cli.cfg.out_dir + "/series.csv",
              {"parameter", "grad_sq", "level", "mu_lq"}, csv);
  const double S = sobolev_constant(p.N);
  json r{{"rows", jrows},
         {"target_grad", std::pow(S, 0.5 * p.N)},
         {"target_level", std::pow(S, 0.5 * p.N) / p.N}};
  write_result(cli, r);
  return 0;
}

int run_certify(const Cli& cli) {
  if (cli.cfg.profile.empty())
    throw std::invalid_argument("certify requires --profile <result.json>");
  std::ifstream in(cli.cfg.profile);
  if (!in) throw std::invalid_argument("cannot open " + cli.cfg.profile);
  json stored = json::parse(in);
  json jprof = stored.contains("certificate")
                   ? stored["certificate"]["profile"]
                   : stored.at("profile");
  RadialFunction u = profile_from_json(jprof);
  ProblemParams p = cli.cfg.problem();
  if (stored.contains("config")) {
    const auto& jp = stored["config"]["problem"];
    p = ProblemParams::make(jp["N"], jp["mu"], jp["q"], jp["c"]);
  }
  const auto cert = certify(u, p);
  const bool ok = cert.valid(p, cli.cfg.solver_options().tol);
  std::cout << (ok ? "VALID" : "INVALID") << "\n";
  write_result(cli, json{{"certificate",
                          to_json(cert, p, cli.cfg.solver_options().tol)}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"normalized solutions of the Sobolev-critical NLS: solvers, "
               "test paths, bubbles and dynamics"};
  app.require_subcommand(1);

  Cli cli;
  std::string config_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value configuration file");
    sub->add_option("--N", cli.cfg.N, "space dimension");
    sub->add_option("--mu", cli.cfg.mu, "focusing strength of the q-term");
    sub->add_option("--q", cli.cfg.q, "subcritical exponent");
    sub->add_option("--c", cli.cfg.c, "prescribed mass");
    sub->add_option("--Rmax", cli.cfg.rmax, "truncation radius");
    sub->add_option("--M", cli.cfg.M, "grid intervals");
    sub->add_option("--seed", cli.cfg.seed, "rng seed");
    sub->add_option("--out", cli.cfg.out_dir, "output directory");
  };

  auto* ground = app.add_subcommand("ground", "local-minimum ground state");
  auto* mpass = app.add_subcommand("mpass", "mountain-pass solution");
  auto* fiber = app.add_subcommand("fiber", "fiber-map critical points");
  auto* bubble = app.add_subcommand("bubble", "truncated bubble asymptotics");
  auto* path = app.add_subcommand("path", "two-center test path");
  auto* evolve_cmd = app.add_subcommand("evolve", "radial NLS evolution");
  auto* sweep = app.add_subcommand("sweep", "asymptotic parameter sweep");
  auto* certify_cmd = app.add_subcommand("certify", "re-check a stored profile");

  for (auto* sub :
       {ground, mpass, fiber, bubble, path, evolve_cmd, sweep, certify_cmd})
    add_common(sub);

  fiber->add_option("--A", cli.fiber_A, "||grad u||^2");
  fiber->add_option("--B", cli.fiber_B, "||u||_q^q");
  fiber->add_option("--C", cli.fiber_C, "||u||_{2*}^{2*}");
  path->add_option("--eps", cli.cfg.eps, "bubble scale");
  bubble->add_option("--eps-list", cli.cfg.eps_list, "bubble scales");
  evolve_cmd->add_option("--T", cli.cfg.T, "horizon");
  evolve_cmd->add_option("--dt", cli.cfg.dt, "time step");
  evolve_cmd->add_option("--init", cli.cfg.init, "ground | mpass");
  evolve_cmd->add_option("--dilation", cli.cfg.dilation, "fiber dilation of the datum");
  evolve_cmd->add_flag("--absorber", cli.cfg.absorber, "absorbing layer near rmax");
  sweep->add_option("--mode", cli.cfg.sweep_mode, "c | mu");
  sweep->add_option("--values", cli.cfg.values, "decreasing list");
  certify_cmd->add_option("--profile", cli.cfg.profile, "stored result.json");

  try {
    app.parse(argc, argv);
    if (!config_path.empty()) {
      RunConfig from_file = parse_config_file(config_path);
      // flags win over the file: re-apply by parsing argv again onto the
      // file-based config
      std::swap(cli.cfg, from_file);
      app.clear();
      app.parse(argc, argv);
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // help/version vs usage error
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  CLI::App* sub = app.get_subcommands().front();
  cli.command = sub->get_name();

  try {
    if (sub == ground) return run_ground(cli);
    if (sub == mpass) return run_mpass(cli);
    if (sub == fiber) return run_fiber(cli);
    if (sub == bubble) return run_bubble(cli);
    if (sub == path) return run_path(cli);
    if (sub == evolve_cmd) return run_evolve(cli);
    if (sub == sweep) return run_sweep(cli);
    if (sub == certify_cmd) return run_certify(cli);
    std::cerr << "unknown command\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    write_diagnostic(cli, "invalid-argument", e.what());
    return 1;
  } catch (const check_failure& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    write_diagnostic(cli, "check-failure", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    write_diagnostic(cli, "numeric-error", e.what());
    return 3;
  }
}
