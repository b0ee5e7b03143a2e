#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "nlsnorm/bubble.hpp"
#include "nlsnorm/dynamics.hpp"
#include "nlsnorm/energy.hpp"
#include "nlsnorm/pathlab.hpp"
#include "nlsnorm/solvers.hpp"

namespace nlsnorm {

// Flat key = value configuration with dotted sections; '#' starts a comment.
// Unknown keys are rejected.
struct RunConfig {
  // problem.*
  int N = 4;
  double mu = 1.0;
  double q = 2.5;
  double c = 1.0;
  // grid.*
  double rmax = 0.0;  // 0: size the box from a scout solve
  int M = 4096;
  std::string stretching = "graded";  // uniform | graded
  double grade = 4.0;
  // solver.*
  double tol_q = 1e-6, tol_m = 1e-6, tol_e = 1e-5;
  int max_iters = 40000;
  unsigned long long seed = 1;
  double bubble_eps = 0.0;
  // dynamics.*
  double T = 10.0;
  double dt = 2e-4;
  double dilation = 1.1;
  bool absorber = false;
  std::string init = "ground";  // ground | mpass
  // sweep.* / bubble.* / path.*
  std::string sweep_mode = "c";  // c | mu
  std::vector<double> values;    // sweep parameter list
  std::vector<double> eps_list;  // bubble scales
  std::vector<double> dilations = {1.05, 1.1, 1.2};
  double eps = 0.05;  // path bubble scale
  // output.*
  std::string out_dir = "out";
  bool write_json = true;
  bool write_csv = true;
  std::string profile;  // input for `certify`

  ProblemParams problem() const { return ProblemParams::make(N, mu, q, c); }
  GridPtr make_solver_grid() const;
  SolverOptions solver_options() const;
};

// Applies one key = value pair; throws std::invalid_argument on unknown keys
// or unparsable values.
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);
RunConfig parse_config_file(const std::string& path);

// Locale-independent full-precision formatting (17 significant digits).
std::string format_double(double v);

void write_text_file(const std::string& path, const std::string& content);
void write_csv(const std::string& path,
               const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

nlohmann::json to_json(const RunConfig& cfg);
nlohmann::json to_json(const RadialFunction& u);
nlohmann::json to_json(const SolutionCertificate& cert, const ProblemParams& p,
                       const Tolerances& tol);
nlohmann::json to_json(const PathReport& rep);
nlohmann::json to_json(const TrajectoryStats& st);

// Rebuilds a profile from its stored grid metadata + samples.
RadialFunction profile_from_json(const nlohmann::json& j);

}  // namespace nlsnorm
