#include "nlsnorm/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlsnorm {

GridPtr RunConfig::make_solver_grid() const {
  const GridStretch s =
      stretching == "uniform" ? GridStretch::uniform : GridStretch::graded;
  if (stretching != "uniform" && stretching != "graded")
    throw std::invalid_argument("grid.stretching must be uniform or graded");
  if (rmax <= 0.0) return recommended_ground_grid(problem(), M, grade);
  return make_grid(N, rmax, M, s, grade);
}

SolverOptions RunConfig::solver_options() const {
  SolverOptions o;
  o.tol = Tolerances{tol_q, tol_m, tol_e};
  o.max_iters = max_iters;
  o.seed = seed;
  o.bubble_eps = bubble_eps;
  return o;
}

namespace {

double parse_double(const std::string& v) {
  std::size_t pos = 0;
  const double d = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument("bad numeric value: " + v);
  return d;
}

std::vector<double> parse_list(const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(parse_double(item));
  }
  if (out.empty()) throw std::invalid_argument("empty list value");
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::invalid_argument("bad boolean value: " + v);
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "problem.N") cfg.N = static_cast<int>(parse_double(value));
  else if (key == "problem.mu") cfg.mu = parse_double(value);
  else if (key == "problem.q") cfg.q = parse_double(value);
  else if (key == "problem.c") cfg.c = parse_double(value);
  else if (key == "grid.rmax") cfg.rmax = parse_double(value);
  else if (key == "grid.M") cfg.M = static_cast<int>(parse_double(value));
  else if (key == "grid.stretching") cfg.stretching = value;
  else if (key == "grid.grade") cfg.grade = parse_double(value);
  else if (key == "solver.tol_q") cfg.tol_q = parse_double(value);
  else if (key == "solver.tol_m") cfg.tol_m = parse_double(value);
  else if (key == "solver.tol_e") cfg.tol_e = parse_double(value);
  else if (key == "solver.max_iters") cfg.max_iters = static_cast<int>(parse_double(value));
  else if (key == "solver.seed") cfg.seed = static_cast<unsigned long long>(parse_double(value));
  else if (key == "solver.bubble_eps") cfg.bubble_eps = parse_double(value);
  else if (key == "dynamics.T") cfg.T = parse_double(value);
  else if (key == "dynamics.dt") cfg.dt = parse_double(value);
  else if (key == "dynamics.dilation") cfg.dilation = parse_double(value);
  else if (key == "dynamics.absorber") cfg.absorber = parse_bool(value);
  else if (key == "dynamics.init") cfg.init = value;
  else if (key == "dynamics.dilations") cfg.dilations = parse_list(value);
  else if (key == "sweep.mode") cfg.sweep_mode = value;
  else if (key == "sweep.values") cfg.values = parse_list(value);
  else if (key == "bubble.eps_list") cfg.eps_list = parse_list(value);
  else if (key == "path.eps") cfg.eps = parse_double(value);
  else if (key == "output.dir") cfg.out_dir = value;
  else if (key == "output.json") cfg.write_json = parse_bool(value);
  else if (key == "output.csv") cfg.write_csv = parse_bool(value);
  else if (key == "certify.profile") cfg.profile = value;
  else throw std::invalid_argument("unknown configuration key: " + key);
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file: " + path);
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto strip = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      if (a == std::string::npos) return std::string();
      const auto b = s.find_last_not_of(" \t\r");
      return s.substr(a, b - a + 1);
    };
    line = strip(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key = value");
    apply_config_entry(cfg, strip(line.substr(0, eq)),
                       strip(line.substr(eq + 1)));
  }
  return cfg;
}

std::string format_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v,
                           std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::filesystem::path fp(path);
  if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::string body;
  for (std::size_t i = 0; i < header.size(); ++i) {
    body += header[i];
    body += (i + 1 < header.size()) ? ',' : '\n';
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      body += format_double(row[i]);
      body += (i + 1 < row.size()) ? ',' : '\n';
    }
  }
  write_text_file(path, body);
}

nlohmann::json to_json(const RunConfig& cfg) {
  return {
      {"problem", {{"N", cfg.N}, {"mu", cfg.mu}, {"q", cfg.q}, {"c", cfg.c}}},
      {"grid",
       {{"rmax", cfg.rmax},
        {"M", cfg.M},
        {"stretching", cfg.stretching},
        {"grade", cfg.grade}}},
      {"solver",
       {{"tol_q", cfg.tol_q},
        {"tol_m", cfg.tol_m},
        {"tol_e", cfg.tol_e},
        {"max_iters", cfg.max_iters},
        {"seed", cfg.seed},
        {"bubble_eps", cfg.bubble_eps}}},
      {"dynamics",
       {{"T", cfg.T},
        {"dt", cfg.dt},
        {"dilation", cfg.dilation},
        {"absorber", cfg.absorber},
        {"init", cfg.init}}},
      {"output", {{"dir", cfg.out_dir}}},
  };
}

nlohmann::json to_json(const RadialFunction& u) {
  const RadialGrid& g = *u.grid;
  // nodes are reproducible from the metadata; only samples are stored
  double grade = 1.0;
  std::string stretching = "uniform";
  if (g.intervals() >= 2) {
    const double ratio = std::log(g.r[1] / g.rmax()) /
                         std::log(1.0 / double(g.intervals()));
    if (std::abs(ratio - 1.0) > 1e-9) {
      stretching = "graded";
      grade = ratio;
    }
  }
  return {{"grid",
           {{"dim", g.dim},
            {"rmax", g.rmax()},
            {"M", g.intervals()},
            {"stretching", stretching},
            {"grade", grade}}},
          {"values", u.values}};
}

RadialFunction profile_from_json(const nlohmann::json& j) {
  const auto& jg = j.at("grid");
  const auto stretching = jg.at("stretching").get<std::string>();
  auto grid = make_grid(jg.at("dim").get<int>(), jg.at("rmax").get<double>(),
                        jg.at("M").get<int>(),
                        stretching == "uniform" ? GridStretch::uniform
                                                : GridStretch::graded,
                        jg.value("grade", 1.0));
  auto values = j.at("values").get<std::vector<double>>();
  if (values.size() != grid->size())
    throw std::invalid_argument("profile_from_json: sample count mismatch");
  return RadialFunction(grid, std::move(values));
}

nlohmann::json to_json(const SolutionCertificate& cert, const ProblemParams& p,
                       const Tolerances& tol) {
  return {{"energy", cert.energy},
          {"pohozaev_defect", cert.pohozaev_defect},
          {"multiplier", cert.multiplier},
          {"equation_residual", cert.equation_residual},
          {"mass_defect", cert.mass_defect},
          {"grad_sq", cert.grad_sq},
          {"classification", cert.classification == Branch::lambda_minus
                                 ? "lambda_minus"
                                 : "lambda_plus"},
          {"valid", cert.valid(p, tol)},
          {"profile", to_json(cert.profile)}};
}

nlohmann::json to_json(const PathReport& rep) {
  return {{"eps", rep.eps},
          {"t0", rep.t0},
          {"t1", rep.t1},
          {"c_n", rep.c_n},
          {"separation", rep.separation},
          {"m_c", rep.m_c},
          {"m_cn", rep.m_cn},
          {"max_energy", rep.max_energy},
          {"argmax_t", rep.argmax_t},
          {"bound", rep.bound},
          {"gap", rep.gap},
          {"below_bound", rep.below_bound}};
}

nlohmann::json to_json(const TrajectoryStats& st) {
  return {{"blowup_detected", st.blowup_detected},
          {"blowup_time", st.blowup_time},
          {"variance0", st.variance0},
          {"samples", st.times.size()}};
}

}  // namespace nlsnorm
