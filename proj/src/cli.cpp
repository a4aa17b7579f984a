#include "membrane/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <map>
#include <ostream>
#include <sstream>

#include "membrane/eigensolver.hpp"
#include "membrane/errors.hpp"
#include "membrane/fem.hpp"
#include "membrane/optimize.hpp"
#include "membrane/radial.hpp"
#include "membrane/report.hpp"
#include "membrane/specfun.hpp"

namespace membrane::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

void prepare_output_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());
  }
  // Probe writability up front so no computation is wasted.
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream test(probe);
    if (!test) throw std::runtime_error("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

Json config_json(const RunConfig& config) {
  Json j = Json::object();
  for (const auto& [key, value] : config.entries()) j[key] = value;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string to_text(const std::function<void(std::ostream&)>& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

}  // namespace

int cmd_radial(const RunConfig& config, std::ostream& out) {
  const radial::RadialOptimum opt = radial::solve_radial(config.lambda, config.m);
  prepare_output_dir(config.out);
  const double residual = radial::smooth_fit_residual(opt.a_bar, opt.lambda1);

  write_text_file(config.out / "radial_profile.csv",
                  to_text([&](std::ostream& s) { radial::write_profile_csv(s, opt, config.samples); }));
  Json report;
  report["config"] = config_json(config);
  report["result"] = {{"lambda1", opt.lambda1},
                      {"m", opt.m},
                      {"a_bar", opt.a_bar},
                      {"mass_L", opt.mass_L},
                      {"r_peak", opt.r_peak},
                      {"c1", opt.c1},
                      {"c0", opt.c0},
                      {"smooth_fit_residual", residual},
                      {"rayleigh_argmin", opt.rayleigh_argmin}};
  report["fields"] = {{"profile", "radial_profile.csv"}};
  write_text_file(config.out / "radial.json", dump(report));

  out << "a_bar = " << format_number(opt.a_bar) << '\n'
      << "L = " << format_number(opt.mass_L) << '\n'
      << "r_peak = " << format_number(opt.r_peak) << '\n'
      << "smooth_fit_residual = " << format_number(residual) << '\n'
      << "rayleigh_argmin = " << format_number(opt.rayleigh_argmin) << '\n';
  return kSuccess;
}

int cmd_optimize(const RunConfig& config, std::ostream& out) {
  const Mesh mesh = config.build_mesh();
  prepare_output_dir(config.out);

  ContinuationSchedule schedule;
  schedule.p_values = config.p_schedule;
  schedule.inner_tol = config.tol.value_or(1e-8);
  schedule.inner_max_iter = config.max_iter.value_or(2000);
  schedule.damping = config.damping;
  schedule.eigen.tol = config.eig_tol;

  DensityOptimizer optimizer(mesh, config.m, config.mass_L);
  const ContinuationReport result = continuation_solve(optimizer, schedule);

  Json stages = Json::array();
  for (const StageRecord& s : result.stages) {
    out << "p = " << format_number(s.p) << "  iters = " << s.iterations
        << "  lambda1 = " << format_number(s.lambda1) << "  theta_delta = " << format_number(s.theta_delta)
        << (s.converged ? "" : "  (not converged)") << '\n';
    stages.push_back({{"p", s.p},
                      {"iters", s.iterations},
                      {"lambda1", s.lambda1},
                      {"lp_mass", s.lp_mass},
                      {"theta_delta", s.theta_delta},
                      {"damping", s.damping},
                      {"converged", s.converged},
                      {"upper_bound", s.upper_bound},
                      {"lambda1_feasible", s.lambda1_feasible},
                      {"gap", s.gap}});
  }

  write_text_file(config.out / "theta.csv", to_text([&](std::ostream& s) {
                    write_triangle_field_csv(s, mesh, result.theta.values);
                  }));
  write_text_file(config.out / "u.csv", to_text([&](std::ostream& s) {
                    write_node_field_csv(s, mesh, result.eigen.u);
                  }));

  Json report;
  report["params"] = {{"m", config.m},
                      {"L", config.mass_L},
                      {"schedule",
                       {{"p_values", schedule.p_values},
                        {"inner_tol", schedule.inner_tol},
                        {"inner_max_iter", schedule.inner_max_iter},
                        {"damping", schedule.damping},
                        {"eigen_tol", schedule.eigen.tol}}},
                      {"domain", config.domain.to_string()},
                      {"nodes", mesh.num_nodes()},
                      {"triangles", mesh.num_triangles()}};
  report["config"] = config_json(config);
  report["stages"] = stages;
  if (result.completed) {
    const double p_last = schedule.p_values.back();
    report["final"] = {
        {"lambda1", result.eigen.lambda},
        {"lambda1_feasible", result.certificate.lambda1_feasible},
        {"upper_bound", result.certificate.upper_bound},
        {"gap", result.certificate.gap},
        {"relative_gap", result.certificate.relative_gap},
        {"support_violation", support_violation(mesh, result.theta, result.eigen.u, 0.1, config.mass_L)},
        {"gradient_ratio_mean", gradient_norm_ratio(mesh, result.eigen.u, p_last, true)},
        {"gradient_ratio_plain", gradient_norm_ratio(mesh, result.eigen.u, p_last, false)}};
  } else {
    report["final"] = nullptr;
    report["failure"] = result.failure;
  }
  report["fields"] = {{"theta", "theta.csv"}, {"u", "u.csv"}};
  write_text_file(config.out / "report.json", dump(report));

  if (!result.completed) throw NumericalFailure(result.failure);
  out << "lambda1 = " << format_number(result.eigen.lambda) << '\n'
      << "lambda1_feasible = " << format_number(result.certificate.lambda1_feasible) << '\n'
      << "upper_bound = " << format_number(result.certificate.upper_bound) << '\n'
      << "gap = " << format_number(result.certificate.gap) << '\n';
  return kSuccess;
}

int cmd_eigen(const RunConfig& config, std::ostream& out) {
  const Mesh mesh = config.build_mesh();
  DensityField theta = config.theta ? read_density_csv(*config.theta, mesh) : DensityField::zero(mesh);
  prepare_output_dir(config.out);

  const FemSpace space(mesh, Block::kInterior);
  const CsrMatrix k = space.stiffness(theta, config.m);
  const CsrMatrix m = space.mass();
  const EigenPair pair = smallest_eigenpair(k, m, config.tol.value_or(1e-10), config.max_iter.value_or(500));
  const std::vector<double> u = space.dofs().extend_to_nodes(pair.u);

  write_text_file(config.out / "eigen.csv",
                  to_text([&](std::ostream& s) { write_eigenfunction_csv(s, mesh, u); }));
  Json report;
  report["config"] = config_json(config);
  report["result"] = {{"lambda1", pair.lambda},
                      {"residual", pair.residual},
                      {"iterations", pair.iterations},
                      {"converged", pair.converged},
                      {"nodes", mesh.num_nodes()},
                      {"triangles", mesh.num_triangles()}};
  report["fields"] = {{"u", "eigen.csv"}};
  write_text_file(config.out / "eigen.json", dump(report));

  if (!pair.converged) {
    throw NumericalFailure("eigen solve did not reach tol after " + std::to_string(pair.iterations) +
                           " iterations (residual " + format_number(pair.residual) + ")");
  }
  out << "lambda1 = " << format_number(pair.lambda) << '\n'
      << "residual = " << format_number(pair.residual) << '\n';
  return kSuccess;
}

int cmd_mesh(const RunConfig& config, std::ostream& out) {
  const Mesh mesh = config.build_mesh();
  prepare_output_dir(config.out);
  write_text_file(config.out / "mesh.txt", to_text([&](std::ostream& s) { save_mesh(mesh, s); }));
  out << "nodes = " << mesh.num_nodes() << '\n'
      << "triangles = " << mesh.num_triangles() << '\n'
      << "area = " << format_number(mesh.total_area()) << '\n';
  return kSuccess;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal reinforcement of a membrane for its first Dirichlet eigenvalue"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::map<std::string, std::string> given;
  std::string config_path;
  const auto add = [&](CLI::App* sub, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        "--" + key, [&given, key](const std::string& v) { given[key] = v; }, help);
  };

  struct Sub {
    const char* name;
    const char* help;
    std::vector<std::pair<const char*, const char*>> keys;
  };
  const std::vector<Sub> subs = {
      {"radial", "Exact optimal density on the unit disk for a given eigenvalue",
       {{"lambda", "target eigenvalue (> j00^2)"}, {"m", "stiffness coefficient"},
        {"samples", "profile rows (default 512)"}, {"out", "output directory"}}},
      {"optimize", "p-continuation density optimizer with min-max certificate",
       {{"domain", "disk | rect | file:PATH"}, {"refinement", "mesh refinement"},
        {"m", "stiffness coefficient"}, {"mass-L", "reinforcement mass L"},
        {"p-schedule", "comma-separated decreasing p values"}, {"tol", "fixed-point tolerance"},
        {"max-iter", "fixed-point iteration cap per stage"}, {"damping", "initial relaxation in (0,1]"},
        {"eig-tol", "eigen residual tolerance"}, {"out", "output directory"}}},
      {"eigen", "Smallest Dirichlet eigenpair for a given density",
       {{"domain", "disk | rect | file:PATH"}, {"refinement", "mesh refinement"},
        {"m", "stiffness coefficient"}, {"theta", "density CSV (tri_or_node,x,y,value)"},
        {"tol", "eigen residual tolerance"}, {"max-iter", "iteration cap"}, {"out", "output directory"}}},
      {"mesh", "Write a mesh in the text format",
       {{"domain", "disk | rect | file:PATH"}, {"refinement", "mesh refinement"},
        {"out", "output directory"}}},
  };
  std::map<std::string, CLI::App*> commands;
  for (const Sub& s : subs) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    for (const auto& [key, help] : s.keys) add(sub, key, help);
    sub->add_option("--config", config_path, "key=value config file (flags override)");
    commands[s.name] = sub;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  RunConfig config;
  for (const auto& [name, sub] : commands) {
    if (sub->parsed()) config.command = name;
  }
  try {
    if (!config_path.empty()) {
      for (const auto& [key, value] : parse_key_values(std::filesystem::path(config_path))) {
        try {
          config.set(key, value);
        } catch (const std::invalid_argument& e) {
          throw std::invalid_argument(config_path + ": " + e.what());
        }
      }
    }
    for (const auto& [key, value] : given) config.set(key, value);
    config.validate();

    if (config.command == "radial") return cmd_radial(config, out);
    if (config.command == "optimize") return cmd_optimize(config, out);
    if (config.command == "eigen") return cmd_eigen(config, out);
    if (config.command == "mesh") return cmd_mesh(config, out);
    err << "error: unknown command\n";
    return kUsageError;
  } catch (const NumericalFailure& e) {
    err << "error: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
}

}  // namespace membrane::cli
