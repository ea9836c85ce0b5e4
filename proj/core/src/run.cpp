#include "dpgls/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dpgls {

namespace {

std::string fmt12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", x);
  return buf;
}

std::string opt12(const std::optional<double>& x) {
  return x ? fmt12(*x) : std::string();
}

Problem build_problem(const RunConfig& config, const PhiModel& model) {
  if (config.problem == "square") return make_square_problem(model);
  if (config.problem == "lshape") return make_lshape_problem(model);
  return make_custom_problem(config.problem, model);
}

}  // namespace

void RunConfig::validate() const {
  if (!(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("theta must lie in (0,1)");
  }
  if (levels <= 0) throw std::invalid_argument("levels must be positive");
  if (max_ndof <= 0) throw std::invalid_argument("max_ndof must be positive");
  if (!(newton_tol > 0.0)) {
    throw std::invalid_argument("newton_tol must be positive");
  }
  if (newton_maxiter <= 0) {
    throw std::invalid_argument("newton_maxiter must be positive");
  }
  if (gevp_max_ndof <= 0) {
    throw std::invalid_argument("gevp_max_ndof must be positive");
  }
  if (refine != "uniform" && refine != "adaptive") {
    throw std::invalid_argument("refine must be 'uniform' or 'adaptive'");
  }
  if (init != "prolongate" && init.rfind("linear:", 0) != 0) {
    throw std::invalid_argument("init must be 'prolongate' or 'linear:<w>'");
  }
  for (auto opt : {c_df, kappa, c_f}) {
    if (opt && !(*opt > 0.0)) {
      throw std::invalid_argument("constants must be positive");
    }
  }
}

RunResult adaptive_loop(const RunConfig& config, std::ostream* log) {
  config.validate();
  const PhiModel model = PhiModel::from_name(config.model);
  Problem problem = build_problem(config, model);

  const std::optional<double> eref =
      config.eref ? config.eref : problem.reference_energy;
  const std::optional<double> c_f =
      config.c_f ? config.c_f : problem.friedrichs_constant;
  const std::optional<double> c_df =
      config.c_df ? config.c_df : problem.discrete_friedrichs;
  const double kappa = config.kappa.value_or(kKappaDefault);

  double init_weight = problem.default_init_weight;
  bool prolongate_levels = true;
  if (config.init.rfind("linear:", 0) == 0) {
    init_weight = std::stod(config.init.substr(7));
    prolongate_levels = false;
    if (!(init_weight > 0.0)) {
      throw std::invalid_argument("init weight must be positive");
    }
  }

  const bool write_files = !config.out.empty();
  if (write_files) {
    std::filesystem::create_directories(config.out);
  }

  RunResult result;
  Mesh mesh = problem.initial_mesh;
  std::optional<Mesh> prev_mesh;
  DiscreteState prev_state;

  for (int level = 0; level < config.levels; ++level) {
    const auto t_start = std::chrono::steady_clock::now();
    const DofLayout dofs(mesh);
    if (dofs.ndof > config.max_ndof) break;

    const auto weights = compute_weights(mesh, problem.f);
    const XNormOperator xnorm(mesh);

    DiscreteState start;
    if (level > 0 && prolongate_levels) {
      start = prolongate(*prev_mesh, mesh, prev_state);
    } else {
      start = linear_init(mesh, dofs, init_weight, weights);
    }

    NewtonReport newton_report =
        newton(mesh, dofs, model, weights, start, xnorm,
               {config.newton_tol, config.newton_maxiter});
    result.damping_used |= newton_report.damping_used;
    if (newton_report.failed()) {
      result.exit_status = 2;
      result.error = "level " + std::to_string(level) + ": " +
                     newton_report.error;
      if (write_files) {
        export_csv(result.records,
                   (std::filesystem::path(config.out) / "records.csv")
                       .string());
      }
      return result;
    }
    DiscreteState state = newton_report.state;
    state.v = riesz_representer(mesh, dofs, model, weights, state);

    RunRecord rec;
    rec.level = level;
    rec.ndof = dofs.ndof;
    rec.newton_iters = newton_report.iterations;
    rec.final_dual_norm = newton_report.dual_norms.back();

    const Eigen::VectorXd eta_sq =
        local_estimator_sq(mesh, dofs, model, weights, state);
    rec.eta = eta_global(eta_sq);

    rec.energy_value = energy(mesh, dofs, model, problem.f, state);
    if (eref) {
      const double diff = rec.energy_value - *eref;
      rec.energy_diff_sqrt = diff >= 0.0 ? std::sqrt(diff) : 0.0;
    }

    if (c_f) {
      const UniquenessCheck uc = uniqueness_check(mesh, model, state, *c_f);
      rec.vmax = uc.vmax;
      rec.uniqueness_flag = uc.satisfied;
    } else {
      UniquenessCheck uc = uniqueness_check(mesh, model, state, 1.0);
      rec.vmax = uc.vmax;  // vmax is independent of the constant
    }

    if (problem.exact) {
      const auto [ee, eh] =
          exact_errors(mesh, dofs, model, state, *problem.exact, problem.f);
      rec.error_energy = ee;
      rec.error_hdiv = eh;
    }

    if (dofs.ndof <= config.gevp_max_ndof) {
      const SparseMat hess = ls_hessian(mesh, dofs, model, weights, state);
      const GevpResult gevp = gevp_extremes(hess, xnorm);
      rec.lambda_min = gevp.lambda_min;
      rec.lambda_max = gevp.lambda_max;
    }

    if (c_df) {
      rec.guaranteed =
          guaranteed_bound(mesh, dofs, model, weights, state, *c_df, kappa);
    }

    rec.wall_time = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t_start)
                        .count();
    result.records.push_back(rec);

    if (log) {
      (*log) << "level " << rec.level << ": ndof " << rec.ndof << ", eta "
             << rec.eta << ", newton " << rec.newton_iters << " (acc "
             << rec.final_dual_norm << ")";
      if (rec.uniqueness_flag) {
        (*log) << ", vmax " << rec.vmax << " vs threshold "
               << uniqueness_check(mesh, model, state, *c_f).threshold
               << (problem.name == "square"
                       ? " (reported literal 0.17239892)"
                       : "")
               << (*rec.uniqueness_flag ? " -> unique" : " -> open");
      }
      if (rec.guaranteed && !problem.discrete_friedrichs && config.c_df) {
        (*log) << ", guaranteed bound conditional on user C_dF";
      }
      (*log) << "\n";
    }

    if (write_files && config.write_meshes) {
      char name[32];
      std::snprintf(name, sizeof(name), "mesh_%03d.txt", level);
      write_mesh(mesh,
                 (std::filesystem::path(config.out) / name).string());
    }

    if (level + 1 >= config.levels) break;
    prev_mesh = mesh;
    prev_state = state;
    if (config.refine == "uniform") {
      mesh = refine_uniform_nvb(mesh);
    } else {
      const auto marked = doerfler_mark(eta_sq, config.theta);
      mesh = refine_nvb(mesh, marked);
    }
  }

  if (write_files) {
    export_csv(result.records,
               (std::filesystem::path(config.out) / "records.csv").string());
  }
  return result;
}

void export_csv(const std::vector<RunRecord>& records, std::ostream& out) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.level << ',' << r.ndof << ',' << r.newton_iters << ','
        << fmt12(r.eta) << ',' << opt12(r.energy_diff_sqrt) << ','
        << fmt12(r.vmax) << ',' << opt12(r.error_energy) << ','
        << opt12(r.error_hdiv) << ',' << opt12(r.lambda_min) << ','
        << opt12(r.lambda_max) << ',' << opt12(r.guaranteed) << ','
        << (r.uniqueness_flag ? (*r.uniqueness_flag ? "1" : "0") : "") << ','
        << fmt12(r.wall_time) << '\n';
  }
}

void export_csv(const std::vector<RunRecord>& records,
                const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open CSV file for writing: " + path);
  }
  export_csv(records, out);
  if (!out.good()) {
    throw std::runtime_error("write failed for CSV file: " + path);
  }
}

void apply_config_line(RunConfig& config, const std::string& raw) {
  std::string line = raw;
  if (const auto hash = line.find('#'); hash != std::string::npos) {
    line.erase(hash);
  }
  auto trim = [](std::string s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return std::string();
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
  };
  line = trim(line);
  if (line.empty()) return;
  const auto eq = line.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("config line without '=': " + raw);
  }
  const std::string key = trim(line.substr(0, eq));
  const std::string value = trim(line.substr(eq + 1));
  if (key == "problem") config.problem = value;
  else if (key == "model") config.model = value;
  else if (key == "refine") config.refine = value;
  else if (key == "theta") config.theta = std::stod(value);
  else if (key == "levels") config.levels = std::stoi(value);
  else if (key == "max_ndof") config.max_ndof = std::stol(value);
  else if (key == "newton_tol") config.newton_tol = std::stod(value);
  else if (key == "newton_maxiter") config.newton_maxiter = std::stoi(value);
  else if (key == "init") config.init = value;
  else if (key == "out") config.out = value;
  else if (key == "eref") config.eref = std::stod(value);
  else if (key == "c_df") config.c_df = std::stod(value);
  else if (key == "kappa") config.kappa = std::stod(value);
  else if (key == "c_f") config.c_f = std::stod(value);
  else if (key == "gevp_max_ndof") config.gevp_max_ndof = std::stol(value);
  else if (key == "write_meshes") config.write_meshes = value == "1" || value == "true";
  else throw std::invalid_argument("unknown config key: " + key);
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  RunConfig config;
  std::string line;
  while (std::getline(in, line)) {
    apply_config_line(config, line);
  }
  return config;
}

}  // namespace dpgls
