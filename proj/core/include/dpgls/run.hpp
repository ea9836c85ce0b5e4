#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dpgls/problems.hpp"
#include "dpgls/solver.hpp"

namespace dpgls {

/// Batch run configuration; mirrors the flat key=value config file, each key
/// named exactly like the field.
struct RunConfig {
  std::string problem = "square";  // "square" | "lshape" | mesh file path
  std::string model = "example-a";
  std::string refine = "uniform";  // "uniform" | "adaptive"
  double theta = 0.3;
  int levels = 100;
  long max_ndof = 100000;
  double newton_tol = 1e-12;
  int newton_maxiter = 20;
  // "prolongate" starts from the problem's default linear solve on level 0
  // and prolongates afterwards; "linear:<w>" re-initializes every level.
  std::string init = "prolongate";
  std::string out = "";  // output directory; empty disables file output
  std::optional<double> eref;   // reference energy override
  std::optional<double> c_df;   // discrete Friedrichs override
  std::optional<double> kappa;  // interpolation constant override
  std::optional<double> c_f;    // Friedrichs constant override
  long gevp_max_ndof = 40000;   // skip the eigenvalue solve above this size
  bool write_meshes = true;

  void validate() const;  // throws std::invalid_argument on bad values
};

/// One per-level row of the convergence history. Quantities that are not
/// available (no exact solution, eigensolve skipped, ...) stay unset and are
/// exported as empty CSV fields.
struct RunRecord {
  int level = 0;
  long ndof = 0;
  int newton_iters = 0;
  double eta = 0.0;
  std::optional<double> energy_diff_sqrt;
  double vmax = 0.0;
  std::optional<double> error_energy;
  std::optional<double> error_hdiv;
  std::optional<double> lambda_min;
  std::optional<double> lambda_max;
  std::optional<double> guaranteed;
  std::optional<bool> uniqueness_flag;
  double wall_time = 0.0;
  double final_dual_norm = 0.0;  // residual accuracy of the Newton solve
  double energy_value = 0.0;
};

struct RunResult {
  std::vector<RunRecord> records;
  int exit_status = 0;  // 0 ok, 2 Newton failure
  std::string error;
  bool damping_used = false;
};

/// The adaptive algorithm: solve, estimate, record, mark, refine, until the
/// level or ndof budget is exhausted. Uniform runs red-refine instead of
/// marking. A Newton failure aborts with the records so far preserved.
/// Progress lines go to `log` when given.
RunResult adaptive_loop(const RunConfig& config, std::ostream* log = nullptr);

inline constexpr const char* kCsvHeader =
    "level,ndof,newton_iters,eta,energy_diff_sqrt,vmax,error_energy,"
    "error_hdiv,lambda_min,lambda_max,guaranteed_bound,uniqueness_flag,"
    "wall_time";

/// Byte-deterministic CSV export (12 significant digits, empty fields for
/// unavailable quantities).
void export_csv(const std::vector<RunRecord>& records, std::ostream& out);
void export_csv(const std::vector<RunRecord>& records,
                const std::string& path);

/// Flat key=value configuration file; '#' starts a comment. Unknown keys are
/// rejected.
RunConfig parse_config_file(const std::string& path);
void apply_config_line(RunConfig& config, const std::string& line);

}  // namespace dpgls
