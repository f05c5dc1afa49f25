#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "biotfs/cases.hpp"

namespace biotfs {

struct SweepConfig {
  std::string case_id;
  std::vector<double> variations; ///< values on the case axis; empty = case defaults
  double omega_start = 0.5;
  double omega_end = 1.3;
  double omega_step = 0.01;
  int mesh_n = 16;
  double dt = 0.01;
  double t_end = 0.5;
  double tol_rel = 1e-6;
  int max_iter = 2000;
  std::string out_dir = "sweep_out";
  int workers = 0;     ///< 0 = hardware concurrency
  bool timing = false; ///< record wall times; default off so CSVs are deterministic
};

struct SweepRow {
  std::string case_id;
  std::string variation; ///< "nu=0.2" or "k=1mD"
  double variation_value = 0.0;
  double omega = 0.0;
  double kdr_pa = 0.0;
  long iterations = 0;
  bool converged = false;
  double wall_s = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows; ///< sorted by (variation_value, omega)
};

/// The omega values of the sweep; each value is canonicalized so that its
/// CSV representation parses back to the identical double.
std::vector<double> omega_grid(const SweepConfig& cfg);

/// Run one simulation per (variation, omega) pair over a worker pool.
/// Results are gathered into config order, so the table content is
/// independent of the worker count. Nonconvergent runs are kept with
/// converged=false and their accumulated count.
SweepTable run_sweep(const SweepConfig& cfg);

struct OptimalOmega {
  double omega = 0.0;
  long iterations = 0;
};

/// Minimal accumulated iterations among converged rows of the variation;
/// ties break toward smaller omega. Empty optional when no row converged.
std::optional<OptimalOmega> find_optimal_omega(const SweepTable& table,
                                               const std::string& variation);

/// Exact bytes of the CSV report:
/// header case,variation,omega,kdr_pa,iterations,converged,wall_s then one
/// row per table row, '.' decimal separator, LF line endings.
std::string csv_string(const SweepTable& table);

SweepTable parse_sweep_csv(std::istream& in);

/// Write <case>_sweep.csv, <case>_summary.md and one two-column
/// "omega iterations" data file per variation into out_dir.
/// Returns the paths written.
std::vector<std::string> write_reports(const SweepTable& table,
                                       const std::string& out_dir);

struct ParseResult {
  SweepConfig cfg;
  bool help = false;
  std::string help_text;
  std::string dump_mesh_path;    ///< when set, dump the mesh and exit
  std::string dump_matrices_dir; ///< when set, dump assembled blocks and exit
};

/// Parse CLI arguments (without argv[0]); flags override config-file values
/// override defaults. Throws std::invalid_argument with a descriptive
/// message on bad input.
ParseResult parse_config(const std::vector<std::string>& args);

} // namespace biotfs
