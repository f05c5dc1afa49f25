#include "biotfs/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <CLI11.hpp>

namespace biotfs {

namespace {

std::string fmt_g6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Canonical grid value: the double that its own CSV representation parses
// back to, so written tables round-trip exactly.
double canon(double v) { return std::strtod(fmt_g6(v).c_str(), nullptr); }

std::string fmt_e9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9e", v);
  return buf;
}

std::string fmt_wall(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

int effective_workers(int requested) {
  if (requested > 0)
    return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

CaseOverrides override_for(VariationAxis axis, double value) {
  CaseOverrides ov;
  if (axis == VariationAxis::Poisson)
    ov.poisson = value;
  else
    ov.permeability_mD = value;
  return ov;
}

double parse_variation_token(VariationAxis axis, const std::string& token) {
  std::string value = token;
  auto eq = token.find('=');
  if (eq != std::string::npos) {
    std::string key = token.substr(0, eq);
    value = token.substr(eq + 1);
    if (key == "nu") {
      if (axis != VariationAxis::Poisson)
        throw std::invalid_argument(
            "variation '" + token + "': this case varies permeability (use k=...)");
    } else if (key == "k") {
      if (axis != VariationAxis::Permeability)
        throw std::invalid_argument(
            "variation '" + token + "': this case varies Poisson's ratio (use nu=...)");
    } else {
      throw std::invalid_argument("variation '" + token +
                                  "': unknown key (use nu=... or k=...[mD])");
    }
  }
  if (value.size() > 2 && value.substr(value.size() - 2) == "mD") {
    if (axis != VariationAxis::Permeability)
      throw std::invalid_argument("variation '" + token +
                                  "': mD suffix only applies to permeability");
    value = value.substr(0, value.size() - 2);
  }
  char* end = nullptr;
  double v = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0' || !std::isfinite(v))
    throw std::invalid_argument("variation '" + token + "': malformed number");
  return canon(v);
}

} // namespace

std::vector<double> omega_grid(const SweepConfig& cfg) {
  if (!(cfg.omega_step > 0.0))
    throw std::invalid_argument("omega_step must be positive");
  if (!(cfg.omega_start > 0.0))
    throw std::invalid_argument("omega_start must be positive");
  if (cfg.omega_end < cfg.omega_start)
    throw std::invalid_argument("omega_end must be >= omega_start");
  const long count = static_cast<long>(
      std::floor((cfg.omega_end - cfg.omega_start) / cfg.omega_step + 1e-9));
  std::vector<double> grid;
  grid.reserve(count + 1);
  for (long i = 0; i <= count; ++i)
    grid.push_back(canon(cfg.omega_start + i * cfg.omega_step));
  return grid;
}

SweepTable run_sweep(const SweepConfig& cfg) {
  const CaseId id = parse_case_id(cfg.case_id);
  std::vector<double> variations = cfg.variations;
  if (variations.empty())
    variations = default_variations(id);
  std::sort(variations.begin(), variations.end());
  variations.erase(std::unique(variations.begin(), variations.end()),
                   variations.end());

  const std::vector<double> omegas = omega_grid(cfg);
  const CaseSpec probe = make_case(id);

  // Resolve every case up front so bad variation values fail before any run.
  std::vector<CaseSpec> specs;
  specs.reserve(variations.size());
  for (double v : variations)
    specs.push_back(make_case(id, override_for(probe.axis, v)));

  const Mesh mesh = build_lshape_mesh(cfg.mesh_n);
  const DofLayout layout = build_dof_layout(mesh, specs.front());

  StoppingConfig stopping;
  stopping.eps_rel = cfg.tol_rel;
  stopping.max_iter = cfg.max_iter;

  struct Task {
    size_t vi;
    size_t oi;
  };
  std::vector<Task> tasks;
  tasks.reserve(specs.size() * omegas.size());
  for (size_t vi = 0; vi < specs.size(); ++vi)
    for (size_t oi = 0; oi < omegas.size(); ++oi)
      tasks.push_back({vi, oi});

  SweepTable table;
  table.rows.resize(tasks.size());

  std::atomic<size_t> next{0};
  std::atomic<bool> failed{false};
  std::string first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= tasks.size() || failed.load())
        return;
      const Task& task = tasks[idx];
      const CaseSpec& cs = specs[task.vi];
      try {
        TuningSpec tuning;
        tuning.variant = cs.sweep_base;
        tuning.omega = omegas[task.oi];
        const auto t0 = std::chrono::steady_clock::now();
        SimulationReport rep = run_simulation_on(mesh, layout, cs, tuning,
                                                 stopping, cfg.dt, cfg.t_end);
        const auto t1 = std::chrono::steady_clock::now();

        SweepRow& row = table.rows[idx];
        row.case_id = cs.name;
        row.variation = cs.variation_label;
        row.variation_value = cs.variation_value;
        row.omega = omegas[task.oi];
        row.kdr_pa = resolve_kdr(tuning, cs.params.mu, cs.params.lambda);
        row.iterations = rep.accumulated_iterations;
        row.converged = rep.converged;
        row.wall_s =
            cfg.timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0;
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!failed.exchange(true))
          first_error = e.what();
        return;
      }
    }
  };

  const int n_workers =
      std::min<long>(effective_workers(cfg.workers), tasks.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w)
      pool.emplace_back(worker);
    for (auto& th : pool)
      th.join();
  }
  if (failed.load())
    throw std::runtime_error("run_sweep: " + first_error);
  return table;
}

std::optional<OptimalOmega> find_optimal_omega(const SweepTable& table,
                                               const std::string& variation) {
  std::optional<OptimalOmega> best;
  // Ascending omega scan with strict improvement: ties keep the smaller omega.
  std::vector<const SweepRow*> rows;
  for (const auto& row : table.rows)
    if (row.variation == variation && row.converged)
      rows.push_back(&row);
  std::sort(rows.begin(), rows.end(), [](const SweepRow* a, const SweepRow* b) {
    return a->omega < b->omega;
  });
  for (const SweepRow* row : rows) {
    if (!best || row->iterations < best->iterations)
      best = OptimalOmega{row->omega, row->iterations};
  }
  return best;
}

std::string csv_string(const SweepTable& table) {
  std::string out = "case,variation,omega,kdr_pa,iterations,converged,wall_s\n";
  for (const auto& row : table.rows) {
    out += row.case_id;
    out += ',';
    out += row.variation;
    out += ',';
    out += fmt_g6(row.omega);
    out += ',';
    out += fmt_e9(row.kdr_pa);
    out += ',';
    out += std::to_string(row.iterations);
    out += ',';
    out += row.converged ? "true" : "false";
    out += ',';
    out += fmt_wall(row.wall_s);
    out += '\n';
  }
  return out;
}

SweepTable parse_sweep_csv(std::istream& in) {
  SweepTable table;
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("parse_sweep_csv: missing header");
  if (line != "case,variation,omega,kdr_pa,iterations,converged,wall_s")
    throw std::invalid_argument("parse_sweep_csv: unexpected header '" + line +
                                "'");
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
      fields.push_back(field);
    if (fields.size() != 7)
      throw std::invalid_argument("parse_sweep_csv: malformed row '" + line +
                                  "'");
    SweepRow row;
    row.case_id = fields[0];
    row.variation = fields[1];
    row.omega = std::strtod(fields[2].c_str(), nullptr);
    row.kdr_pa = std::strtod(fields[3].c_str(), nullptr);
    row.iterations = std::strtol(fields[4].c_str(), nullptr, 10);
    row.converged = fields[5] == "true";
    row.wall_s = std::strtod(fields[6].c_str(), nullptr);
    auto eq = row.variation.find('=');
    std::string value = eq == std::string::npos ? row.variation
                                                : row.variation.substr(eq + 1);
    if (value.size() > 2 && value.substr(value.size() - 2) == "mD")
      value = value.substr(0, value.size() - 2);
    row.variation_value = std::strtod(value.c_str(), nullptr);
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<std::string> write_reports(const SweepTable& table,
                                       const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  std::vector<std::string> written;

  const std::string case_name =
      table.rows.empty() ? std::string("sweep") : table.rows.front().case_id;
  auto emit = [&](const std::string& name, const std::string& content) {
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out)
      throw std::runtime_error("write_reports: cannot open " + path.string());
    out << content;
    if (!out)
      throw std::runtime_error("write_reports: write failed for " +
                               path.string());
    written.push_back(path.string());
  };

  emit(table.rows.empty() ? "sweep.csv" : case_name + "_sweep.csv",
       csv_string(table));

  // Ordered distinct variations.
  std::vector<std::string> variations;
  for (const auto& row : table.rows)
    if (variations.empty() || variations.back() != row.variation)
      if (std::find(variations.begin(), variations.end(), row.variation) ==
          variations.end())
        variations.push_back(row.variation);

  std::string summary = "# Sweep summary: case " + case_name + "\n\n";
  if (table.rows.empty())
    summary += "(empty sweep)\n";
  for (const auto& var : variations) {
    long total = 0, nonconv = 0;
    for (const auto& row : table.rows)
      if (row.variation == var) {
        ++total;
        if (!row.converged)
          ++nonconv;
      }
    const auto best = find_optimal_omega(table, var);
    summary += "- " + var + ": ";
    if (best)
      summary += "omega_star=" + fmt_g6(best->omega) +
                 ", iterations=" + std::to_string(best->iterations);
    else
      summary += "no convergent omega";
    summary += " (" + std::to_string(total) + " omega values, " +
               std::to_string(nonconv) + " nonconvergent)\n";
  }
  emit(table.rows.empty() ? "summary.md" : case_name + "_summary.md", summary);

  for (const auto& var : variations) {
    std::string label = var;
    label.erase(std::remove(label.begin(), label.end(), '='), label.end());
    std::string data;
    for (const auto& row : table.rows) {
      if (row.variation != var)
        continue;
      if (row.converged)
        data += fmt_g6(row.omega) + " " + std::to_string(row.iterations) + "\n";
      else
        data += "# " + fmt_g6(row.omega) + " nonconvergent after " +
                std::to_string(row.iterations) + " iterations\n";
    }
    emit(case_name + "_" + label + ".dat", data);
  }
  return written;
}

ParseResult parse_config(const std::vector<std::string>& args) {
  ParseResult result;
  SweepConfig& cfg = result.cfg;

  CLI::App app{"Fixed-stress splitting benchmark for linear poroelasticity"};
  app.set_config("--config", "",
                 "Config file with the same keys as the long options "
                 "(key=value lines)");

  std::vector<std::string> variation_tokens;
  app.add_option("--case", cfg.case_id,
                 "Test case id: 1a, 1b, 1c or 2");
  app.add_option("--omega-start", cfg.omega_start, "First omega of the sweep")
      ->capture_default_str();
  app.add_option("--omega-end", cfg.omega_end, "Last omega of the sweep")
      ->capture_default_str();
  app.add_option("--omega-step", cfg.omega_step, "Omega increment")
      ->capture_default_str();
  app.add_option("--mesh-n", cfg.mesh_n, "Cells per unit length (even)")
      ->capture_default_str();
  app.add_option("--dt", cfg.dt, "Time step size [s]")->capture_default_str();
  app.add_option("--t-end", cfg.t_end, "End time [s]")->capture_default_str();
  app.add_option("--tol-rel", cfg.tol_rel,
                 "Relative increment tolerance of the splitting loop")
      ->capture_default_str();
  app.add_option("--max-iter", cfg.max_iter,
                 "Iteration cap per time step; runs hitting it are flagged "
                 "nonconvergent")
      ->capture_default_str();
  app.add_option("--out", cfg.out_dir, "Output directory")
      ->capture_default_str();
  app.add_option("--workers", cfg.workers,
                 "Parallel workers over (variation, omega) pairs; 0 = all "
                 "hardware threads")
      ->capture_default_str();
  app.add_option("--variation", variation_tokens,
                 "Restrict the sweep to these variation values, e.g. nu=0.2 "
                 "or k=1e0mD (repeatable)");
  app.add_flag("--timing", cfg.timing,
               "Record wall times in the CSV (off by default so repeated "
               "sweeps are byte-identical)");
  app.add_option("--dump-mesh", result.dump_mesh_path,
                 "Write the mesh as a plain-text node/element listing to this "
                 "path and exit");
  app.add_option("--dump-matrices", result.dump_matrices_dir,
                 "Write the assembled blocks as coordinate triples into this "
                 "directory and exit");

  std::vector<const char*> argv;
  argv.push_back("biotfs");
  for (const auto& a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    result.help = true;
    result.help_text = app.help();
    return result;
  } catch (const CLI::ParseError& e) {
    throw std::invalid_argument(e.what());
  }

  if (!(cfg.omega_step > 0.0))
    throw std::invalid_argument("--omega-step must be positive");
  cfg.omega_start = canon(cfg.omega_start);
  cfg.omega_end = canon(cfg.omega_end);
  cfg.omega_step = canon(cfg.omega_step);

  if (cfg.case_id.empty()) {
    if (result.dump_mesh_path.empty())
      throw std::invalid_argument("missing --case (valid ids: 1a, 1b, 1c, 2)");
    return result;
  }
  const CaseId id = parse_case_id(cfg.case_id);
  const CaseSpec probe = make_case(id);
  for (const auto& token : variation_tokens)
    cfg.variations.push_back(parse_variation_token(probe.axis, token));
  return result;
}

} // namespace biotfs
