#include "lowvolt/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lowvolt/calibration.hpp"
#include "lowvolt/io.hpp"
#include "lowvolt/planner.hpp"
#include "lowvolt/svg.hpp"
#include "lowvolt/trace_oracle.hpp"

namespace lowvolt {
namespace {

namespace fs = std::filesystem;

std::string short_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

fs::path prepare_dir(const RunConfig& cfg) {
  const fs::path dir = cfg.output.dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create output directory " + dir.string());
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path.string());
  f << text;
}

void write_plan(const fs::path& path, const std::vector<PlanRow<double>>& rows) {
  std::ostringstream os;
  write_plan_csv(os, rows);
  write_file(path, os.str());
}

std::string plan_filename(const TargetSpec<double>& t) { return "plan_tr" + short_number(t.t_r) + ".csv"; }

void print_row(std::ostream& out, const PlanRow<double>& r) {
  out << "  p          = " << r.p << "\n"
      << "  s_p        = " << format_number(r.s_p) << "\n"
      << "  f_p_hz     = " << format_number(r.f_p) << "\n"
      << "  v_p_v      = " << format_number(r.v_p) << "\n"
      << "  p_total_w  = " << format_number(r.power.total_w) << " (per core)\n"
      << "  t_p_s      = " << format_number(r.t_p) << "\n"
      << "  e_j        = " << format_number(r.e_j) << "\n";
}

void print_plan_summary(std::ostream& out, const OperatingPlan<double>& plan) {
  const auto feasible = std::count_if(plan.rows.begin(), plan.rows.end(), [](const auto& r) { return r.feasible(); });
  out << "t_r=" << short_number(plan.target.t_r) << "  " << plan.model_summary << "  rows=" << plan.rows.size()
      << "  feasible=" << feasible;
  if (auto best = optimal_point(plan))
    out << "  optimal_p=" << best->p << "  e_min_j=" << format_number(best->e_j)
        << "  v_p=" << format_number(best->v_p);
  else
    out << "  optimal_p=none";
  out << "\n";
}

void emit_plots(const fs::path& dir, const std::vector<OperatingPlan<double>>& plans, std::ostream& err) {
  try {
    emit_svg(plans, PlotAxis::Energy, dir / "energy.svg");
    emit_svg(plans, PlotAxis::Voltage, dir / "voltage.svg");
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoFeasibleData) throw;
    err << "warning: " << e.what() << "; no SVG written\n";
  }
}

int cmd_sweep(const RunConfig& cfg, bool with_frontier, std::ostream& out, std::ostream& err) {
  const fs::path dir = prepare_dir(cfg);
  const auto entries = frontier(cfg.chip, cfg.reference, cfg.speedup, cfg.targets, cfg.p_range);

  std::vector<OperatingPlan<double>> plans;
  std::ostringstream summary;
  summary << "t_r,optimal_p,s_p,f_p_hz,v_p_v,p_total_w,t_p_s,e_j\n";
  int failures = 0;
  for (const auto& e : entries) {
    if (e.error) {
      err << "t_r=" << short_number(e.target.t_r) << ": " << e.error->what() << "\n";
      ++failures;
      continue;
    }
    const auto& plan = *e.plan;
    plans.push_back(plan);
    if (cfg.output.csv) write_plan(dir / plan_filename(plan.target), plan.rows);
    if (cfg.output.report) print_plan_summary(out, plan);
    summary << format_number(plan.target.t_r) << ',';
    if (auto best = optimal_point(plan))
      summary << best->p << ',' << format_number(best->s_p) << ',' << format_number(best->f_p) << ','
              << format_number(best->v_p) << ',' << format_number(best->power.total_w) << ','
              << format_number(best->t_p) << ',' << format_number(best->e_j) << '\n';
    else
      summary << ",,,,,,\n";
  }
  if (with_frontier && cfg.output.csv) write_file(dir / "frontier.csv", summary.str());
  if (cfg.output.svg && !plans.empty()) emit_plots(dir, plans, err);

  if (failures > 0 && plans.empty()) return exit_code(entries.front().error->kind());
  const bool any_feasible = std::any_of(plans.begin(), plans.end(), [](const auto& p) { return p.any_feasible(); });
  if (!any_feasible) {
    err << "no feasible operating point for any target\n";
    return exit_code(ErrorKind::Infeasible);
  }
  return 0;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const fs::path dir = prepare_dir(cfg);
  std::vector<PlanRow<double>> best_rows;
  for (const auto& t : cfg.targets) {
    const auto plan = sweep(cfg.chip, cfg.reference, cfg.speedup, t, cfg.p_range);
    const auto best = optimal_point(plan);
    if (cfg.output.report) {
      out << "optimal point for t_r=" << short_number(t.t_r) << " (" << plan.model_summary << ")\n";
      if (best)
        print_row(out, *best);
      else
        out << "  none feasible\n";
    }
    if (best) best_rows.push_back(*best);
  }
  if (cfg.output.csv) write_plan(dir / "optimal.csv", best_rows);
  if (best_rows.empty()) {
    err << "no feasible operating point for any target\n";
    return exit_code(ErrorKind::Infeasible);
  }
  return 0;
}

int cmd_calibrate_vf(const RunConfig& cfg, const CommandInputs& in, std::ostream& out) {
  if (in.samples.empty()) throw Error(ErrorKind::Validation, "calibrate-vf: --samples <csv> is required");
  const auto samples = read_vf_samples(in.samples);
  const auto fit = fit_vf(samples, cfg.chip.h);
  nlohmann::json j;
  j["chip"] = {{"k2", fit.k2}, {"v_th", fit.v_th}, {"h", fit.h}};
  j["rms_residual_hz"] = fit.rms_residual;
  j["sample_count"] = fit.sample_count;
  const std::string text = j.dump(2) + "\n";
  if (cfg.output.csv) write_file(prepare_dir(cfg) / "calibration_vf.json", text);
  if (cfg.output.report) out << text;
  return 0;
}

int cmd_calibrate_power(const RunConfig& cfg, const CommandInputs& in, std::ostream& out, std::ostream& err) {
  if (in.samples.empty()) throw Error(ErrorKind::Validation, "calibrate-power: --samples <csv> is required");
  const auto samples = read_power_samples(in.samples);
  const auto fit = fit_power(samples);
  nlohmann::json j;
  j["chip"] = {{"dyn_const", fit.dyn_const}, {"i_leak", fit.i_leak}};
  j["rms_residual_w"] = fit.rms_residual;
  j["sample_count"] = fit.sample_count;
  j["clamped"] = fit.clamped;
  const std::string text = j.dump(2) + "\n";
  if (fit.clamped) err << "warning: negative coefficient clamped to zero; check the samples\n";
  if (cfg.output.csv) write_file(prepare_dir(cfg) / "calibration_power.json", text);
  if (cfg.output.report) out << text;
  return 0;
}

int cmd_validate(const RunConfig& cfg, std::ostream& out) {
  std::ostringstream csv;
  csv << "p,f,t_r,e_model_j,e_oracle_j,rel_err,pass\n";
  int checked = 0;
  int failed = 0;
  double worst = 0;
  for (double f : cfg.validate.fractions) {
    const SpeedupModel<double> model = AmdahlSpeedup<double>{f};
    const Workload<double> work{cfg.reference.w_cycles, f};
    for (double t_r : cfg.validate.targets) {
      const auto plan = sweep(cfg.chip, cfg.reference, model, TargetSpec<double>{t_r}, cfg.p_range);
      for (const auto& row : plan.rows) {
        if (!row.feasible()) continue;
        const auto sim = simulate(work, row.p, row.f_p, row.v_p, cfg.chip, Accounting::AllCoresOn);
        const double rel = std::abs(sim.energy_j - row.e_j) / std::abs(row.e_j);
        const bool pass = rel <= cfg.validate.tolerance;
        ++checked;
        if (!pass) ++failed;
        worst = std::max(worst, rel);
        csv << row.p << ',' << format_number(f) << ',' << format_number(t_r) << ',' << format_number(row.e_j)
            << ',' << format_number(sim.energy_j) << ',' << format_number(rel) << ','
            << (pass ? "pass" : "fail") << '\n';
      }
    }
  }
  if (cfg.output.csv) write_file(prepare_dir(cfg) / "validate.csv", csv.str());
  if (cfg.output.report)
    out << "validate: " << checked << " feasible cells, " << failed << " failed, max relative error "
        << format_number(worst) << " (tolerance " << format_number(cfg.validate.tolerance) << ")\n";
  return failed == 0 ? 0 : exit_code(ErrorKind::Internal);
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  if (name == "sweep") return Command::Sweep;
  if (name == "optimize") return Command::Optimize;
  if (name == "frontier") return Command::Frontier;
  if (name == "calibrate-vf") return Command::CalibrateVf;
  if (name == "calibrate-power") return Command::CalibratePower;
  if (name == "validate") return Command::Validate;
  return std::nullopt;
}

int run_command(Command cmd, const RunConfig& cfg, const CommandInputs& inputs, std::ostream& out,
                std::ostream& err) {
  try {
    switch (cmd) {
      case Command::Sweep: return cmd_sweep(cfg, false, out, err);
      case Command::Frontier: return cmd_sweep(cfg, true, out, err);
      case Command::Optimize: return cmd_optimize(cfg, out, err);
      case Command::CalibrateVf: return cmd_calibrate_vf(cfg, inputs, out);
      case Command::CalibratePower: return cmd_calibrate_power(cfg, inputs, out, err);
      case Command::Validate: return cmd_validate(cfg, out);
    }
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error (internal): " << e.what() << "\n";
    return exit_code(ErrorKind::Internal);
  }
  return exit_code(ErrorKind::Internal);
}

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Voltage, frequency and energy planner for parallel workloads", "lowvolt"};
  std::string command;
  std::string config_path;
  std::string out_dir;
  bool svg = false;
  bool explain = false;
  CommandInputs inputs;
  app.add_option("command", command,
                 "sweep | optimize | frontier | calibrate-vf | calibrate-power | validate");
  app.add_option("--config", config_path, "Run configuration (JSON); defaults apply when omitted");
  app.add_option("--out", out_dir, "Output directory (overrides output.dir)");
  app.add_flag("--svg", svg, "Also write energy.svg and voltage.svg");
  app.add_option("--samples", inputs.samples, "Sample CSV for calibrate-vf / calibrate-power");
  app.add_flag("--explain-params", explain, "Print the reference parameters and the k2 unit note");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return exit_code(ErrorKind::Validation);
  }

  if (explain) {
    out << explain_reference_params();
    if (command.empty()) return 0;
  }
  const auto cmd = parse_command(command);
  if (!cmd) {
    err << (command.empty() ? std::string("missing command") : "unknown command '" + command + "'") << "\n"
        << app.help();
    return exit_code(ErrorKind::Validation);
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config(config_path);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  }
  if (!out_dir.empty()) cfg.output.dir = out_dir;
  if (svg) cfg.output.svg = true;
  return run_command(*cmd, cfg, inputs, out, err);
}

}  // namespace lowvolt
