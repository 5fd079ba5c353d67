#include "glider/cli/app.hpp"

#include "glider/cli/runs.hpp"
#include "glider/errors.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace glider {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out{"."};
  std::string format{"json"};
  bool quiet{false};
};

ScenarioConfig scenario_from(const Options& o) {
  ScenarioConfig c = o.config.empty() ? default_scenario() : load_scenario(o.config);
  if (o.seed) c.seed = *o.seed;
  return c;
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
  return fs::path(dir);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("write failed: " + path.string());
}

std::string csv_cell(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return v.dump();
}

void write_report(const fs::path& dir, const json& report, const std::string& format) {
  if (format == "json") {
    write_text(dir / "report.json", report.dump(2) + "\n");
    return;
  }
  std::string text = "key,value\n";
  const json flat = report.flatten();
  for (const auto& [key, value] : flat.items()) text += key + "," + csv_cell(value) + "\n";
  write_text(dir / "report.csv", text);
}

/// Writes the trajectory and reloads it, so a file that does not parse is caught here.
void write_trajectory(const fs::path& path, const Trajectory& traj) {
  write_trajectory_csv(path.string(), traj);
  std::ifstream in(path);
  if (!in) throw IoError("cannot reopen " + path.string());
  try {
    const Trajectory back = read_trajectory_csv(in);
    if (back.samples.size() != traj.samples.size())
      throw IoError(path.string() + ": row count changed on reload");
  } catch (const ValidationError& e) {
    throw IoError(path.string() + " does not reload: " + e.what());
  }
}

int simulate_cmd(const Options& o, std::ostream& out) {
  const ScenarioConfig c = scenario_from(o);
  const fs::path dir = prepare_out(o.out);
  const SimulationResult r = run_simulation(c);
  write_trajectory(dir / "trajectory.csv", r.trajectory);
  write_report(dir, r.report, o.format);
  if (!o.quiet) {
    out << "simulate: " << r.trajectory.samples.size() << " samples to " << (dir / "trajectory.csv").string() << "\n";
    for (const auto& [ch, m] : r.report["metrics"].items())
      out << "  " << ch << " error " << m["percent_error_of_target"].get<double>() << " %\n";
  }
  if (r.trajectory.abort_reason) {
    out << "aborted: " << *r.trajectory.abort_reason << "\n";
    return kExitDivergence;
  }
  return kExitOk;
}

int compare_cmd(const Options& o, std::ostream& out) {
  const ScenarioConfig c = scenario_from(o);
  const fs::path dir = prepare_out(o.out);
  const auto cells = run_compare(c, c.compare.write_trajectories);
  const json report = compare_report(c, cells);

  std::string table = "channel,target,target_unit,sigma,nlc_percent_error,pid_percent_error,nlc_better\n";
  for (const auto& row : report["cells"]) {
    table += csv_cell(row["channel"]) + "," + row["target"].dump() + "," + csv_cell(row["target_unit"]) +
             "," + row["sigma"].dump() + "," +
             (row["nlc_diverged"].get<bool>() ? "diverged" : row["nlc_percent_error"].dump()) + "," +
             (row["pid_diverged"].get<bool>() ? "diverged" : row["pid_percent_error"].dump()) + "," +
             (row["nlc_better"].get<bool>() ? "1" : "0") + "\n";
  }
  write_text(dir / "compare_table.csv", table);
  if (c.compare.write_trajectories) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& cell = cells[i];
      if (cell.diverged) continue;
      char name[128];
      std::snprintf(name, sizeof name, "cell_%03zu_%s_%s.csv", i,
                    cell.strategy == Strategy::kNlc ? "nlc" : "pid", std::string(to_string(cell.channel)).c_str());
      write_trajectory(dir / name, cell.trajectory);
    }
  }
  write_report(dir, report, o.format);
  bool diverged = false;
  for (const auto& cell : cells) diverged = diverged || cell.diverged;
  if (!o.quiet) {
    out << "compare: " << cells.size() << " cells, NLC better everywhere: "
        << (report["nlc_better_everywhere"].get<bool>() ? "yes" : "no") << "\n" << table;
  }
  return diverged ? kExitDivergence : kExitOk;
}

int maneuver_cmd(const Options& o, const std::string& pattern, std::ostream& out) {
  ScenarioConfig c = scenario_from(o);
  if (!pattern.empty()) c.maneuver.pattern = parse_pattern(pattern);
  const fs::path dir = prepare_out(o.out);
  const ManeuverResult r = run_maneuver(c);
  write_trajectory(dir / "trajectory.csv", r.trajectory);
  write_report(dir, r.report, o.format);
  if (!o.quiet) {
    out << "maneuver " << to_string(c.maneuver.pattern) << ": " << r.segments.size() << " segments, "
        << (r.completed ? "completed" : "not completed") << ", depth "
        << r.report["depth_min"].get<double>() << " to " << r.report["depth_max"].get<double>() << " m\n";
  }
  if (r.trajectory.abort_reason) {
    out << "aborted: " << *r.trajectory.abort_reason << "\n";
    return kExitDivergence;
  }
  return kExitOk;
}

int estimate_cmd(const Options& o, bool synthetic, const std::string& dataset, std::ostream& out) {
  ScenarioConfig c = scenario_from(o);
  if (!dataset.empty()) c.estimate.dataset = dataset;
  if (!synthetic && !c.estimate.dataset)
    throw ValidationError("estimate: pass --synthetic or --dataset <dir>");
  if (synthetic && !dataset.empty()) throw ValidationError("estimate: --synthetic and --dataset are exclusive");
  const fs::path dir = prepare_out(o.out);
  const EstimateResult r = run_estimate(c, synthetic);

  std::vector<std::string> names(HydroCoefficients<double>::kNames.begin(),
                                 HydroCoefficients<double>::kNames.end());
  std::ostringstream summary;
  for (std::size_t k = 0; k < r.chains.size(); ++k) {
    std::ostringstream chain;
    write_chain_csv(chain, r.chains[k], names);
    write_text(dir / ("chain_" + std::to_string(k) + ".csv"), chain.str());
    summary << "# chain " << k << "\n";
    write_summary(summary, r.summaries[k]);
  }
  if (r.pooled) {
    summary << "# pooled\n";
    write_summary(summary, *r.pooled);
  }
  write_text(dir / "summary.txt", summary.str());
  if (synthetic && c.estimate.write_corpus) write_mocap_dataset((dir / "corpus").string(), to_dataset(r.corpus));
  write_report(dir, r.report, o.format);
  if (!o.quiet) {
    out << "estimate: " << r.report["runs"].get<std::size_t>() << " runs, "
        << r.report["observations"].get<std::int64_t>() << " observations, " << r.chains.size()
        << " chains\n";
    for (const auto& ch : r.report["chains"]) {
      out << "  acceptance " << ch["acceptance_rate"].get<double>();
      if (ch.contains("worst_z") && !ch["worst_z"].is_null())
        out << ", worst |z| " << ch["worst_z"].get<double>();
      out << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Underwater glider simulation, identification and control"};
  app.require_subcommand(1);
  Options o;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Scenario config (JSON)");
    sub->add_option("--seed", seed, "Root RNG seed, overrides the config");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--quiet", o.quiet, "No console output");
  };
  auto* sim = app.add_subcommand("simulate", "One closed-loop run of the setpoint schedule");
  add_common(sim);
  auto* est = app.add_subcommand("estimate", "MCMC identification of the hydrodynamic coefficients");
  add_common(est);
  bool synthetic = false;
  std::string dataset;
  est->add_flag("--synthetic", synthetic, "Generate the corpus from the configured vehicle");
  est->add_option("--dataset", dataset, "Directory of *.mocap.csv / *.actuators.csv pairs");
  auto* cmp = app.add_subcommand("compare", "NLC vs PID over the target and disturbance grid");
  add_common(cmp);
  auto* man = app.add_subcommand("maneuver", "Circle / S-curve glide pattern under hybrid control");
  add_common(man);
  std::string pattern;
  man->add_option("--pattern", pattern, "circle, s_curve or circle_to_s")
      ->check(CLI::IsMember({"circle", "s_curve", "circle_to_s"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream cli_out, cli_err;
    const int code = app.exit(e, cli_out, cli_err);
    out << cli_out.str();
    err << cli_err.str();
    return code == 0 ? kExitOk : kExitValidation;
  }
  for (auto* sub : {sim, est, cmp, man})
    if (sub->count("--seed")) o.seed = seed;

  const auto start = std::chrono::steady_clock::now();
  int code = kExitOk;
  try {
    if (*sim) code = simulate_cmd(o, out);
    else if (*est) code = estimate_cmd(o, synthetic, dataset, out);
    else if (*cmp) code = compare_cmd(o, out);
    else code = maneuver_cmd(o, pattern, out);
  } catch (const ValidationError& e) {
    err << "invalid input:\n";
    for (const auto& p : e.problems()) err << "  " << p << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const SingularInertiaError& e) {
    err << "invalid vehicle: " << e.what() << "\n";
    return kExitValidation;
  } catch (const GliderError& e) {
    err << "run failed: " << e.what() << "\n";
    return kExitDivergence;
  }
  if (!o.quiet) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out << "wall-clock " << secs << " s\n";
  }
  return code;
}

}  // namespace glider
