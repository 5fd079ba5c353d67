#include "glider/cli/app.hpp"
#include "glider/cli/runs.hpp"
#include "glider/cli/scenario.hpp"
#include "glider/errors.hpp"
#include "glider/sim/simulate.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace glider;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "glider_cli_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "scenario.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "glider");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("scenario: validation collects every problem") {
  const json doc = {{"schema_version", 1},
                    {"bogus", 1},
                    {"simulation", {{"dt", -1.0}, {"typo", 2}}},
                    {"controller", {{"strategy", "fuzzy"}}},
                    {"setpoints", {{{"t", 5.0}, {"theta_deg", 10}}, {{"t", 1.0}, {"z", 2}}}}};
  try {
    parse_scenario(doc, ".");
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string all = e.what();
    CHECK(e.problems().size() >= 5);
    CHECK(all.find("bogus") != std::string::npos);
    CHECK(all.find("simulation.typo") != std::string::npos);
    CHECK(all.find("strategy") != std::string::npos);
    CHECK(all.find("non-decreasing") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario(json{{"seed", 3}}, "."), ValidationError);
  CHECK_THROWS_AS(parse_scenario(json{{"schema_version", 2}}, "."), ValidationError);
  CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), IoError);
}

TEST_CASE("scenario: vehicle file resolves relative to the config") {
  const auto dir = scratch("vehicle");
  std::ofstream(dir / "v.txt") << "hydro.kd0 = 4.5\n";
  const auto c = load_scenario(write_config(dir, {{"schema_version", 1}, {"vehicle", "v.txt"}}).string());
  CHECK(c.vehicle.hydro.kd0 == 4.5);
  const auto missing = write_config(dir, {{"schema_version", 1}, {"vehicle", "nope.txt"}});
  CHECK_THROWS_AS(load_scenario(missing.string()), IoError);
}

TEST_CASE("config hash covers the effective seed and the gains") {
  const json base = {{"schema_version", 1}, {"seed", 1}};
  json other_seed = base;
  other_seed["seed"] = 99;
  json other_gain = base;
  other_gain["controller"] = {{"pitch_nlc", {{"k1", 1.5}}}};
  const auto a = parse_scenario(base, "."), c = parse_scenario(other_gain, ".");
  auto b = parse_scenario(other_seed, ".");
  CHECK(config_hash(a) != config_hash(b));
  b.seed = 1;  // what --seed 1 does
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a) != config_hash(c));
  CHECK(config_hash(a).size() == 16);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("simulate: equilibrium is stationary") {
  const auto dir = scratch("equilibrium");
  const auto cfg = write_config(dir, {{"schema_version", 1}, {"simulation", {{"duration", 20}}}});
  const auto r = cli({"simulate", "--config", cfg.string(), "--out", (dir / "out").string(), "--quiet"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(dir / "out" / "trajectory.csv");
  const auto traj = read_trajectory_csv(in);
  for (const auto& s : traj.samples) CHECK(s.state.vector().cwiseAbs().maxCoeff() < 1e-12);
  const json report = json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report["metrics"].empty());
  CHECK(report["samples"] == traj.samples.size());
}

TEST_CASE("simulate: pitch step report and byte-identical reruns") {
  const auto dir = scratch("pitch");
  const auto cfg = write_config(dir, {{"schema_version", 1},
                                      {"simulation", {{"duration", 60}}},
                                      {"setpoints", {{{"t", 0}, {"theta_deg", 30}, {"ballast", -0.1}}}}});
  for (const char* run : {"a", "b"})
    REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", (dir / run).string(), "--quiet"}).code == 0);
  CHECK(slurp(dir / "a" / "trajectory.csv") == slurp(dir / "b" / "trajectory.csv"));
  CHECK(slurp(dir / "a" / "report.json") == slurp(dir / "b" / "report.json"));
  const json report = json::parse(slurp(dir / "a" / "report.json"));
  CHECK(report["metrics"]["pitch"]["percent_error_of_target"].get<double>() < 1.0);
  CHECK(report["lyapunov"]["fraction"].get<double>() >= 0.99);

  REQUIRE(cli({"simulate", "--config", cfg.string(), "--out", (dir / "csv").string(), "--format", "csv", "--quiet"}).code == 0);
  const std::string flat = slurp(dir / "csv" / "report.csv");
  CHECK(flat.rfind("key,value\n", 0) == 0);
  CHECK(flat.find("/metrics/pitch/percent_error_of_target,") != std::string::npos);
}

TEST_CASE("simulate: envelope abort exits with the divergence code") {
  const auto dir = scratch("envelope");
  const auto cfg = write_config(dir, {{"schema_version", 1},
                                      {"simulation", {{"duration", 120}}},
                                      {"envelope", {{"z_min", -1}, {"z_max", 0.5}}},
                                      {"setpoints", {{{"t", 0}, {"ballast", 0.2}}}}});
  const auto r = cli({"simulate", "--config", cfg.string(), "--out", (dir / "out").string()});
  CHECK(r.code == kExitDivergence);
  CHECK(r.out.find("aborted") != std::string::npos);
  const json report = json::parse(slurp(dir / "out" / "report.json"));
  CHECK(report["aborted"].is_string());
}

TEST_CASE("CLI exit codes") {
  CHECK(cli({}).code == kExitValidation);
  CHECK(cli({"fly"}).code == kExitValidation);
  CHECK(cli({"simulate", "--format", "xml"}).code == kExitValidation);
  CHECK(cli({"simulate", "--config", "/nonexistent.json"}).code == kExitIo);
  CHECK(cli({"--help"}).code == kExitOk);
  const auto dir = scratch("codes");
  CHECK(cli({"estimate", "--out", (dir / "e").string()}).code == kExitValidation);
  CHECK(cli({"estimate", "--dataset", (dir / "none").string(), "--out", (dir / "e").string()}).code == kExitIo);
  const auto bad = write_config(dir, {{"schema_version", 1}, {"unknown", true}});
  const auto r = cli({"simulate", "--config", bad.string(), "--out", (dir / "o").string()});
  CHECK(r.code == kExitValidation);
  CHECK(r.err.find("unknown") != std::string::npos);
}

TEST_CASE("compare: empty matrix is a usage error, small grid runs") {
  const auto dir = scratch("compare");
  const auto empty = write_config(dir, {{"schema_version", 1},
                                        {"compare", {{"pitch_targets_deg", json::array()},
                                                     {"depth_targets", json::array()}}}});
  CHECK(cli({"compare", "--config", empty.string(), "--out", (dir / "e").string(), "--quiet"}).code == kExitValidation);

  const auto small = write_config(dir, {{"schema_version", 1},
                                        {"compare", {{"pitch_targets_deg", {30}},
                                                     {"depth_targets", {2}},
                                                     {"sigma_levels", {0.0}},
                                                     {"depth_duration", 150}}}});
  REQUIRE(cli({"compare", "--config", small.string(), "--out", (dir / "s").string(), "--quiet"}).code == 0);
  const json report = json::parse(slurp(dir / "s" / "report.json"));
  REQUIRE(report["cells"].size() == 2);
  for (const auto& cell : report["cells"]) {
    CHECK(cell["nlc_percent_error"].get<double>() < 2.0);
    CHECK(cell["pid_percent_error"].get<double>() < 2.0);
  }
  CHECK(fs::exists(dir / "s" / "compare_table.csv"));
}

TEST_CASE("maneuver patterns") {
  ScenarioConfig c = default_scenario();
  c.maneuver.pattern = Pattern::kCircle;
  const auto circle = run_maneuver(c);
  CHECK(circle.completed);
  CHECK(circle.report["circle_heading_change_deg"].get<double>() >= 340.0);

  c.maneuver.pattern = Pattern::kSCurve;
  const auto s = run_maneuver(c);
  CHECK(s.completed);
  const auto signs = s.report["s_phase_dive_roll_signs"];
  REQUIRE(signs.size() == 2);
  CHECK(signs[0].get<int>() == -signs[1].get<int>());
  // Roll command sign flips with each glide segment and is reversed each cycle.
  std::vector<double> rolls;
  for (const auto& seg : s.segments) rolls.push_back(seg.segment.roll_target);
  REQUIRE(rolls.size() == 4);
  CHECK(rolls[0] * rolls[2] < 0);
  CHECK(rolls[1] * rolls[3] < 0);

  const auto dir = scratch("maneuver");
  REQUIRE(cli({"maneuver", "--pattern", "circle_to_s", "--out", (dir / "m").string(), "--quiet"}).code == 0);
  const json report = json::parse(slurp(dir / "m" / "report.json"));
  CHECK(report["pattern"] == "circle_to_s");
  CHECK(report["nlc_at_every_transition"].get<bool>());
  CHECK(cli({"maneuver", "--pattern", "spiral"}).code == kExitValidation);
}

TEST_CASE("estimate: noise-free corpus, chains started at the truth") {
  ScenarioConfig c = default_scenario();
  c.estimate.corpus.ballast_levels = {1.0, 0.5};
  c.estimate.corpus.sliding_levels = {1.0, 0.3};
  c.estimate.corpus.servo_levels = {1.0, 0.4};
  c.estimate.corpus.duration = 30;
  c.estimate.corpus.accel_noise.setZero();
  c.estimate.chains = 2;
  c.estimate.steps = 4000;
  c.estimate.sigma_noise = 1e-4;
  c.estimate.init = ChainInit::kTruth;
  const auto r = run_estimate(c, true);
  const auto truth = *r.truth;
  for (const auto& ch : r.chains) {
    for (Eigen::Index k = 0; k < ch.size(); ++k)
      CHECK(((ch.samples.row(k).transpose() - truth).array().abs() <= 1e-3 * truth.array().abs() + 1e-6).all());
  }
  for (const auto& chain : r.report["chains"])
    CHECK(chain["worst_recovery_error_percent"].get<double>() < 0.1);
}

TEST_CASE("estimate: mocap route through files") {
  const auto dir = scratch("estimate");
  const auto cfg = write_config(dir, {{"schema_version", 1},
                                      {"estimate", {{"chains", 2},
                                                    {"steps", 3000},
                                                    {"route", "mocap"},
                                                    {"write_corpus", true},
                                                    {"corpus", {{"ballast_levels", {1.0}},
                                                                {"sliding_levels", {1.0, 0.5}},
                                                                {"servo_levels", {1.0}}}}}}});
  const auto r = cli({"estimate", "--synthetic", "--config", cfg.string(), "--out", (dir / "syn").string(), "--quiet"});
  REQUIRE(r.code == 0);
  for (const char* f : {"chain_0.csv", "chain_1.csv", "summary.txt", "report.json"}) CHECK(fs::exists(dir / "syn" / f));
  CHECK(fs::exists(dir / "syn" / "corpus" / "run_000.mocap.csv"));

  // The written corpus loads back as a dataset.
  const auto back = cli({"estimate", "--dataset", (dir / "syn" / "corpus").string(), "--config", cfg.string(),
                         "--out", (dir / "ds").string(), "--quiet"});
  CHECK(back.code == 0);
  const json report = json::parse(slurp(dir / "ds" / "report.json"));
  CHECK(report["runs"] == 2);
  CHECK_FALSE(report["synthetic"].get<bool>());
}
