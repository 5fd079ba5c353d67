#include "glider/sysid/mocap.hpp"

#include "glider/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace glider {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kMocapSuffix = ".mocap.csv";
constexpr std::string_view kScheduleSuffix = ".actuators.csv";

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
  return s;
}

// Reads rows of N numbers after the expected header. Every problem is collected
// and thrown together; t must be strictly increasing.
template <std::size_t N>
std::vector<std::array<double, N>> read_table(std::istream& in, const std::string& header,
                                              const std::string& source) {
  std::vector<std::string> problems;
  std::vector<std::array<double, N>> rows;
  std::string line;
  if (!std::getline(in, line) || trim(line) != header)
    throw ValidationError(source + ": expected header '" + header + "'");
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    line = trim(line);
    if (line.empty()) continue;
    std::array<double, N> values{};
    std::stringstream ss(line);
    std::string cell;
    std::size_t n = 0;
    bool ok = true;
    while (std::getline(ss, cell, ',')) {
      if (n >= N) {
        ok = false;
        break;
      }
      char* end = nullptr;
      values[n] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0' || !std::isfinite(values[n])) {
        problems.push_back(source + ": row " + std::to_string(row) + ": bad value '" + cell + "'");
        ok = false;
      }
      ++n;
    }
    if (n != N) {
      problems.push_back(source + ": row " + std::to_string(row) + ": expected " +
                         std::to_string(N) + " columns");
      continue;
    }
    if (!ok) continue;
    if (!rows.empty() && !(values[0] > rows.back()[0]))
      problems.push_back(source + ": row " + std::to_string(row) + ": time not increasing");
    rows.push_back(values);
  }
  if (!problems.empty()) throw ValidationError(problems);
  return rows;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

void put(std::ostream& out, double v, bool last) {
  char buf[40];
  std::snprintf(buf, sizeof buf, last ? "%.17g\n" : "%.17g,", v);
  out << buf;
}

}  // namespace

const ScheduleEntry& MocapRun::schedule_at(double t) const {
  if (schedule.empty()) throw ValidationError("run '" + name + "' has no actuator schedule");
  auto it = std::upper_bound(schedule.begin(), schedule.end(), t,
                             [](double v, const ScheduleEntry& e) { return v < e.t; });
  return it == schedule.begin() ? *it : *std::prev(it);
}

std::vector<MocapSample> read_mocap(std::istream& in, const std::string& source) {
  std::vector<MocapSample> out;
  for (const auto& r : read_table<7>(in, kMocapHeader, source))
    out.push_back({r[0], {r[1], r[2], r[3]}, {r[4], r[5], r[6]}});
  if (out.size() < 3)
    throw ValidationError(source + ": a run needs at least 3 samples, got " +
                          std::to_string(out.size()));
  return out;
}

std::vector<ScheduleEntry> read_schedule(std::istream& in, const std::string& source) {
  std::vector<ScheduleEntry> out;
  for (const auto& r : read_table<4>(in, kScheduleHeader, source))
    out.push_back({r[0], r[1], r[2], r[3]});
  if (out.empty()) throw ValidationError(source + ": empty actuator schedule");
  return out;
}

void write_mocap(std::ostream& out, const std::vector<MocapSample>& samples) {
  out << kMocapHeader << '\n';
  for (const auto& s : samples) {
    put(out, s.t, false);
    put(out, s.pose.x, false);
    put(out, s.pose.y, false);
    put(out, s.pose.z, false);
    put(out, s.angles.phi, false);
    put(out, s.angles.theta, false);
    put(out, s.angles.psi, true);
  }
}

void write_schedule(std::ostream& out, const std::vector<ScheduleEntry>& schedule) {
  out << kScheduleHeader << '\n';
  for (const auto& e : schedule) {
    put(out, e.t, false);
    put(out, e.gamma, false);
    put(out, e.delta_rs, false);
    put(out, e.m_b, true);
  }
}

MocapRun load_mocap_run(const std::string& mocap_path, const std::string& schedule_path) {
  MocapRun run;
  std::string name = fs::path(mocap_path).filename().string();
  if (name.ends_with(kMocapSuffix)) name.resize(name.size() - kMocapSuffix.size());
  run.name = name;
  auto in = open_in(mocap_path);
  run.samples = read_mocap(in, mocap_path);
  auto sin = open_in(schedule_path);
  run.schedule = read_schedule(sin, schedule_path);
  return run;
}

MocapDataset load_mocap(const std::string& directory) {
  std::error_code ec;
  if (!fs::is_directory(directory, ec)) throw IoError("not a directory: " + directory);
  std::vector<std::string> stems;
  for (const auto& entry : fs::directory_iterator(directory)) {
    const std::string f = entry.path().filename().string();
    if (f.ends_with(kMocapSuffix)) stems.push_back(f.substr(0, f.size() - kMocapSuffix.size()));
  }
  std::sort(stems.begin(), stems.end());
  if (stems.empty()) throw ValidationError("no *" + std::string(kMocapSuffix) + " files in " + directory);
  MocapDataset ds;
  std::vector<std::string> problems;
  for (const auto& stem : stems) {
    const fs::path base(directory);
    try {
      ds.runs.push_back(load_mocap_run((base / (stem + std::string(kMocapSuffix))).string(),
                                       (base / (stem + std::string(kScheduleSuffix))).string()));
    } catch (const ValidationError& e) {
      problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    }
  }
  if (!problems.empty()) throw ValidationError(problems);
  return ds;
}

void write_mocap_dataset(const std::string& directory, const MocapDataset& dataset) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw IoError("cannot create " + directory + ": " + ec.message());
  for (const auto& run : dataset.runs) {
    const fs::path base(directory);
    auto out = open_out((base / (run.name + std::string(kMocapSuffix))).string());
    write_mocap(out, run.samples);
    auto sout = open_out((base / (run.name + std::string(kScheduleSuffix))).string());
    write_schedule(sout, run.schedule);
  }
}

}  // namespace glider
