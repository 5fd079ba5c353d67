#pragma once

/**
 * @file mocap.hpp
 * @brief Motion-capture recordings and their actuator schedules.
 *
 * Pose file: header `t,x,y,z,phi,theta,psi`, global frame with z down, angles
 * in rad. Schedule file: header `t,gamma,delta_rs,m_b`, step-hold (each row
 * applies from its t until the next row).
 */

#include "glider/model/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace glider {

struct MocapSample {
  double t{0};
  InertialPose<double> pose;
  EulerAngles<double> angles;
};

struct ScheduleEntry {
  double t{0};
  double gamma{0};
  double delta_rs{0};
  double m_b{0};
};

struct MocapRun {
  std::string name;
  std::vector<MocapSample> samples;
  std::vector<ScheduleEntry> schedule;

  /// Actuator entry active at time t (the first entry before the schedule starts).
  const ScheduleEntry& schedule_at(double t) const;
};

struct MocapDataset {
  std::vector<MocapRun> runs;
};

inline constexpr const char* kMocapHeader = "t,x,y,z,phi,theta,psi";
inline constexpr const char* kScheduleHeader = "t,gamma,delta_rs,m_b";

/// Parses a pose file. Throws ValidationError listing every bad row.
std::vector<MocapSample> read_mocap(std::istream& in, const std::string& source = "<stream>");
std::vector<ScheduleEntry> read_schedule(std::istream& in, const std::string& source = "<stream>");

/// Writes with 17 significant digits so that a re-load is exact.
void write_mocap(std::ostream& out, const std::vector<MocapSample>& samples);
void write_schedule(std::ostream& out, const std::vector<ScheduleEntry>& schedule);

/// Loads `<stem>.mocap.csv` and `<stem>.actuators.csv`.
MocapRun load_mocap_run(const std::string& mocap_path, const std::string& schedule_path);

/// Every `*.mocap.csv` in a directory with its matching `*.actuators.csv`, sorted by name.
MocapDataset load_mocap(const std::string& directory);
void write_mocap_dataset(const std::string& directory, const MocapDataset& dataset);

}  // namespace glider
