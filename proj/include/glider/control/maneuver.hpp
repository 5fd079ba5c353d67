#pragma once

/**
 * @file maneuver.hpp
 * @brief Sawtooth glide patterns (circle, S-curve and circle followed by S)
 *        flown with the hybrid controller.
 *
 * A cycle is one dive and one climb. Each segment schedules the ballast and
 * sets pitch and roll targets; the segment ends when the depth trigger is
 * crossed. With the roll mass, a given bank turns the vehicle one way in a
 * dive and the other way in a climb, so the roll sign is chosen per segment
 * from the desired turn direction: circle keeps the turn direction, S-curve
 * reverses it every cycle.
 */

#include "glider/control/glider_controller.hpp"

#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace glider {

enum class Pattern { kCircle, kSCurve, kCircleToS };

std::string_view to_string(Pattern p);
/// Throws ValidationError for an unknown name.
Pattern parse_pattern(std::string_view name);

struct ManeuverSpec {
  Pattern pattern{Pattern::kCircleToS};
  /// Cycles per phase; circle_to_s flies this many circle cycles, then as many S cycles.
  int cycles{2};
  double roll{std::numbers::pi / 6};         // rad, bank magnitude
  double glide_pitch{std::numbers::pi / 30};  // rad, magnitude
  double ballast{0.06};      // kg, magnitude
  double dive_depth{5.0};    // m, a dive ends below this depth
  double climb_depth{1.0};   // m, a climb ends above this depth
  double start_depth{1.0};   // m, initial depth of the run
  double max_duration{1200.0};  // s
};

std::vector<std::string> validate(const ManeuverSpec& spec);

struct Segment {
  int cycle{0};
  bool dive{true};
  /// +1 turns toward increasing heading.
  int turn{1};
  bool s_phase{false};
  double roll_target{0};
};

/// Segment list for a spec, in flight order.
std::vector<Segment> plan_segments(const ManeuverSpec& spec);

struct SegmentRecord {
  Segment segment;
  double t_start{0};
  double t_end{-1};  // < 0 while unfinished
};

class ManeuverController : public Controller {
 public:
  ManeuverController(const VehicleParams<double>& params, GliderControllerConfig config,
                     ManeuverSpec spec);

  ControlOutput update(double t, const VehicleState<double>& state,
                       const ActuatorState<double>& act) override;
  bool finished() const override { return next_ > segments_.size(); }

  const std::vector<SegmentRecord>& log() const { return log_; }
  const GliderController& inner() const { return inner_; }

 private:
  void start_segment(std::size_t i, double t);

  ManeuverSpec spec_;
  std::vector<Segment> segments_;
  GliderController inner_;
  std::vector<SegmentRecord> log_;
  std::size_t next_{0};
};

}  // namespace glider
