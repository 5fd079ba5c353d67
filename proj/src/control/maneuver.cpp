#include "glider/control/maneuver.hpp"

#include "glider/errors.hpp"

namespace glider {

std::string_view to_string(Pattern p) {
  switch (p) {
    case Pattern::kCircle: return "circle";
    case Pattern::kSCurve: return "s_curve";
    case Pattern::kCircleToS: break;
  }
  return "circle_to_s";
}

Pattern parse_pattern(std::string_view name) {
  for (Pattern p : {Pattern::kCircle, Pattern::kSCurve, Pattern::kCircleToS})
    if (to_string(p) == name) return p;
  throw ValidationError("unknown maneuver pattern '" + std::string(name) +
                        "' (expected circle, s_curve or circle_to_s)");
}

std::vector<std::string> validate(const ManeuverSpec& s) {
  std::vector<std::string> problems;
  if (s.cycles < 1) problems.emplace_back("maneuver.cycles must be >= 1");
  if (!(s.roll >= 0)) problems.emplace_back("maneuver.roll_deg must be >= 0");
  if (!(s.glide_pitch > 0)) problems.emplace_back("maneuver.glide_pitch_deg must be > 0");
  if (!(s.ballast > 0)) problems.emplace_back("maneuver.ballast must be > 0");
  if (!(s.dive_depth > s.climb_depth)) problems.emplace_back("maneuver.dive_depth must exceed climb_depth");
  if (!(s.max_duration > 0)) problems.emplace_back("maneuver.max_duration must be > 0");
  return problems;
}

std::vector<Segment> plan_segments(const ManeuverSpec& spec) {
  std::vector<Segment> out;
  auto add_phase = [&](bool s_phase, int first_cycle) {
    for (int c = 0; c < spec.cycles; ++c) {
      const int turn = s_phase && (c % 2 == 1) ? -1 : 1;
      for (bool dive : {true, false}) {
        // Positive bank turns toward increasing heading in a dive, the other way in a climb.
        const double roll = turn * (dive ? 1.0 : -1.0) * spec.roll;
        out.push_back({first_cycle + c, dive, turn, s_phase, roll});
      }
    }
  };
  switch (spec.pattern) {
    case Pattern::kCircle: add_phase(false, 0); break;
    case Pattern::kSCurve: add_phase(true, 0); break;
    case Pattern::kCircleToS:
      add_phase(false, 0);
      add_phase(true, spec.cycles);
      break;
  }
  return out;
}

ManeuverController::ManeuverController(const VehicleParams<double>& params,
                                       GliderControllerConfig config, ManeuverSpec spec)
    : spec_(spec), segments_(plan_segments(spec)), inner_(params, config) {
  if (auto problems = validate(spec_); !problems.empty()) throw ValidationError(problems);
}

void ManeuverController::start_segment(std::size_t i, double t) {
  if (!log_.empty()) log_.back().t_end = t;
  next_ = i + 1;
  if (i >= segments_.size()) return;
  const Segment& s = segments_[i];
  inner_.set_ballast(s.dive ? spec_.ballast : -spec_.ballast);
  inner_.set_pitch_target(s.dive ? -spec_.glide_pitch : spec_.glide_pitch);
  inner_.set_roll_target(s.roll_target);
  log_.push_back({s, t, -1});
}

ControlOutput ManeuverController::update(double t, const VehicleState<double>& state,
                                         const ActuatorState<double>& act) {
  if (next_ == 0) start_segment(0, t);
  const Segment& current = segments_[next_ - 1];
  const bool reached = current.dive ? state.pose.z >= spec_.dive_depth
                                    : state.pose.z <= spec_.climb_depth;
  if (reached) start_segment(next_, t);
  if (finished()) {
    ControlOutput hold;
    hold.command = {act.gamma, act.delta_rs, act.m_b, inner_.diagnostics().mode};
    return hold;
  }
  return inner_.update(t, state, act);
}

}  // namespace glider
