#pragma once

#include <string>
#include <vector>

namespace nirbench {

class RandomStream;

inline constexpr int kMinutesPerDay = 1440;
inline constexpr double kGlucoseMin = 60.0;
inline constexpr double kGlucoseMax = 400.0;

struct BergmanParams {
  double basal_mgdl = 110.0;          // G_b
  double glucose_effectiveness = 0.02;  // p1, 1/min
  double remote_decay = 0.025;          // p2, 1/min
  double insulin_gain = 1.3e-5;         // p3
  double meal_absorption_rate = 0.035;  // k_abs, 1/min

  void validate() const;
};

enum class EventType { Meal, Exercise, Dawn };

struct GlucoseEvent {
  EventType type = EventType::Meal;
  int start_min = 0;
  double magnitude = 1.0;
};

// Default event magnitudes: an isolated meal peaks ~+53 mg/dL near +41 min,
// exercise dips ~30 mg/dL, the dawn ramp adds ~21 mg/dL in 04:30-06:00.
inline constexpr double kDefaultMealDose = 240.0;
inline constexpr double kDefaultExerciseMag = 1.5;
inline constexpr double kDefaultDawnMag = 1.15;

struct GlucoseTrajectory {
  std::vector<double> plasma_mgdl;        // one value per minute
  std::vector<double> interstitial_mgdl;  // same length
  std::vector<GlucoseEvent> events;
  int clamp_count = 0;

  void validate() const;
};

/// Explicit-Euler Bergman minimal model at 1-minute steps over 24 h, with
/// meal/exercise/dawn forcing. Values clamped to [60, 400]; clamp events
/// counted in the returned trajectory.
GlucoseTrajectory simulate_plasma(const BergmanParams& params,
                                  const std::vector<GlucoseEvent>& events);

/// First-order plasma->interstitial lag dGi/dt = (Gp - Gi)/tau, discretized
/// exactly over each 1-minute step so the step response at t = tau is
/// 1 - 1/e. tau outside [7, 15] min throws std::domain_error. noise_sd adds
/// per-minute N(0, sd) to the filtered series.
std::vector<double> interstitial_lag(const std::vector<double>& plasma, double tau_min,
                                     RandomStream& rng, double noise_sd = 0.0);

/// n measurement minutes, uniform over the day with >= 60 min separation,
/// sorted. Infeasible spacing throws std::invalid_argument.
std::vector<int> sample_measurement_times(int day_minutes, int n, RandomStream& rng);

/// Daily schedule: three jittered meals, exercise with probability 0.3,
/// dawn with probability 0.5; magnitudes jittered around the defaults.
std::vector<GlucoseEvent> default_event_schedule(RandomStream& rng);

std::string trajectory_to_csv(const GlucoseTrajectory& t);

}  // namespace nirbench
