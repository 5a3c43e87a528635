#include "nirbench/glucose.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nirbench/io_util.hpp"
#include "nirbench/rng.hpp"

namespace nirbench {

void BergmanParams::validate() const {
  if (glucose_effectiveness <= 0 || remote_decay <= 0 || insulin_gain <= 0 ||
      meal_absorption_rate <= 0)
    throw std::invalid_argument("bergman params: all rates must be > 0");
  if (basal_mgdl < kGlucoseMin || basal_mgdl > kGlucoseMax)
    throw std::invalid_argument("bergman params: basal glucose outside [60, 400]");
}

void GlucoseTrajectory::validate() const {
  if (plasma_mgdl.size() != interstitial_mgdl.size())
    throw std::invalid_argument("trajectory: series lengths differ");
  for (double v : plasma_mgdl)
    if (v < kGlucoseMin || v > kGlucoseMax) throw std::invalid_argument("plasma outside [60, 400]");
  for (double v : interstitial_mgdl)
    if (v < kGlucoseMin || v > kGlucoseMax)
      throw std::invalid_argument("interstitial outside [60, 400]");
}

namespace {

double event_forcing(const std::vector<GlucoseEvent>& events, int t, double k_abs) {
  double r = 0.0;
  for (const auto& e : events) {
    int dt = t - e.start_min;
    switch (e.type) {
      case EventType::Meal: {
        if (dt >= 0) r += e.magnitude * k_abs * k_abs * dt * std::exp(-k_abs * dt);
        break;
      }
      case EventType::Exercise: {
        if (dt >= 0 && dt < 45) r -= e.magnitude * std::sin(M_PI * dt / 45.0);
        break;
      }
      case EventType::Dawn: {
        // 04:30-06:00 ramp regardless of start_min
        if (t >= 270 && t <= 360) r += e.magnitude * std::sin(M_PI * (t - 270) / 90.0);
        break;
      }
    }
  }
  return r;
}

}  // namespace

GlucoseTrajectory simulate_plasma(const BergmanParams& params,
                                  const std::vector<GlucoseEvent>& events) {
  params.validate();
  for (const auto& e : events)
    if (e.start_min < 0 || e.start_min >= kMinutesPerDay)
      throw std::invalid_argument("glucose event outside the time grid");

  GlucoseTrajectory traj;
  traj.events = events;
  traj.plasma_mgdl.resize(kMinutesPerDay);
  double g = params.basal_mgdl;
  double x = 0.0;
  for (int t = 0; t < kMinutesPerDay; ++t) {
    traj.plasma_mgdl[t] = g;
    double r = event_forcing(events, t, params.meal_absorption_rate);
    double dg = -params.glucose_effectiveness * (g - params.basal_mgdl) - x * g + r;
    double dx = -params.remote_decay * x + params.insulin_gain * std::max(g - params.basal_mgdl, 0.0);
    g += dg;
    x += dx;
    if (g < kGlucoseMin) { g = kGlucoseMin; ++traj.clamp_count; }
    if (g > kGlucoseMax) { g = kGlucoseMax; ++traj.clamp_count; }
  }
  return traj;
}

std::vector<double> interstitial_lag(const std::vector<double>& plasma, double tau_min,
                                     RandomStream& rng, double noise_sd) {
  if (tau_min < 7.0 || tau_min > 15.0)
    throw std::domain_error("interstitial_lag: tau must be in [7, 15] minutes");
  std::vector<double> gi(plasma.size());
  if (plasma.empty()) return gi;
  const double a = 1.0 - std::exp(-1.0 / tau_min);  // exact over a 1-min step
  gi[0] = plasma[0];
  for (std::size_t n = 1; n < plasma.size(); ++n)
    gi[n] = gi[n - 1] + a * (plasma[n - 1] - gi[n - 1]);
  if (noise_sd > 0.0)
    for (auto& v : gi) v = std::clamp(v + rng.gaussian(0.0, noise_sd), kGlucoseMin, kGlucoseMax);
  return gi;
}

std::vector<int> sample_measurement_times(int day_minutes, int n, RandomStream& rng) {
  if (n < 1) throw std::invalid_argument("sample_measurement_times: n must be >= 1");
  constexpr int kSeparation = 60;
  if ((n - 1) * kSeparation >= day_minutes)
    throw std::invalid_argument("sample_measurement_times: separation infeasible for n=" +
                                std::to_string(n));
  std::vector<int> times;
  int attempts = 0;
  while (static_cast<int>(times.size()) < n) {
    if (++attempts > 100000)
      throw std::invalid_argument("sample_measurement_times: could not place measurements");
    int t = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(day_minutes)));
    bool ok = true;
    for (int u : times)
      if (std::abs(u - t) < kSeparation) { ok = false; break; }
    if (ok) times.push_back(t);
  }
  std::sort(times.begin(), times.end());
  return times;
}

std::vector<GlucoseEvent> default_event_schedule(RandomStream& rng) {
  std::vector<GlucoseEvent> events;
  const int meal_centers[3] = {480, 780, 1140};  // 08:00, 13:00, 19:00
  for (int c : meal_centers) {
    int start = c + static_cast<int>(rng.uniform(-60.0, 60.0));
    events.push_back({EventType::Meal, start, kDefaultMealDose * rng.uniform(0.85, 1.15)});
  }
  double p_ex = rng.uniform();
  int ex_start = 360 + static_cast<int>(rng.uniform(0.0, 840.0));
  double ex_mag = kDefaultExerciseMag * rng.uniform(0.7, 1.3);
  if (p_ex < 0.3) events.push_back({EventType::Exercise, ex_start, ex_mag});
  double p_dawn = rng.uniform();
  double dawn_mag = kDefaultDawnMag * rng.uniform(0.7, 1.3);
  if (p_dawn < 0.5) events.push_back({EventType::Dawn, 270, dawn_mag});
  return events;
}

std::string trajectory_to_csv(const GlucoseTrajectory& t) {
  std::string out = "t_min,plasma_mgdl,interstitial_mgdl\n";
  for (std::size_t i = 0; i < t.plasma_mgdl.size(); ++i)
    out += std::to_string(i) + "," + fmt_double(t.plasma_mgdl[i]) + "," +
           fmt_double(t.interstitial_mgdl[i]) + "\n";
  return out;
}

}  // namespace nirbench
