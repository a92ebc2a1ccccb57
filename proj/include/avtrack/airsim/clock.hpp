#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "avtrack/random.hpp"

namespace avtrack::airsim {

struct SkewRegime {
  double skew = 0.0;        // s/s
  double noise_std = 0.0;   // s, per recursion step
  double dwell_mean = 1.0;  // s, mean sojourn before switching
};

/// Drifting-clock generator. The offset follows
///   eta[k] = eta[k-1] + lambda[k-1] * tau[k-1] + omega[k]
/// with lambda taken from the active regime. Regimes switch as a Markov dwell
/// process. `servo_gain` (1/s) adds a restoring term
///   lambda_eff = skew - servo_gain * (eta - initial_offset)
/// that models the slow host-side discipline of a receiver clock; zero leaves
/// the plain recursion.
struct ClockParams {
  double initial_offset = 0.0;
  std::vector<SkewRegime> skew_regimes{SkewRegime{}};
  std::uint64_t regime_switch_seed = 0;
  double servo_gain = 0.0;

  void validate() const;
};

/// Offsets at `sample_times` (strictly increasing). `rng` drives the additive
/// noise; regime switching uses its own stream seeded from `regime_switch_seed`.
std::vector<double> simulate_clock(const ClockParams& params, std::span<const double> sample_times,
                                   Rng& rng);

/// Offset trace on a uniform grid with linear interpolation in between.
class ClockTrace {
 public:
  ClockTrace() = default;
  ClockTrace(double t0, double step, std::vector<double> offsets);

  /// Identically-zero trace (synchronized receiver).
  static ClockTrace zero() { return {}; }

  double offset_at(double t) const;
  double step() const { return step_; }
  const std::vector<double>& offsets() const { return offsets_; }

 private:
  double t0_ = 0.0;
  double step_ = 1.0;
  std::vector<double> offsets_;
};

}  // namespace avtrack::airsim
