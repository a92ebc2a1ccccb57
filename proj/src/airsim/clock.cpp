#include "avtrack/airsim/clock.hpp"

#include <cmath>
#include <stdexcept>

namespace avtrack::airsim {

void ClockParams::validate() const {
  if (skew_regimes.empty()) throw std::invalid_argument("clock needs at least one skew regime");
  for (const auto& r : skew_regimes) {
    if (!(r.noise_std >= 0.0)) throw std::invalid_argument("regime noise_std must be >= 0");
    if (!(r.dwell_mean > 0.0)) throw std::invalid_argument("regime dwell_mean must be > 0");
    if (!std::isfinite(r.skew)) throw std::invalid_argument("regime skew must be finite");
  }
  if (!std::isfinite(initial_offset)) throw std::invalid_argument("initial_offset must be finite");
  if (!(servo_gain >= 0.0)) throw std::invalid_argument("servo_gain must be >= 0");
}

std::vector<double> simulate_clock(const ClockParams& params, std::span<const double> sample_times,
                                   Rng& rng) {
  params.validate();
  for (std::size_t k = 1; k < sample_times.size(); ++k)
    if (!(sample_times[k] > sample_times[k - 1]))
      throw std::invalid_argument("simulate_clock: sample times must be strictly increasing");

  std::vector<double> eta(sample_times.size());
  if (eta.empty()) return eta;

  Rng regime_rng(params.regime_switch_seed);
  const std::size_t n_regimes = params.skew_regimes.size();
  std::size_t regime = 0;
  auto draw_dwell = [&](std::size_t r) {
    std::exponential_distribution<double> d(1.0 / params.skew_regimes[r].dwell_mean);
    return d(regime_rng);
  };
  double next_switch = sample_times[0] + (n_regimes > 1 ? draw_dwell(regime) : INFINITY);

  std::normal_distribution<double> unit(0.0, 1.0);
  eta[0] = params.initial_offset;
  for (std::size_t k = 1; k < eta.size(); ++k) {
    const double t_prev = sample_times[k - 1];
    while (t_prev >= next_switch) {
      // Jump uniformly to one of the other regimes.
      std::uniform_int_distribution<std::size_t> pick(0, n_regimes - 2);
      std::size_t r = pick(regime_rng);
      if (r >= regime) ++r;
      regime = r;
      next_switch += draw_dwell(regime);
    }
    const SkewRegime& reg = params.skew_regimes[regime];
    const double tau = sample_times[k] - t_prev;
    const double skew = reg.skew - params.servo_gain * (eta[k - 1] - params.initial_offset);
    const double noise = reg.noise_std > 0.0 ? reg.noise_std * unit(rng) : 0.0;
    eta[k] = eta[k - 1] + skew * tau + noise;
  }
  return eta;
}

ClockTrace::ClockTrace(double t0, double step, std::vector<double> offsets)
    : t0_(t0), step_(step), offsets_(std::move(offsets)) {
  if (!(step_ > 0.0)) throw std::invalid_argument("ClockTrace step must be > 0");
}

double ClockTrace::offset_at(double t) const {
  if (offsets_.empty()) return 0.0;
  const double u = (t - t0_) / step_;
  if (u <= 0.0) return offsets_.front();
  const auto last = static_cast<double>(offsets_.size() - 1);
  if (u >= last) return offsets_.back();
  const auto i = static_cast<std::size_t>(u);
  const double f = u - static_cast<double>(i);
  return offsets_[i] + f * (offsets_[i + 1] - offsets_[i]);
}

}  // namespace avtrack::airsim
