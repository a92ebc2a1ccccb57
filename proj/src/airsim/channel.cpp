#include "avtrack/airsim/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "avtrack/constants.hpp"

namespace avtrack::airsim {

void ChannelParams::validate() const {
  if (!(carrier_frequency > 0.0)) throw std::invalid_argument("carrier_frequency must be > 0");
  if (!(b0 > 0.0)) throw std::invalid_argument("b0 must be > 0");
  if (!(a0 >= 0.0)) throw std::invalid_argument("a0 must be >= 0");
  if (!(mu_nlos >= mu_los)) throw std::invalid_argument("mu_nlos must be >= mu_los");
}

double los_probability(double theta_deg, double a0, double b0) {
  if (!(theta_deg >= 0.0 && theta_deg <= 90.0))
    throw std::invalid_argument("los_probability: theta outside [0, 90]");
  return 1.0 / (1.0 + a0 * std::exp(-b0 * theta_deg));
}

double path_loss(double frequency_hz, double distance_m, LinkKind link, const ChannelParams& params) {
  if (!(frequency_hz > 0.0)) throw std::invalid_argument("path_loss: frequency must be > 0");
  if (!(distance_m > 0.0)) throw std::invalid_argument("path_loss: distance must be > 0");
  const double fspl =
      20.0 * std::log10(4.0 * std::numbers::pi * frequency_hz * distance_m / kSpeedOfLight);
  return fspl + (link == LinkKind::LoS ? params.mu_los : params.mu_nlos);
}

bool link_closes(double distance_m, LinkKind link, const ChannelParams& params) {
  return params.tx_power - path_loss(params.carrier_frequency, distance_m, link, params) >=
         params.rx_sensitivity;
}

}  // namespace avtrack::airsim
