#pragma once

namespace avtrack::airsim {

/// Air-to-ground link parameters. Defaults are the urban constants commonly
/// used with the elevation-dependent LoS model, at the 1090 MHz ADS-B carrier.
struct ChannelParams {
  double carrier_frequency = 1090e6;  // Hz
  double a0 = 9.61;
  double b0 = 0.16;
  double mu_los = 1.0;    // dB
  double mu_nlos = 20.0;  // dB
  double rx_sensitivity = -90.0;  // dBm
  double tx_power = 51.0;         // dBm

  void validate() const;
};

enum class LinkKind { LoS, NLoS };

/// 1 / (1 + a0 exp(-b0 theta)), theta in degrees within [0, 90].
double los_probability(double theta_deg, double a0, double b0);

/// Free-space term plus the mean excess loss of the link class, in dB.
/// Throws std::invalid_argument for non-positive frequency or distance.
double path_loss(double frequency_hz, double distance_m, LinkKind link, const ChannelParams& params);

/// Received iff transmit power minus path loss clears the receiver sensitivity.
bool link_closes(double distance_m, LinkKind link, const ChannelParams& params);

}  // namespace avtrack::airsim
