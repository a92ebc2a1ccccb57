#pragma once

#include <optional>
#include <span>

#include "avtrack/clocksync/arima.hpp"
#include "avtrack/clocksync/offset.hpp"

namespace avtrack::clocksync {

// KF1 tracks the offset jointly with the ARMA state of its (differenced)
// dynamics. One model step spans `tau` seconds, the mean sampling interval of
// the training window. With w the differenced offset and alpha the ARMA state
//   d = 1:  eta[k] = eta[k-1] + mean + alpha[k][0]
//   d = 0:  eta[k] = mean + alpha[k][0]
// and alpha[k] = T alpha[k-1] + [1, b_1, ...] xi[k].

struct Kf1Options {
  std::optional<double> meas_var;     // overrides quant^2/12 + residual variance
  double quant_step = 1.0 / 12e6;     // s, SN timestamp resolution
  double offset_noise_var = 0.0;      // extra process noise on the offset row, s^2 per step
};

struct OffsetPrediction {
  double eta = 0.0;
  double variance = 0.0;
};

/// Sets tau and the measurement noise, then filters through `window` so the
/// state sits at the last sample. Samples must be time-ordered.
void kf1_initialize(ClockModelAR& model, std::span<const OffsetSample> window,
                    const Kf1Options& opt = {});

/// Prediction at `t` >= the last processed time. The horizon is split into
/// whole model steps plus a linearly interpolated fraction; the reported
/// variance is the running maximum over the horizon so it never narrows.
OffsetPrediction kf1_predict_offset(const ClockModelAR& model, double t);

/// Advances max(1, round(dt / tau)) steps and applies the measurement.
/// Throws std::invalid_argument for a sample older than the last one.
void kf1_update_in_place(ClockModelAR& model, const OffsetSample& sample);
ClockModelAR kf1_update(ClockModelAR model, const OffsetSample& sample);

/// Select the order, fit, and initialise KF1 on a training window.
/// A non-converged fit falls back to its best-so-far coefficients.
ClockModelAR train_ar_model(std::span<const OffsetSample> window, int sn_id,
                            const Kf1Options& opt = {}, const OrderSelectionOptions& sel = {});

}  // namespace avtrack::clocksync
