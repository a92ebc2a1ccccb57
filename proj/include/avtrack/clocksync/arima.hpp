#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace avtrack::clocksync {

struct ArimaOrder {
  int p = 0;
  int d = 0;
  int q = 0;

  bool operator==(const ArimaOrder&) const = default;
};

std::string to_string(const ArimaOrder& o);

/// Filter state carried by a fitted model: [offset, ARMA state...].
struct Kf1State {
  Eigen::VectorXd x;
  Eigen::MatrixXd P;
  double t = 0.0;  // time of the last processed sample
  double last_measurement = 0.0;
  bool initialised = false;
};

struct ClockModelAR {
  ArimaOrder order;
  std::vector<double> ar;  // a_1..a_p, (1 - sum a_i L^i)
  std::vector<double> ma;  // b_1..b_q, (1 + sum b_i L^i)
  double mean = 0.0;       // mean of the d-times differenced series
  double noise_var = 0.0;  // innovation variance
  double t_start = 0.0;    // training window
  double t_end = 0.0;
  int sn_id = 0;
  // KF1 configuration
  double tau = 1.0;       // model step: mean sampling interval of the training window, s
  double meas_var = 0.0;  // measurement noise variance, s^2
  double offset_noise_var = 0.0;  // extra process noise on the offset row, s^2 per step
  Kf1State kf1;
};

class NonStationaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when the optimiser runs out of iterations; carries the best model.
class ArimaConvergenceError : public std::runtime_error {
 public:
  ArimaConvergenceError(const std::string& what, ClockModelAR best, int iterations, double sse)
      : std::runtime_error(what), best(std::move(best)), iterations(iterations), sse(sse) {}
  ClockModelAR best;
  int iterations;
  double sse;
};

struct OrderSelectionOptions {
  int max_lag = 20;
  int max_order = 8;
};

/// Box-Jenkins identification: d from the KPSS gate, q and p from the longest
/// initial run of significant ACF / PACF lags of the differenced series.
/// Throws NonStationaryError if one difference is not enough.
ArimaOrder select_order(std::span<const double> series, const OrderSelectionOptions& opt = {});

struct FitOptions {
  int max_iterations = 200;
  double tolerance = 1e-10;  // relative change in the sum of squares
};

/// Conditional-sum-of-squares fit of the d-times differenced series with a
/// mean term. Coefficients are kept stationary and invertible.
ClockModelAR fit_arima(std::span<const double> series, const ArimaOrder& order,
                       const FitOptions& opt = {});

/// Conditional one-step prediction residuals of the differenced series under
/// `model`, starting once p lagged values exist. Length n - d - p.
std::vector<double> css_residuals(const ClockModelAR& model, std::span<const double> series);

/// One-step-ahead residuals eta[k] - eta_pred[k] on the offset series itself;
/// the first d + p values have no prediction and are skipped.
std::vector<double> residuals(const ClockModelAR& model, std::span<const double> series);

/// Largest modulus of the roots of z^p - a_1 z^(p-1) - ... - a_p (0 for p = 0).
/// The process is stationary when this is below 1.
double max_companion_modulus(std::span<const double> coeffs);
/// True when AR roots and MA roots lie outside the unit circle by `margin`.
bool is_stationary(std::span<const double> ar, double margin = 1e-6);
bool is_invertible(std::span<const double> ma, double margin = 1e-6);

}  // namespace avtrack::clocksync
