#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "avtrack/clocksync/offset.hpp"
#include "avtrack/random.hpp"

namespace avtrack::lstm {

struct LstmConfig {
  int hidden_units = 10;
  int fc1_units = 5;
  double dropout_rate = 0.2;
  double learning_rate = 0.01;
  int epochs = 200;
  int patience = 20;    // epochs without improvement before stopping
  int window_len = 8;   // input sequence length
  int batch_size = 32;
  std::uint64_t seed = 1;

  void validate() const;
};

/// sequence -> LSTM -> FC(fc1_units) -> dropout -> FC(1), trained on squared error.
/// Parameters live in one flat vector:
///   Wx (4H), Wh (4H x H, column-major), b (4H), W1 (F x H), b1 (F), W2 (F), b2 (1)
/// with gates ordered input, forget, cell, output.
struct ClockModelLSTM {
  LstmConfig config;
  Eigen::VectorXd theta;
  double norm_mean = 0.0;  // mean one-step change of the training series
  double norm_std = 1.0;   // spread of the one-step changes
  double t_start = 0.0;
  double t_end = 0.0;
  double tau = 1.0;  // mean sampling interval of the training window, s
  int sn_id = 0;
};

class LstmDivergenceError : public std::runtime_error {
 public:
  LstmDivergenceError(const std::string& what, int epoch, double loss)
      : std::runtime_error(what), epoch(epoch), loss(loss) {}
  int epoch;
  double loss;
};

std::size_t parameter_count(const LstmConfig& c);

/// Glorot-uniform weights from the config seed; forget-gate bias 1, other biases 0.
ClockModelLSTM build(const LstmConfig& config);

/// Inference on a normalised sequence of length window_len (dropout off).
/// Throws std::invalid_argument on NaN input or a wrong length.
double forward(const ClockModelLSTM& model, std::span<const double> sequence);

/// Final hidden state after the recurrence, for inspection.
Eigen::VectorXd final_hidden(const ClockModelLSTM& model, std::span<const double> sequence);

struct Batch {
  std::vector<std::vector<double>> inputs;  // each window_len long, normalised
  std::vector<double> targets;
};

/// Mean squared error over the batch and its gradient with respect to theta.
/// `dropout_rng` null means dropout off.
double loss_and_gradient(const ClockModelLSTM& model, const Batch& batch, Eigen::VectorXd* grad,
                         Rng* dropout_rng = nullptr);

/// Max over parameters of |analytic - numeric| / max(|analytic|, |numeric|, 1e-6)
/// with central differences of step 1e-5 (dropout off).
double gradient_check(const ClockModelLSTM& model, const Batch& batch);

struct TrainReport {
  int epochs_run = 0;
  double first_loss = 0.0;
  double final_loss = 0.0;
  std::vector<double> loss_history;
};

/// Each window is expressed relative to its last value: inputs are
/// (eta[i] - eta[last]) / norm_std and the target is
/// (eta[next] - eta[last] - norm_mean) / norm_std, so the network is
/// insensitive to the absolute offset level.
///
/// train() fits the normalisation to `series`, then trains one-step-ahead on
/// sliding windows with Adam (0.9, 0.999, 1e-8). One model step is the mean
/// sample interval. Needs more than window_len + 10 samples.
TrainReport train(ClockModelLSTM& model, std::span<const clocksync::OffsetSample> series);
/// Same on a plain value series with unit spacing.
TrainReport train_values(ClockModelLSTM& model, std::span<const double> values);

/// Prediction `steps` samples past the end of `recent` (raw seconds): one
/// network step, then norm_mean per further step. Needs window_len values.
double predict_steps(const ClockModelLSTM& model, std::span<const double> recent, int steps);

/// Predicts max(1, round((target_time - t_last) / tau)) steps past the last
/// window_len samples of `history`.
double predict_offset(const ClockModelLSTM& model, std::span<const clocksync::OffsetSample> history,
                      double target_time);

/// One-step residuals eta[k] - eta_hat[k] over `values` (first window_len skipped).
std::vector<double> residuals(const ClockModelLSTM& model, std::span<const double> values);

}  // namespace avtrack::lstm
