#include <algorithm>
#include <cmath>
#include <limits>

#include "avtrack/clocksync/stats.hpp"
#include "avtrack/lstm/lstm.hpp"

namespace avtrack::lstm {

namespace {

// Normalisation floor for (near-)constant training series, in seconds.
constexpr double kMinStd = 1e-12;

struct Windows {
  std::vector<std::vector<double>> inputs;
  std::vector<double> targets;
};

Windows make_windows(const ClockModelLSTM& model, std::span<const double> values) {
  Windows w;
  const auto L = static_cast<std::size_t>(model.config.window_len);
  for (std::size_t i = 0; i + L < values.size(); ++i) {
    const double last = values[i + L - 1];
    std::vector<double> in(L);
    for (std::size_t j = 0; j < L; ++j) in[j] = (values[i + j] - last) / model.norm_std;
    w.inputs.push_back(std::move(in));
    w.targets.push_back((values[i + L] - last - model.norm_mean) / model.norm_std);
  }
  return w;
}

TrainReport fit(ClockModelLSTM& model, std::span<const double> values) {
  const LstmConfig& cfg = model.config;
  if (static_cast<int>(values.size()) <= cfg.window_len + 10)
    throw std::invalid_argument("LSTM training needs more than window_len + 10 samples");
  std::vector<double> steps(values.size() - 1);
  for (std::size_t i = 0; i + 1 < values.size(); ++i) steps[i] = values[i + 1] - values[i];
  model.norm_mean = clocksync::mean(steps);
  model.norm_std = std::max(std::sqrt(clocksync::variance(steps)), kMinStd);
  const Windows data = make_windows(model, values);

  const auto n_par = model.theta.size();
  Eigen::VectorXd m1 = Eigen::VectorXd::Zero(n_par), m2 = Eigen::VectorXd::Zero(n_par), g;
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  Rng dropout_rng = derived_rng(cfg.seed, 0xd209);
  long step = 0;

  TrainReport rep;
  double best = std::numeric_limits<double>::infinity();
  int since_best = 0;
  const auto B = static_cast<std::size_t>(cfg.batch_size);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < data.inputs.size(); start += B) {
      const std::size_t end = std::min(start + B, data.inputs.size());
      Batch batch;
      batch.inputs.assign(data.inputs.begin() + static_cast<std::ptrdiff_t>(start),
                          data.inputs.begin() + static_cast<std::ptrdiff_t>(end));
      batch.targets.assign(data.targets.begin() + static_cast<std::ptrdiff_t>(start),
                           data.targets.begin() + static_cast<std::ptrdiff_t>(end));
      const double loss = loss_and_gradient(model, batch, &g, &dropout_rng);
      if (!std::isfinite(loss) || !g.allFinite())
        throw LstmDivergenceError("LSTM training diverged at epoch " + std::to_string(epoch), epoch, loss);
      epoch_loss += loss * static_cast<double>(end - start);
      ++step;
      m1 = kBeta1 * m1 + (1.0 - kBeta1) * g;
      m2 = kBeta2 * m2 + (1.0 - kBeta2) * g.cwiseProduct(g);
      const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      model.theta.array() -=
          cfg.learning_rate * (m1.array() / c1) / ((m2.array() / c2).sqrt() + kEps);
    }
    epoch_loss /= static_cast<double>(data.inputs.size());
    rep.loss_history.push_back(epoch_loss);
    rep.epochs_run = epoch + 1;
    if (epoch_loss < best - 1e-9 * std::max(1.0, std::isfinite(best) ? best : 1.0)) {
      best = epoch_loss;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  rep.first_loss = rep.loss_history.front();
  rep.final_loss = rep.loss_history.back();
  return rep;
}

}  // namespace

TrainReport train(ClockModelLSTM& model, std::span<const clocksync::OffsetSample> series) {
  std::vector<double> v(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) v[i] = series[i].eta;
  TrainReport rep = fit(model, v);
  model.t_start = series.front().t;
  model.t_end = series.back().t;
  model.tau = series.back().t > series.front().t
                  ? (series.back().t - series.front().t) / static_cast<double>(series.size() - 1)
                  : 1.0;
  return rep;
}

TrainReport train_values(ClockModelLSTM& model, std::span<const double> values) {
  TrainReport rep = fit(model, values);
  model.t_start = 0.0;
  model.t_end = static_cast<double>(values.size()) - 1.0;
  model.tau = 1.0;
  return rep;
}

double predict_steps(const ClockModelLSTM& model, std::span<const double> recent, int steps) {
  const auto L = static_cast<std::size_t>(model.config.window_len);
  if (recent.size() < L) throw std::invalid_argument("LSTM prediction needs window_len recent offsets");
  if (steps < 1) throw std::invalid_argument("prediction horizon must be >= 1 step");
  const auto window = recent.last(L);
  const double last = window.back();
  std::vector<double> z(L);
  for (std::size_t j = 0; j < L; ++j) z[j] = (window[j] - last) / model.norm_std;
  const double next = last + model.norm_mean + model.norm_std * forward(model, z);
  // Feeding smooth predictions back as inputs drifts away from the noisy
  // training windows, so later steps advance by the mean training step.
  return next + static_cast<double>(steps - 1) * model.norm_mean;
}

double predict_offset(const ClockModelLSTM& model, std::span<const clocksync::OffsetSample> history,
                      double target_time) {
  const auto L = static_cast<std::size_t>(model.config.window_len);
  if (history.size() < L) throw std::invalid_argument("LSTM prediction needs window_len recent offsets");
  std::vector<double> recent(L);
  for (std::size_t j = 0; j < L; ++j) recent[j] = history[history.size() - L + j].eta;
  const long steps = std::max(1L, std::lround((target_time - history.back().t) / model.tau));
  return predict_steps(model, recent, static_cast<int>(std::min(steps, 100000L)));
}

std::vector<double> residuals(const ClockModelLSTM& model, std::span<const double> values) {
  const auto L = static_cast<std::size_t>(model.config.window_len);
  std::vector<double> out;
  for (std::size_t k = L; k < values.size(); ++k)
    out.push_back(values[k] - predict_steps(model, values.subspan(k - L, L), 1));
  return out;
}

}  // namespace avtrack::lstm
