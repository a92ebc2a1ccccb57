#include "avtrack/clocksync/kf1.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "avtrack/clocksync/stats.hpp"

namespace avtrack::clocksync {

namespace {

struct StateSpace {
  Eigen::MatrixXd F;
  Eigen::VectorXd c;
  Eigen::MatrixXd Q;
};

StateSpace state_space(const ClockModelAR& m) {
  if (m.order.d > 1) throw std::invalid_argument("KF1 supports d in {0, 1}");
  const int p = m.order.p, q = m.order.q;
  const int r = std::max(p, q + 1);
  const int dim = r + 1;
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(r, r);
  for (int i = 0; i < p; ++i) T(i, 0) = m.ar[static_cast<std::size_t>(i)];
  for (int i = 0; i + 1 < r; ++i) T(i, i + 1) = 1.0;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
  g(0) = 1.0;
  g(1) = 1.0;
  for (int j = 0; j < q; ++j) g(2 + j) = m.ma[static_cast<std::size_t>(j)];

  StateSpace ss;
  ss.F = Eigen::MatrixXd::Zero(dim, dim);
  ss.F.bottomRightCorner(r, r) = T;
  ss.F.block(0, 1, 1, r) = T.row(0);
  if (m.order.d == 1) ss.F(0, 0) = 1.0;
  ss.c = Eigen::VectorXd::Zero(dim);
  ss.c(0) = m.mean;
  ss.Q = m.noise_var * g * g.transpose();
  ss.Q(0, 0) += m.offset_noise_var;
  return ss;
}

void step(const StateSpace& ss, Eigen::VectorXd& x, Eigen::MatrixXd& P) {
  x = ss.F * x + ss.c;
  P = ss.F * P * ss.F.transpose() + ss.Q;
  P = (0.5 * (P + P.transpose())).eval();
}

Eigen::MatrixXd stationary_cov(const StateSpace& ss) {
  const Eigen::Index r = ss.F.rows() - 1;
  const Eigen::MatrixXd T = ss.F.bottomRightCorner(r, r);
  const Eigen::MatrixXd Qa = ss.Q.bottomRightCorner(r, r);
  Eigen::MatrixXd S = Qa;
  for (int i = 0; i < 2000; ++i) {
    const Eigen::MatrixXd next = T * S * T.transpose() + Qa;
    const double diff = (next - S).cwiseAbs().maxCoeff();
    S = next;
    if (diff <= 1e-12 * (S.cwiseAbs().maxCoeff() + 1e-300)) break;
  }
  return S;
}

void measure(ClockModelAR& m, double t, double y) {
  auto& k = m.kf1;
  k.t = t;
  k.last_measurement = y;
  if (std::isinf(m.meas_var)) return;
  const double S = k.P(0, 0) + m.meas_var;
  if (m.meas_var == 0.0 || !(S > 0.0)) {
    // Exact measurement: condition the state on eta = y.
    if (k.P(0, 0) > 0.0) {
      const Eigen::VectorXd K = k.P.col(0) / k.P(0, 0);
      k.x += K * (y - k.x(0));
      k.P -= K * k.P.row(0);
    }
    k.x(0) = y;
    k.P.row(0).setZero();
    k.P.col(0).setZero();
    return;
  }
  const Eigen::VectorXd K = k.P.col(0) / S;
  k.x += K * (y - k.x(0));
  k.P -= K * k.P.row(0);
  k.P = (0.5 * (k.P + k.P.transpose())).eval();
}

}  // namespace

void kf1_initialize(ClockModelAR& model, std::span<const OffsetSample> window, const Kf1Options& opt) {
  if (window.empty()) throw std::invalid_argument("kf1_initialize: empty window");
  for (std::size_t i = 1; i < window.size(); ++i)
    if (window[i].t < window[i - 1].t) throw std::invalid_argument("kf1_initialize: unordered window");
  model.t_start = window.front().t;
  model.t_end = window.back().t;
  model.tau = window.size() > 1 && window.back().t > window.front().t
                  ? (window.back().t - window.front().t) / static_cast<double>(window.size() - 1)
                  : 1.0;
  model.offset_noise_var = opt.offset_noise_var;
  model.meas_var = opt.meas_var ? *opt.meas_var
                                : opt.quant_step * opt.quant_step / 12.0 + model.noise_var;

  const StateSpace ss = state_space(model);
  const Eigen::Index dim = ss.F.rows();
  auto& k = model.kf1;
  k.x = Eigen::VectorXd::Zero(dim);
  k.P = Eigen::MatrixXd::Zero(dim, dim);
  k.P.bottomRightCorner(dim - 1, dim - 1) = stationary_cov(ss);
  std::vector<double> eta(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) eta[i] = window[i].eta;
  const double spread = eta.size() > 1 ? variance(eta) : 0.0;
  k.x(0) = window.front().eta;
  k.P(0, 0) = spread + model.meas_var + 1e-30;
  k.initialised = true;
  measure(model, window.front().t, window.front().eta);
  for (std::size_t i = 1; i < window.size(); ++i) kf1_update_in_place(model, window[i]);
}

OffsetPrediction kf1_predict_offset(const ClockModelAR& model, double t) {
  const auto& k = model.kf1;
  if (!k.initialised) throw std::logic_error("KF1 state is not initialised");
  if (t < k.t) throw std::invalid_argument("kf1_predict_offset: target precedes the filter state");
  const StateSpace ss = state_space(model);
  const double h = (t - k.t) / model.tau;
  const auto whole = static_cast<long>(std::floor(h));
  const double frac = h - static_cast<double>(whole);
  Eigen::VectorXd x = k.x;
  Eigen::MatrixXd P = k.P;
  double envelope = P(0, 0);
  for (long i = 0; i < whole; ++i) {
    step(ss, x, P);
    envelope = std::max(envelope, P(0, 0));
  }
  OffsetPrediction out{x(0), P(0, 0)};
  if (frac > 0.0) {
    Eigen::VectorXd x1 = x;
    Eigen::MatrixXd P1 = P;
    step(ss, x1, P1);
    out.eta = (1.0 - frac) * x(0) + frac * x1(0);
    out.variance = (1.0 - frac) * P(0, 0) + frac * P1(0, 0);
  }
  out.variance = std::max(out.variance, envelope);
  return out;
}

void kf1_update_in_place(ClockModelAR& model, const OffsetSample& sample) {
  auto& k = model.kf1;
  if (!k.initialised) throw std::logic_error("KF1 state is not initialised");
  if (sample.t < k.t) throw std::invalid_argument("kf1_update: sample is older than the filter state");
  const StateSpace ss = state_space(model);
  const long steps = std::max(1L, std::lround((sample.t - k.t) / model.tau));
  for (long i = 0; i < steps; ++i) step(ss, k.x, k.P);
  measure(model, sample.t, sample.eta);
}

ClockModelAR kf1_update(ClockModelAR model, const OffsetSample& sample) {
  kf1_update_in_place(model, sample);
  return model;
}

ClockModelAR train_ar_model(std::span<const OffsetSample> window, int sn_id, const Kf1Options& opt,
                            const OrderSelectionOptions& sel) {
  std::vector<double> eta(window.size());
  for (std::size_t i = 0; i < window.size(); ++i) eta[i] = window[i].eta;
  const ArimaOrder order = select_order(eta, sel);
  ClockModelAR model;
  try {
    model = fit_arima(eta, order);
  } catch (const ArimaConvergenceError& e) {
    model = e.best;
  }
  model.sn_id = sn_id;
  kf1_initialize(model, window, opt);
  return model;
}

}  // namespace avtrack::clocksync
