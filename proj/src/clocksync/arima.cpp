#include "avtrack/clocksync/arima.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "avtrack/clocksync/stats.hpp"

namespace avtrack::clocksync {

std::string to_string(const ArimaOrder& o) {
  return "ARIMA(" + std::to_string(o.p) + "," + std::to_string(o.d) + "," + std::to_string(o.q) + ")";
}

double max_companion_modulus(std::span<const double> a) {
  const auto p = static_cast<Eigen::Index>(a.size());
  if (p == 0) return 0.0;
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) C(0, i) = a[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 1; i < p; ++i) C(i, i - 1) = 1.0;
  return C.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_stationary(std::span<const double> ar, double margin) {
  return max_companion_modulus(ar) < 1.0 - margin;
}

bool is_invertible(std::span<const double> ma, double margin) {
  std::vector<double> neg(ma.size());
  for (std::size_t i = 0; i < ma.size(); ++i) neg[i] = -ma[i];
  return max_companion_modulus(neg) < 1.0 - margin;
}

namespace {

int leading_run(const Correlogram& c, int cap) {
  int k = 0;
  while (k + 1 < static_cast<int>(c.values.size()) &&
         std::abs(c.values[static_cast<std::size_t>(k) + 1]) > c.bound)
    ++k;
  return std::min(k, cap);
}

// Parameter vector layout: a_1..a_p, b_1..b_q, mean.
struct Params {
  int p, q;
  Eigen::VectorXd v;
  std::span<const double> ar() const { return {v.data(), static_cast<std::size_t>(p)}; }
  std::span<const double> ma() const { return {v.data() + p, static_cast<std::size_t>(q)}; }
  double mu() const { return v(p + q); }
};

// CSS residuals and, optionally, their Jacobian with respect to the parameters.
double css(const Params& th, std::span<const double> w, Eigen::VectorXd* e_out, Eigen::MatrixXd* J) {
  const int p = th.p, q = th.q, k = p + q + 1;
  const auto n = static_cast<Eigen::Index>(w.size());
  const double mu = th.mu();
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  if (J) J->setZero(n, k);
  double sse = 0.0;
  for (Eigen::Index t = p; t < n; ++t) {
    double v = w[static_cast<std::size_t>(t)] - mu;
    for (int i = 1; i <= p; ++i) v -= th.v(i - 1) * (w[static_cast<std::size_t>(t - i)] - mu);
    for (int j = 1; j <= q && t - j >= p; ++j) v -= th.v(p + j - 1) * e(t - j);
    e(t) = v;
    sse += v * v;
    if (J) {
      for (int i = 1; i <= p; ++i) (*J)(t, i - 1) = -(w[static_cast<std::size_t>(t - i)] - mu);
      for (int j = 1; j <= q; ++j) (*J)(t, p + j - 1) = t - j >= p ? -e(t - j) : 0.0;
      double dmu = -1.0;
      for (int i = 1; i <= p; ++i) dmu += th.v(i - 1);
      (*J)(t, k - 1) = dmu;
      for (int j = 1; j <= q && t - j >= p; ++j) J->row(t) -= th.v(p + j - 1) * J->row(t - j);
    }
  }
  if (e_out) *e_out = e;
  return sse;
}

bool admissible(const Params& th) {
  return is_stationary(th.ar()) && is_invertible(th.ma());
}

void shrink_to_admissible(Params& th) {
  for (int it = 0; it < 200 && !admissible(th); ++it) th.v.head(th.p + th.q) *= 0.9;
}

// Hannan-Rissanen: long AR for innovations, then a linear regression.
Params initial_guess(std::span<const double> w, int p, int q) {
  Params th{p, q, Eigen::VectorXd::Zero(p + q + 1)};
  th.v(p + q) = mean(w);
  if (p + q == 0) return th;
  const auto n = static_cast<Eigen::Index>(w.size());
  const double mu = th.mu();
  Eigen::VectorXd z(n);
  for (Eigen::Index t = 0; t < n; ++t) z(t) = w[static_cast<std::size_t>(t)] - mu;

  Eigen::VectorXd ehat = z;
  const int m = q > 0 ? static_cast<int>(std::min<Eigen::Index>(std::max(p + q + 5, 10), n / 4)) : 0;
  if (q > 0 && m > 0) {
    Eigen::MatrixXd X(n - m, m);
    for (Eigen::Index t = m; t < n; ++t)
      for (int i = 1; i <= m; ++i) X(t - m, i - 1) = z(t - i);
    const Eigen::VectorXd phi = X.colPivHouseholderQr().solve(z.tail(n - m));
    ehat.setZero();
    ehat.tail(n - m) = z.tail(n - m) - X * phi;
  }
  const Eigen::Index start = m + std::max(p, q);
  if (n - start <= p + q) return th;
  Eigen::MatrixXd X(n - start, p + q);
  for (Eigen::Index t = start; t < n; ++t) {
    for (int i = 1; i <= p; ++i) X(t - start, i - 1) = z(t - i);
    for (int j = 1; j <= q; ++j) X(t - start, p + j - 1) = ehat(t - j);
  }
  th.v.head(p + q) = X.colPivHouseholderQr().solve(z.tail(n - start));
  if (!th.v.allFinite()) th.v.head(p + q).setZero();
  shrink_to_admissible(th);
  return th;
}

ClockModelAR to_model(const Params& th, const ArimaOrder& order, double sse, Eigen::Index n_eff) {
  ClockModelAR m;
  m.order = order;
  m.ar.assign(th.v.data(), th.v.data() + th.p);
  m.ma.assign(th.v.data() + th.p, th.v.data() + th.p + th.q);
  m.mean = th.mu();
  m.noise_var = n_eff > 0 ? sse / static_cast<double>(n_eff) : 0.0;
  return m;
}

}  // namespace

ArimaOrder select_order(std::span<const double> series, const OrderSelectionOptions& opt) {
  if (series.size() < 50) throw std::invalid_argument("select_order needs at least 50 values");
  ArimaOrder o;
  std::vector<double> w(series.begin(), series.end());
  if (!kpss_test(w).stationary) {
    w = difference(w);
    if (!kpss_test(w).stationary)
      throw NonStationaryError("offset series is still non-stationary after one difference");
    o.d = 1;
  }
  const int lag = std::min<int>(opt.max_lag, static_cast<int>(w.size()) - 1);
  double v = variance(w);
  if (!(v > 0.0)) return o;  // constant: nothing left to model
  o.q = leading_run(sample_acf(w, lag), opt.max_order);
  o.p = leading_run(sample_pacf(w, lag), opt.max_order);
  return o;
}

ClockModelAR fit_arima(std::span<const double> series, const ArimaOrder& order, const FitOptions& opt) {
  if (order.p < 0 || order.q < 0 || order.d < 0 || order.d > 2)
    throw std::invalid_argument("fit_arima: invalid order " + to_string(order));
  const auto need = static_cast<std::size_t>(5 * (order.p + order.q + 1));
  if (series.size() < need + static_cast<std::size_t>(order.d))
    throw std::invalid_argument("fit_arima: series too short for " + to_string(order));
  const std::vector<double> w = difference(series, order.d);
  const int p = order.p, q = order.q, k = p + q + 1;
  const auto n_eff = static_cast<Eigen::Index>(w.size()) - p;

  Params th = initial_guess(w, p, q);
  Eigen::VectorXd e;
  Eigen::MatrixXd J;
  double sse = css(th, w, &e, &J);
  double lambda = 1e-3;
  bool converged = false;
  int it = 0;
  const double scale = std::max(sse, 1e-300);
  for (; it < opt.max_iterations; ++it) {
    const Eigen::MatrixXd A = J.transpose() * J;
    const Eigen::VectorXd g = J.transpose() * e;
    if (g.norm() <= 1e-14 * std::sqrt(scale) * std::sqrt(A.diagonal().sum() + 1e-300)) {
      converged = true;
      break;
    }
    bool stepped = false;
    while (lambda < 1e12) {
      Eigen::MatrixXd Al = A;
      Al.diagonal() += lambda * A.diagonal().cwiseMax(1e-12 * A.diagonal().maxCoeff() + 1e-300);
      const Eigen::VectorXd delta = Al.ldlt().solve(-g);
      Params cand{p, q, th.v + delta};
      if (cand.v.allFinite() && admissible(cand)) {
        Eigen::VectorXd e2;
        Eigen::MatrixXd J2;
        const double sse2 = css(cand, w, &e2, &J2);
        if (sse2 <= sse) {
          const double rel = (sse - sse2) / std::max(sse, 1e-300);
          th = cand;
          e = std::move(e2);
          J = std::move(J2);
          sse = sse2;
          lambda = std::max(lambda / 10.0, 1e-12);
          stepped = true;
          if (rel < opt.tolerance && delta.norm() < 1e-6 * (1.0 + th.v.norm())) converged = true;
          break;
        }
      }
      lambda *= 10.0;
    }
    if (!stepped) {
      converged = true;  // no admissible descent direction left: local minimum
      break;
    }
    if (converged) break;
  }
  ClockModelAR model = to_model(th, order, sse, n_eff);
  if (!converged)
    throw ArimaConvergenceError("ARIMA fit did not converge in " + std::to_string(it) + " iterations",
                                model, it, sse);
  (void)k;
  return model;
}

std::vector<double> css_residuals(const ClockModelAR& model, std::span<const double> series) {
  const std::vector<double> w = difference(series, model.order.d);
  Params th{model.order.p, model.order.q, Eigen::VectorXd(model.order.p + model.order.q + 1)};
  for (int i = 0; i < th.p; ++i) th.v(i) = model.ar[static_cast<std::size_t>(i)];
  for (int j = 0; j < th.q; ++j) th.v(th.p + j) = model.ma[static_cast<std::size_t>(j)];
  th.v(th.p + th.q) = model.mean;
  Eigen::VectorXd e;
  css(th, w, &e, nullptr);
  if (e.size() <= th.p) return {};
  return {e.data() + th.p, e.data() + e.size()};
}

std::vector<double> residuals(const ClockModelAR& model, std::span<const double> series) {
  // With d differences the offset residual equals the residual of the
  // differenced series: eta[k] - (eta[k] - w[k] + w_hat[k]) = w[k] - w_hat[k].
  return css_residuals(model, series);
}

}  // namespace avtrack::clocksync
