#include "avtrack/clocksync/stats.hpp"

#include <cmath>
#include <numeric>

namespace avtrack::clocksync {

double mean(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("mean of an empty series");
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

namespace {

double central_moment(std::span<const double> x, double m, int k) {
  double s = 0.0;
  for (double v : x) s += std::pow(v - m, k);
  return s / static_cast<double>(x.size());
}

std::vector<double> autocov(std::span<const double> x, int max_lag) {
  const double m = mean(x);
  const auto n = x.size();
  std::vector<double> g(static_cast<std::size_t>(max_lag) + 1, 0.0);
  for (int k = 0; k <= max_lag; ++k) {
    double s = 0.0;
    for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t)
      s += (x[t] - m) * (x[t - static_cast<std::size_t>(k)] - m);
    g[static_cast<std::size_t>(k)] = s / static_cast<double>(n);
  }
  return g;
}

}  // namespace

double variance(std::span<const double> x) { return central_moment(x, mean(x), 2); }

double skewness(std::span<const double> x) {
  const double m = mean(x);
  const double v = central_moment(x, m, 2);
  if (v <= 0.0) return 0.0;
  return central_moment(x, m, 3) / std::pow(v, 1.5);
}

double excess_kurtosis(std::span<const double> x) {
  const double m = mean(x);
  const double v = central_moment(x, m, 2);
  if (v <= 0.0) return 0.0;
  return central_moment(x, m, 4) / (v * v) - 3.0;
}

Correlogram sample_acf(std::span<const double> x, int max_lag) {
  if (max_lag < 0 || static_cast<std::size_t>(max_lag) >= x.size())
    throw std::invalid_argument("sample_acf: max_lag must be in [0, n)");
  const auto g = autocov(x, max_lag);
  if (!(g[0] > 0.0)) throw std::invalid_argument("sample_acf: series has zero variance");
  Correlogram c;
  c.values.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) c.values[k] = g[k] / g[0];
  c.values[0] = 1.0;
  c.bound = kZ90 / std::sqrt(static_cast<double>(x.size()));
  return c;
}

Correlogram sample_pacf(std::span<const double> x, int max_lag) {
  const Correlogram acf = sample_acf(x, max_lag);
  const auto& r = acf.values;
  Correlogram c;
  c.bound = acf.bound;
  c.values.assign(r.size(), 0.0);
  c.values[0] = 1.0;
  std::vector<double> phi, prev;
  double v = 1.0;
  for (std::size_t k = 1; k < r.size(); ++k) {
    double num = r[k];
    for (std::size_t j = 1; j < k; ++j) num -= prev[j - 1] * r[k - j];
    const double phikk = v > 0.0 ? num / v : 0.0;
    phi.assign(k, 0.0);
    for (std::size_t j = 1; j < k; ++j) phi[j - 1] = prev[j - 1] - phikk * prev[k - j - 1];
    phi[k - 1] = phikk;
    v *= (1.0 - phikk * phikk);
    c.values[k] = phikk;
    prev = phi;
  }
  return c;
}

KpssResult kpss_test(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 20) throw std::invalid_argument("kpss_test needs at least 20 values");
  const double m = mean(x);
  std::vector<double> e(n);
  for (std::size_t t = 0; t < n; ++t) e[t] = x[t] - m;

  double eta = 0.0, s = 0.0;
  for (double v : e) {
    s += v;
    eta += s * s;
  }
  const double nn = static_cast<double>(n);
  eta /= nn * nn;

  const int lags = static_cast<int>(std::floor(4.0 * std::pow(nn / 100.0, 0.25)));
  double lrv = 0.0;
  for (double v : e) lrv += v * v;
  lrv /= nn;
  for (int j = 1; j <= lags; ++j) {
    double g = 0.0;
    for (std::size_t t = static_cast<std::size_t>(j); t < n; ++t) g += e[t] * e[t - static_cast<std::size_t>(j)];
    g /= nn;
    lrv += 2.0 * (1.0 - static_cast<double>(j) / (lags + 1.0)) * g;
  }
  KpssResult r;
  r.lags = lags;
  r.statistic = lrv > 0.0 ? eta / lrv : INFINITY;
  r.stationary = r.statistic < kKpssCritical5;
  return r;
}

std::vector<double> difference(std::span<const double> x, int d) {
  std::vector<double> out(x.begin(), x.end());
  for (int k = 0; k < d; ++k) {
    if (out.empty()) break;
    for (std::size_t t = 0; t + 1 < out.size(); ++t) out[t] = out[t + 1] - out[t];
    out.pop_back();
  }
  return out;
}

NormalityReport normality_check(std::span<const double> r) {
  if (r.size() < 100) throw std::invalid_argument("normality_check needs at least 100 values");
  NormalityReport rep;
  rep.skewness = skewness(r);
  rep.excess_kurtosis = excess_kurtosis(r);
  rep.dip = dip_statistic(std::vector<double>(r.begin(), r.end()));
  rep.dip_critical = dip_critical_value(r.size());
  rep.unimodal = rep.dip < rep.dip_critical;
  return rep;
}

}  // namespace avtrack::clocksync
