#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace avtrack::clocksync {

/// Two-sided 90% normal quantile used for correlogram bounds.
inline constexpr double kZ90 = 1.6448536269514722;
/// 5% critical value of the level-stationarity KPSS statistic.
inline constexpr double kKpssCritical5 = 0.463;

struct Correlogram {
  std::vector<double> values;  // values[0] == 1
  double bound = 0.0;          // z / sqrt(n)
};

/// Biased-normalisation sample ACF for lags 0..max_lag.
/// Throws std::invalid_argument on a constant series or max_lag >= n.
Correlogram sample_acf(std::span<const double> x, int max_lag);
/// Partial autocorrelations by Durbin-Levinson, same bound.
Correlogram sample_pacf(std::span<const double> x, int max_lag);

struct KpssResult {
  double statistic = 0.0;
  bool stationary = false;
  int lags = 0;
};

/// Level-stationarity KPSS test with a Bartlett long-run variance and
/// floor(4 (n/100)^(1/4)) lags. Needs n >= 20.
KpssResult kpss_test(std::span<const double> x);

std::vector<double> difference(std::span<const double> x, int d = 1);

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // population (1/n)
double skewness(std::span<const double> x);
double excess_kurtosis(std::span<const double> x);

/// Hartigan's dip statistic of the empirical distribution of `x`.
double dip_statistic(std::vector<double> x);
/// Upper `alpha` quantile of the dip under a uniform null for sample size n,
/// by seeded Monte Carlo. Results are cached per (n, alpha).
double dip_critical_value(std::size_t n, double alpha = 0.05);

struct NormalityReport {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double dip = 0.0;
  double dip_critical = 0.0;
  bool unimodal = false;
};

/// Needs at least 100 values.
NormalityReport normality_check(std::span<const double> residuals);

}  // namespace avtrack::clocksync
