#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "avtrack/clocksync/arima.hpp"
#include "avtrack/clocksync/stats.hpp"

using namespace avtrack::clocksync;

namespace {

std::vector<double> arma(std::size_t n, const std::vector<double>& a, const std::vector<double>& b,
                         std::uint64_t seed, double sigma = 1.0, double mu = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, sigma);
  const std::size_t burn = 500;
  std::vector<double> x(n + burn, 0.0), e(n + burn);
  for (auto& v : e) v = g(rng);
  for (std::size_t t = 0; t < x.size(); ++t) {
    double v = e[t];
    for (std::size_t i = 0; i < a.size() && i < t; ++i) v += a[i] * x[t - 1 - i];
    for (std::size_t j = 0; j < b.size() && j < t; ++j) v += b[j] * e[t - 1 - j];
    x[t] = v;
  }
  std::vector<double> out(x.begin() + static_cast<std::ptrdiff_t>(burn), x.end());
  for (auto& v : out) v += mu;
  return out;
}

std::vector<double> integrate(const std::vector<double>& w, double start) {
  std::vector<double> x(w.size() + 1);
  x[0] = start;
  for (std::size_t i = 0; i < w.size(); ++i) x[i + 1] = x[i] + w[i];
  return x;
}

}  // namespace

TEST_CASE("companion modulus and admissibility") {
  CHECK(max_companion_modulus(std::vector<double>{}) == 0.0);
  CHECK(max_companion_modulus(std::vector<double>{0.5}) == doctest::Approx(0.5));
  CHECK(max_companion_modulus(std::vector<double>{-1.2}) == doctest::Approx(1.2));
  // z^2 - 0.25 has roots +-0.5.
  CHECK(max_companion_modulus(std::vector<double>{0.0, 0.25}) == doctest::Approx(0.5));
  CHECK(is_stationary(std::vector<double>{0.9}));
  CHECK_FALSE(is_stationary(std::vector<double>{1.0}));
  CHECK_FALSE(is_stationary(std::vector<double>{0.5, 0.5}));
  CHECK(is_invertible(std::vector<double>{0.6}));
  CHECK_FALSE(is_invertible(std::vector<double>{-1.5}));
}

TEST_CASE("select_order: simple cases") {
  CHECK(select_order(arma(2000, {}, {}, 1)) == ArimaOrder{0, 0, 0});
  const auto ar2 = select_order(arma(2000, {0.5, 0.3}, {}, 2));
  CHECK(ar2.d == 0);
  CHECK(ar2.p == 2);
  CHECK_THROWS_AS(select_order(arma(49, {}, {}, 3)), std::invalid_argument);
}

TEST_CASE("select_order: differencing gate") {
  int d1 = 0, idem = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto x = integrate(arma(1500, {}, {}, 40 + s), 0.0);
    try {
      const auto o = select_order(x);
      d1 += o.d == 1;
      idem += select_order(difference(x, o.d)).d == 0;
    } catch (const NonStationaryError&) {
      // KPSS rejects a stationary difference at its nominal 5% rate.
    }
  }
  CHECK(d1 >= 17);
  CHECK(idem == d1);

  // A doubly integrated series cannot be made stationary with one difference.
  auto x2 = integrate(integrate(arma(1500, {}, {}, 9), 0.0), 0.0);
  CHECK_THROWS_AS(select_order(x2), NonStationaryError);
}

TEST_CASE("fit_arima: AR(1) consistency") {
  int inside = 0;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto x = arma(5000, {0.8}, {}, 100 + s, 2.0);
    const auto m = fit_arima(x, {1, 0, 0});
    inside += m.ar[0] >= 0.75 && m.ar[0] <= 0.85;
    CHECK(m.noise_var <= 4.0 * 1.1);
    CHECK(m.noise_var == doctest::Approx(variance(residuals(m, x))).epsilon(0.02));
  }
  CHECK(inside == 10);
}

TEST_CASE("fit_arima: ARMA(1,1) with drift") {
  const auto w = arma(6000, {0.5}, {0.3}, 7, 1e-9, 2e-9);
  const auto x = integrate(w, 1e-6);
  const auto m = fit_arima(x, {1, 1, 1});
  CHECK(m.ar[0] == doctest::Approx(0.5).epsilon(0.15));
  CHECK(m.ma[0] == doctest::Approx(0.3).epsilon(0.25));
  CHECK(m.mean == doctest::Approx(2e-9).epsilon(0.05));
  CHECK(m.noise_var <= 1e-18 * 1.1);
  CHECK(is_stationary(m.ar));
  CHECK(is_invertible(m.ma));
}

TEST_CASE("fit_arima: white noise model predicts the mean") {
  const auto x = arma(500, {}, {}, 5, 1.0, 3.0);
  const auto m = fit_arima(x, {0, 0, 0});
  CHECK(m.mean == doctest::Approx(mean(x)).epsilon(1e-9));
  const auto r = residuals(m, x);
  REQUIRE(r.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(r[i] == doctest::Approx(x[i] - mean(x)));
}

TEST_CASE("fitted models are always stationary") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-0.95, 0.95);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 1 + trial % 4, q = trial % 3;
    std::vector<double> a{u(rng)};
    const auto x = arma(800, a, {}, 600 + static_cast<std::uint64_t>(trial));
    ClockModelAR m;
    try {
      m = fit_arima(x, {p, 0, q});
    } catch (const ArimaConvergenceError& e) {
      m = e.best;
    }
    CHECK(is_stationary(m.ar));
    CHECK(is_invertible(m.ma));
    CHECK(m.noise_var > 0.0);
  }
}

TEST_CASE("fit_arima: errors") {
  CHECK_THROWS_AS(fit_arima(arma(20, {}, {}, 1), {3, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(fit_arima(arma(200, {}, {}, 1), {-1, 0, 0}), std::invalid_argument);
  FitOptions none;
  none.max_iterations = 0;
  const auto x = arma(1000, {0.6}, {}, 8);
  try {
    fit_arima(x, {1, 0, 0}, none);
    FAIL("expected a convergence error");
  } catch (const ArimaConvergenceError& e) {
    CHECK(e.iterations == 0);
    CHECK(e.best.ar.size() == 1);
    CHECK(e.sse > 0.0);
  }
}

TEST_CASE("residuals of a deterministic model vanish") {
  std::vector<double> x(100);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = 5.0 + 0.25 * static_cast<double>(i);
  ClockModelAR m;
  m.order = {0, 1, 0};
  m.mean = 0.25;
  const auto r = residuals(m, x);
  CHECK(r.size() == 99);
  for (double v : r) CHECK(std::abs(v) < 1e-12);

  m.order = {1, 1, 0};
  m.ar = {0.5};
  m.mean = 0.25;
  CHECK(residuals(m, x).size() == 98);
}

TEST_CASE("residuals of a well-fit model are centred and white") {
  const auto x = integrate(arma(4000, {0.5, -0.2}, {0.3}, 12), 0.0);
  const auto m = fit_arima(x, select_order(x));
  const auto r = residuals(m, x);
  const double se = std::sqrt(variance(r) / static_cast<double>(r.size()));
  CHECK(std::abs(mean(r)) <= 2.0 * se);
  const auto c = sample_acf(r, 20);
  int inside = 0;
  for (int k = 1; k <= 20; ++k) inside += std::abs(c.values[static_cast<std::size_t>(k)]) < c.bound;
  CHECK(inside >= 17);
}
