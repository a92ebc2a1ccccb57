#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "avtrack/clocksync/stats.hpp"
#include "avtrack/lstm/lstm.hpp"

using namespace avtrack;
using namespace avtrack::lstm;

namespace {

Batch random_batch(const LstmConfig& c, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Batch b;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> in(static_cast<std::size_t>(c.window_len));
    for (auto& v : in) v = g(rng);
    b.inputs.push_back(in);
    b.targets.push_back(g(rng));
  }
  return b;
}

LstmConfig quick() {
  LstmConfig c;
  c.epochs = 120;
  c.seed = 3;
  return c;
}

}  // namespace

TEST_CASE("parameter count") {
  LstmConfig c;
  CHECK(parameter_count(c) == 541);
  CHECK(build(c).theta.size() == 541);
  c.hidden_units = 30;
  CHECK(parameter_count(c) == 4 * (30 * 31 + 30) + 30 * 5 + 5 + 6);
  c.hidden_units = 2;
  c.fc1_units = 3;
  CHECK(parameter_count(c) == 4 * (2 * 3 + 2) + 2 * 3 + 3 + 3 + 1);
}

TEST_CASE("config validation") {
  LstmConfig c;
  c.hidden_units = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.learning_rate = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.dropout_rate = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("initialisation is seeded") {
  LstmConfig c;
  c.seed = 17;
  CHECK(build(c).theta == build(c).theta);
  c.seed = 18;
  LstmConfig d;
  d.seed = 17;
  CHECK(build(c).theta != build(d).theta);
  CHECK(build(c).theta.allFinite());
}

TEST_CASE("forward pass") {
  LstmConfig c;
  auto m = build(c);
  const std::vector<double> seq(8, 0.3);

  m.theta.setZero();
  m.theta(m.theta.size() - 1) = 0.75;
  CHECK(forward(m, seq) == 0.75);

  m = build(c);
  std::vector<double> bad(seq);
  bad[3] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(forward(m, bad), std::invalid_argument);
  CHECK_THROWS_AS(forward(m, std::vector<double>(7, 0.0)), std::invalid_argument);

  // Saturated gates stay finite.
  m.theta *= 1e6;
  const std::vector<double> huge(8, 1e6);
  CHECK(std::isfinite(forward(m, huge)));
  const auto h = final_hidden(m, huge);
  CHECK(h.allFinite());
}

TEST_CASE("hidden state is bounded") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    LstmConfig c;
    c.seed = static_cast<std::uint64_t>(trial);
    auto m = build(c);
    for (Eigen::Index i = 0; i < m.theta.size(); ++i) m.theta(i) = g(rng);
    std::vector<double> seq(8);
    for (auto& v : seq) v = g(rng);
    const auto h = final_hidden(m, seq);
    CHECK(h.cwiseAbs().maxCoeff() < 1.0);
  }
}

TEST_CASE("dropout off in train mode is deterministic") {
  LstmConfig c;
  c.dropout_rate = 0.0;
  const auto m = build(c);
  const auto b = random_batch(c, 16, 1);
  Eigen::VectorXd g1, g2;
  Rng r1(1), r2(2);
  const double l1 = loss_and_gradient(m, b, &g1, &r1);
  const double l2 = loss_and_gradient(m, b, &g2, &r2);
  CHECK(l1 == l2);
  CHECK(g1 == g2);
}

TEST_CASE("gradient check on tiny models") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    LstmConfig c;
    c.hidden_units = 2 + static_cast<int>(seed % 3);
    c.fc1_units = 2 + static_cast<int>(seed % 2);
    c.window_len = 3;
    c.seed = seed;
    const auto m = build(c);
    CHECK(gradient_check(m, random_batch(c, 4, 100 + seed)) < 1e-4);
  }
  LstmConfig full;
  CHECK(gradient_check(build(full), random_batch(full, 3, 9)) < 1e-4);
}

TEST_CASE("zero-loss batch has a vanishing gradient") {
  LstmConfig c;
  c.hidden_units = 2;
  c.window_len = 3;
  const auto m = build(c);
  auto b = random_batch(c, 5, 4);
  for (std::size_t i = 0; i < b.inputs.size(); ++i) b.targets[i] = forward(m, b.inputs[i]);
  Eigen::VectorXd g;
  CHECK(loss_and_gradient(m, b, &g) < 1e-28);
  CHECK(g.norm() < 1e-10);
}

TEST_CASE("loss and gradient ignore batch order") {
  LstmConfig c;
  c.hidden_units = 3;
  c.window_len = 4;
  const auto m = build(c);
  const auto b = random_batch(c, 6, 12);
  Batch r;
  r.inputs.assign(b.inputs.rbegin(), b.inputs.rend());
  r.targets.assign(b.targets.rbegin(), b.targets.rend());
  Eigen::VectorXd g1, g2;
  CHECK(loss_and_gradient(m, b, &g1) == doctest::Approx(loss_and_gradient(m, r, &g2)).epsilon(1e-12));
  CHECK((g1 - g2).norm() <= 1e-12 * (1.0 + g1.norm()));
  CHECK(gradient_check(m, b) == doctest::Approx(gradient_check(m, r)).epsilon(1e-3));
}

TEST_CASE("linear ramp is predicted almost exactly") {
  std::vector<double> v(300);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 2e-6 + 1e-9 * static_cast<double>(i);
  auto m = build(quick());
  const auto rep = train_values(m, v);
  CHECK(rep.final_loss <= rep.first_loss);
  for (double r : residuals(m, v)) CHECK(std::abs(r) < 0.05 * 1e-9);
}

TEST_CASE("sinusoidal offsets") {
  std::vector<double> v(600);
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = 1e-6 * std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / 40.0);
  auto m = build(quick());
  const auto rep = train_values(m, v);
  CHECK(rep.final_loss <= rep.first_loss);
  const auto r = residuals(m, v);
  const double rms = std::sqrt(clocksync::variance(r) + std::pow(clocksync::mean(r), 2));
  CHECK(rms < 0.2 * std::sqrt(clocksync::variance(v)));
}

TEST_CASE("constant offsets") {
  const double c = -4.2e-6;
  std::vector<double> v(200, c);
  auto m = build(quick());
  train_values(m, v);
  const double pred = predict_steps(m, std::span(v).last(8), 1);
  CHECK(std::abs(pred - c) / m.norm_std < 1e-3);
}

TEST_CASE("predictions shift with the inputs") {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g(0.0, 5e-9);
  std::vector<double> v(400);
  double eta = 0.0;
  for (auto& x : v) x = (eta += 1e-9 + g(rng));
  auto m = build(quick());
  train_values(m, v);

  const double shift = 3e-6;
  std::vector<double> moved(v);
  for (auto& x : moved) x += shift;
  const auto tail = std::span(v).last(8);
  const auto tail_moved = std::span(moved).last(8);
  for (int steps : {1, 5, 300})
    CHECK(predict_steps(m, tail_moved, steps) - shift ==
          doctest::Approx(predict_steps(m, tail, steps)).epsilon(1e-9));

  auto m2 = build(quick());
  train_values(m2, moved);
  CHECK(predict_steps(m2, tail_moved, 1) - shift == doctest::Approx(predict_steps(m, tail, 1)).epsilon(1e-6));
}

TEST_CASE("training is deterministic and timestamps set tau") {
  std::vector<clocksync::OffsetSample> s;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 5e-9);
  double eta = 1e-6;
  for (int i = 0; i < 150; ++i) s.push_back({10.0 + 2.0 * i, eta += 2e-9 + g(rng), 12, 11, 1});
  auto a = build(quick());
  auto b = build(quick());
  train(a, s);
  train(b, s);
  CHECK(a.theta == b.theta);
  CHECK(a.tau == doctest::Approx(2.0));
  CHECK(a.t_start == 10.0);
  CHECK(a.t_end == s.back().t);

  std::vector<double> recent;
  for (std::size_t i = s.size() - 8; i < s.size(); ++i) recent.push_back(s[i].eta);
  CHECK(predict_offset(a, s, s.back().t + 2.0) == predict_steps(a, recent, 1));
  const double one = predict_offset(a, s, s.back().t + 2.0);
  CHECK(predict_offset(a, s, s.back().t + 20.0) == doctest::Approx(one + 9 * a.norm_mean).epsilon(1e-12));
  CHECK_THROWS_AS(predict_offset(a, std::span(s).first(5), 1000.0), std::invalid_argument);
  CHECK_THROWS_AS(train(a, std::span(s).first(18)), std::invalid_argument);
}

TEST_CASE("divergence is reported") {
  std::vector<double> v(100);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.3 * static_cast<double>(i));
  LstmConfig c = quick();
  c.learning_rate = 1e308;
  auto m = build(c);
  CHECK_THROWS_AS(train_values(m, v), LstmDivergenceError);
}
