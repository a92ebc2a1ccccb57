#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "avtrack/tracker/tracker.hpp"

using namespace avtrack;
using namespace avtrack::tracker;

namespace {

MotionModel quiet_model(double r) {
  MotionModel m;
  m.sigma_a2 = 0.0;
  m.R = r * Eigen::Matrix3d::Identity();
  return m;
}

Matrix6d random_psd(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  Matrix6d A;
  for (Eigen::Index i = 0; i < 36; ++i) A(i) = g(rng);
  return A * A.transpose() + 1e-3 * scale * scale * Matrix6d::Identity();
}

}  // namespace

TEST_CASE("predict") {
  const MotionModel still = quiet_model(1.0);
  TrackState st = initial_state({10, 20, 9000}, 5.0, 4.0);
  const auto p = predict(st, still, 3.0);
  CHECK(p.s == st.s);
  CHECK(p.t == 8.0);
  // Velocity is known to be zero only when its variance is zero.
  st.P.bottomRightCorner<3, 3>().setZero();
  CHECK(predict(st, still, 3.0).P == st.P);

  st.s(3) = 10.0;
  CHECK(predict(st, still, 2.0).s(0) == doctest::Approx(30.0));

  MotionModel accel = still;
  accel.u = Eigen::Vector3d(0, 0, -2);
  CHECK(predict(st, accel, 3.0).s(2) == doctest::Approx(9000.0 - 9.0));
  CHECK(predict(st, accel, 3.0).s(5) == doctest::Approx(-6.0));

  CHECK_THROWS_AS(predict(st, still, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(predict(st, still, -1.0), std::invalid_argument);
}

TEST_CASE("predicted covariance trace grows") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> dt(0.01, 30.0), q(0.0, 50.0);
  for (int trial = 0; trial < 200; ++trial) {
    TrackState st;
    st.P.setZero();
    st.P.topLeftCorner<3, 3>() = random_psd(rng, 100.0).topLeftCorner<3, 3>();
    st.P.bottomRightCorner<3, 3>() = random_psd(rng, 10.0).topLeftCorner<3, 3>();
    MotionModel m;
    m.sigma_a2 = q(rng);
    CHECK(predict(st, m, dt(rng)).P.trace() >= st.P.trace());
  }
}

TEST_CASE("update limits") {
  TrackState st = initial_state({100, -50, 8000}, 0.0, 1e4);
  st.s.tail<3>() = Eigen::Vector3d(200, 10, 0);
  const geo::CartesianPosition z{130, -70, 8100};

  const auto exact = update(st, z, quiet_model(1e-12));
  CHECK((exact.s.head<3>() - z.vec()).norm() < 1e-9);

  const auto ignored = update(st, z, quiet_model(1e12));
  CHECK((ignored.s - st.s).norm() < 1e-5);
  CHECK((ignored.P - st.P).norm() < 1e-4 * st.P.norm());

  TrackState singular;
  singular.P.setZero();
  CHECK_THROWS_AS(update(singular, z, quiet_model(0.0)), TrackerError);
}

TEST_CASE("scalar reduction matches the textbook recursion") {
  // Axes decouple with diagonal P and R and no velocity uncertainty.
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(1.0, 1e4);
  for (int trial = 0; trial < 100; ++trial) {
    const double P = u(rng), R = u(rng), x = u(rng), z = u(rng);
    TrackState st;
    st.P.setZero();
    st.P.topLeftCorner<3, 3>() = P * Eigen::Matrix3d::Identity();
    st.s(0) = x;
    const auto post = update(st, {z, 0, 0}, quiet_model(R));

    const double k = P / (P + R);
    const double x_post = x + k * (z - x);
    const double p_post = (1.0 - k) * P;
    CHECK(post.s(0) == doctest::Approx(x_post).epsilon(1e-14));
    CHECK(post.P(0, 0) == doctest::Approx(p_post).epsilon(1e-14));
    CHECK(post.P(0, 0) <= std::min(P, R));
  }
}

TEST_CASE("joseph form agrees with the simple form") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 100.0);
  for (int trial = 0; trial < 100; ++trial) {
    TrackState st;
    st.P = random_psd(rng, 50.0);
    for (Eigen::Index i = 0; i < 6; ++i) st.s(i) = g(rng);
    MotionModel m;
    const auto A = random_psd(rng, 200.0);
    m.R = A.topLeftCorner<3, 3>();
    const geo::CartesianPosition z{g(rng), g(rng), g(rng)};
    const auto a = update(st, z, m), b = update_joseph(st, z, m);
    CHECK((a.P - b.P).norm() <= 1e-8 * b.P.norm());
    CHECK(a.s == b.s);
  }
}

TEST_CASE("covariance stays symmetric positive semidefinite") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 300.0);
  MotionModel m;
  TrackState st = initial_state({0, 0, 9000}, 0.0);
  for (int k = 0; k < 10000; ++k) {
    st = predict(st, m, 0.5 + (k % 7) * 0.3);
    st = update(st, {g(rng), g(rng), 9000 + 3 * g(rng)}, m);
    const auto [asym, min_eig] = covariance_health(st.P);
    REQUIRE(asym == 0.0);
    REQUIRE(min_eig >= -1e-9);
  }
}

TEST_CASE("innovation nis") {
  MotionModel m = quiet_model(4.0);
  TrackState st;
  st.P.setZero();
  CHECK(innovation_nis(st, {0, 0, 0}, m) == 0.0);
  CHECK(innovation_nis(st, {2, 0, 4}, m) == doctest::Approx((4.0 + 16.0) / 4.0));
}

TEST_CASE("track") {
  SUBCASE("noiseless straight line converges") {
    std::vector<Fix> fixes;
    for (int k = 0; k < 400; ++k) {
      const double t = 2.0 * k;
      fixes.push_back({t, {1000 + 220 * t, -5000 + 35 * t, 10000}});
    }
    MotionModel m = quiet_model(100.0);
    m.sigma_a2 = 1e-4;
    const auto st = track(fixes, m);
    REQUIRE(st.size() == fixes.size());
    CHECK(geo::distance(geo::CartesianPosition::from(st.back().s.head<3>()), fixes.back().z) < 1e-3);
    CHECK((st.back().s.tail<3>() - Eigen::Vector3d(220, 35, 0)).norm() < 1e-3);
  }

  SUBCASE("noisy fixes are smoothed") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g(0.0, 300.0);
    std::vector<Fix> fixes;
    std::vector<geo::CartesianPosition> truth;
    for (int k = 0; k < 600; ++k) {
      const double t = 1.0 * k;
      truth.push_back({230 * t, 40 * t, 9000});
      fixes.push_back({t, {truth.back().x + g(rng), truth.back().y + g(rng), truth.back().z + g(rng)}});
    }
    MotionModel m;
    m.R = 300.0 * 300.0 * Eigen::Matrix3d::Identity();
    const auto st = track(fixes, m);
    double raw = 0.0, kf = 0.0;
    for (std::size_t k = 50; k < fixes.size(); ++k) {
      raw += std::pow(geo::distance(fixes[k].z, truth[k]), 2);
      kf += std::pow(geo::distance(geo::CartesianPosition::from(st[k].s.head<3>()), truth[k]), 2);
    }
    CHECK(std::sqrt(kf) < std::sqrt(raw));
  }

  SUBCASE("single fix") {
    const MotionModel m;
    const std::vector<Fix> one{{3.0, {1, 2, 3}}};
    const auto st = track(one, m, 1e4);
    const auto expect = update(initial_state({1, 2, 3}, 3.0, 1e4), {1, 2, 3}, m);
    REQUIRE(st.size() == 1);
    CHECK(st[0].s == expect.s);
    CHECK(st[0].P == expect.P);
    CHECK(track(std::vector<Fix>{}, m).empty());
  }

  SUBCASE("times must increase") {
    const std::vector<Fix> bad{{1.0, {}}, {2.0, {}}, {2.0, {}}};
    CHECK_THROWS_AS(track(bad, MotionModel{}), std::invalid_argument);
  }
}

TEST_CASE("localization error") {
  const geo::CartesianPosition o{0, 0, 0};
  CHECK(localization_error(o, o) == 0.0);
  CHECK(localization_error(o, {3, 4, 10}) == doctest::Approx(std::sqrt(26.0)));
  CHECK(localization_error(o, {0, 0, 100}) == doctest::Approx(10.0));

  std::mt19937_64 rng(6);
  std::normal_distribution<double> g(0.0, 1000.0);
  auto draw = [&] { return geo::CartesianPosition{g(rng), g(rng), g(rng)}; };
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = draw(), b = draw(), c = draw(), s = draw();
    const geo::CartesianPosition as{a.x + s.x, a.y + s.y, a.z + s.z}, bs{b.x + s.x, b.y + s.y, b.z + s.z};
    CHECK(localization_error(as, bs) == doctest::Approx(localization_error(a, b)).epsilon(1e-9));
    CHECK(localization_error(a, b) == localization_error(b, a));
    CHECK(localization_error(a, c) <= localization_error(a, b) + localization_error(b, c) + 1e-9);
  }
}
