#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "avtrack/constants.hpp"
#include "avtrack/mlat/mlat.hpp"

using namespace avtrack;
using namespace avtrack::mlat;

namespace {

struct Instance {
  std::vector<CartesianPosition> anchors;
  CartesianPosition emitter;
};

Instance random_instance(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> xy(-20000, 20000), z(0, 1000), ez(5000, 12000);
  Instance in;
  in.anchors.push_back({0, 0, 0});
  for (std::size_t i = 1; i < n; ++i) in.anchors.push_back({xy(rng), xy(rng), z(rng)});
  in.emitter = {xy(rng), xy(rng), ez(rng)};
  return in;
}

std::vector<double> toas_for(const Instance& in, double sigma = 0.0, std::mt19937_64* rng = nullptr) {
  std::normal_distribution<double> g(0.0, sigma);
  std::vector<double> t;
  for (const auto& a : in.anchors)
    t.push_back(geo::distance(a, in.emitter) / kSpeedOfLight + (rng && sigma > 0 ? g(*rng) : 0.0));
  return t;
}

// Solution nearest to the truth when the root rule leaves two candidates.
std::optional<MlatSolution> solve_near(const TdoaMeasurementSet& m, const CartesianPosition& truth) {
  try {
    return solve(m);
  } catch (const AmbiguityError& e) {
    const auto& c = e.candidates;
    return geo::distance(c[0].position, truth) < geo::distance(c[1].position, truth) ? c[0] : c[1];
  } catch (const MlatError&) {
    return std::nullopt;
  }
}

}  // namespace

TEST_CASE("tdoa distances") {
  CHECK(tdoa_distances(std::vector<double>{3.0, 3.0, 3.0}) == std::vector<double>{0.0, 0.0});
  CHECK(tdoa_distances(std::vector<double>{0.0, 1e-6})[0] == doctest::Approx(299.792458));
  const std::vector<double> t{0.1, 0.1000021, 0.0999987};
  const std::vector<double> swapped{0.1000021, 0.1, 0.0999987};
  CHECK(tdoa_distances(swapped)[0] == -tdoa_distances(t)[0]);
  CHECK_THROWS_AS(tdoa_distances(std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("linear system") {
  const std::vector<CartesianPosition> a{{0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {0, 0, 2}};
  const auto sys = build_system(a, std::vector<double>{0, 0, 0});
  CHECK(sys.m == Eigen::Vector3d::Zero());
  CHECK(sys.c == Eigen::Vector3d(2, 2, 2));

  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const auto in = random_instance(rng, 6);
    const auto d = tdoa_distances(toas_for(in));
    const auto s = build_system(in.anchors, d);
    const double d1 = geo::distance(in.emitter, in.anchors[0]);
    const Eigen::VectorXd r = s.B * in.emitter.vec() - d1 * s.m - s.c;
    CHECK(r.cwiseAbs().maxCoeff() < 1e-6 * (1.0 + s.c.cwiseAbs().maxCoeff()));
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      CHECK(s.c(k) + 0.5 * d[i] * d[i] == doctest::Approx(0.5 * in.anchors[i + 1].vec().squaredNorm()));
    }
  }
}

TEST_CASE("symmetric instance") {
  const Instance in{{{0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {0, 0, 2}}, {1, 1, 1}};
  const auto sol = solve({in.anchors, toas_for(in)});
  CHECK(geo::distance(sol.position, in.emitter) < 1e-9);
  CHECK(sol.root_multiplicity == RootMultiplicity::Unique);
  CHECK(sol.d1 == doctest::Approx(std::sqrt(3.0)));
  CHECK_FALSE(sol.tangent);
}

TEST_CASE("noiseless random geometries are recovered exactly") {
  std::mt19937_64 rng(1);
  int solved = 0;
  double worst = 0.0;
  while (solved < 100) {
    const auto in = random_instance(rng, 4);
    const TdoaMeasurementSet m{in.anchors, toas_for(in)};
    const auto sol = solve_near(m, in.emitter);
    REQUIRE(sol.has_value());
    if (sol->condition_number >= 1e6) continue;
    ++solved;
    worst = std::max(worst, geo::distance(sol->position, in.emitter));
    // Self-consistency of the range to the reference anchor.
    CHECK(std::abs(sol->position.vec().norm() - sol->d1) < 1e-6 * (1.0 + sol->d1));
    // Every TDoA is reproduced by the returned position.
    const auto d = tdoa_distances(m.toas);
    for (std::size_t i = 1; i < m.anchors.size(); ++i)
      CHECK(std::abs(geo::distance(sol->position, m.anchors[i]) - sol->position.vec().norm() - d[i - 1]) < 1e-6);
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("rotation and translation equivariance") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(-3.1, 3.1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto in = random_instance(rng, 5);
    const auto base = solve_near({in.anchors, toas_for(in)}, in.emitter);
    REQUIRE(base.has_value());

    // Rotation about the vertical keeps "up" up, so the root rule is unchanged.
    const Eigen::Matrix3d R = Eigen::AngleAxisd(ang(rng), Eigen::Vector3d::UnitZ()).toRotationMatrix();
    Instance rot;
    for (const auto& a : in.anchors) rot.anchors.push_back(CartesianPosition::from(R * a.vec()));
    rot.emitter = CartesianPosition::from(R * in.emitter.vec());
    const auto rs = solve_near({rot.anchors, toas_for(rot)}, rot.emitter);
    REQUIRE(rs.has_value());
    CHECK((rs->position.vec() - R * base->position.vec()).norm() <= 1e-9 * (1.0 + in.emitter.vec().norm()));

    const std::vector<double> t = toas_for(in);
    for (std::size_t o = 1; o < in.anchors.size(); ++o) {
      try {
        const auto s = solve_shifted(in.anchors, t, o);
        CHECK(geo::distance(s.position, in.emitter) < 1e-6);
      } catch (const AmbiguityError& e) {
        CHECK(std::min(geo::distance(e.candidates[0].position, in.emitter),
                       geo::distance(e.candidates[1].position, in.emitter)) < 1e-6);
      }
    }
  }
}

TEST_CASE("overdetermined solve") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto in = random_instance(rng, 8);
    const auto sol = solve_near({in.anchors, toas_for(in)}, in.emitter);
    REQUIRE(sol.has_value());
    CHECK(geo::distance(sol->position, in.emitter) < 1e-6);
  }

  const auto in = random_instance(rng, 4);
  const auto t = toas_for(in);
  const auto four = solve_near({in.anchors, t}, in.emitter);
  auto dup = in.anchors;
  auto tdup = t;
  dup.push_back(in.anchors[2]);
  tdup.push_back(t[2]);
  const auto five = solve_overdetermined({dup, tdup});
  CHECK(geo::distance(four->position, five.position) < 1e-9);
  CHECK_THROWS_AS(solve_overdetermined({in.anchors, t}), std::invalid_argument);
}

TEST_CASE("eight noisy anchors beat each four-anchor subset on most draws") {
  std::mt19937_64 rng(5);
  std::vector<int> subsets;
  for (int mask = 0; mask < 256; ++mask)
    if ((mask & 1) && __builtin_popcount(static_cast<unsigned>(mask)) == 4) subsets.push_back(mask);
  std::vector<int> wins(subsets.size(), 0), draws(subsets.size(), 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto in = random_instance(rng, 8);
    const auto t = toas_for(in, 10e-9, &rng);
    const auto all = solve_near({in.anchors, t}, in.emitter);
    if (!all) continue;
    const double e_all = geo::distance(all->position, in.emitter);
    for (std::size_t k = 0; k < subsets.size(); ++k) {
      std::vector<CartesianPosition> a;
      std::vector<double> ts;
      for (std::size_t i = 0; i < 8; ++i)
        if (subsets[k] >> i & 1) {
          a.push_back(in.anchors[i]);
          ts.push_back(t[i]);
        }
      const auto sub = solve_near({a, ts}, in.emitter);
      ++draws[k];
      wins[k] += !sub || e_all <= geo::distance(sub->position, in.emitter);
    }
  }
  for (std::size_t k = 0; k < subsets.size(); ++k) {
    CAPTURE(subsets[k]);
    REQUIRE(draws[k] >= 190);
    CHECK(static_cast<double>(wins[k]) / draws[k] >= 0.6);
  }
}

TEST_CASE("ten nanosecond noise stays finite") {
  std::mt19937_64 rng(6);
  int finite = 0, total = 0;
  std::vector<double> errors;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto in = random_instance(rng, 4);
    const auto clean = solve_near({in.anchors, toas_for(in)}, in.emitter);
    if (!clean || clean->condition_number >= 1e6) continue;
    ++total;
    const auto sol = solve_near({in.anchors, toas_for(in, 10e-9, &rng)}, in.emitter);
    if (sol && sol->position.vec().allFinite()) {
      ++finite;
      errors.push_back(geo::distance(sol->position, in.emitter));
    }
  }
  CHECK(static_cast<double>(finite) / total >= 0.99);
}

TEST_CASE("solver errors") {
  const std::vector<CartesianPosition> flat{{0, 0, 0}, {1000, 0, 0}, {0, 1000, 0}, {1000, 1000, 0}};
  CHECK_THROWS_AS(solve({flat, {0, 1e-7, 2e-7, 3e-7}}), GeometryError);

  // Both roots of the range equation are negative.
  const std::vector<CartesianPosition> unit{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const double d = 0.9 / kSpeedOfLight;
  CHECK_THROWS_AS(solve({unit, {0.0, -d, -d, -d}}), NoSolutionError);

  CHECK_THROWS_AS(solve({{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {0, 0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(solve({{{5, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {0, 0, 0, 0}}), std::invalid_argument);

  std::mt19937_64 rng(7);
  bool found = false;
  for (int trial = 0; trial < 20000 && !found; ++trial) {
    const auto in = random_instance(rng, 4);
    try {
      solve({in.anchors, toas_for(in)});
    } catch (const AmbiguityError& e) {
      found = true;
      CHECK(e.candidates[0].position.z > 0.0);
      CHECK(e.candidates[1].position.z > 0.0);
      CHECK(e.candidates[0].root_multiplicity == RootMultiplicity::TwoPositive);
      CHECK(std::min(geo::distance(e.candidates[0].position, in.emitter),
                     geo::distance(e.candidates[1].position, in.emitter)) < 1e-6);
    } catch (const MlatError&) {
    }
  }
  CHECK(found);
}

TEST_CASE("position covariance") {
  std::mt19937_64 rng(8);
  const auto in = random_instance(rng, 5);
  const std::vector<double> s1(5, 10e-9), s2(5, 20e-9);
  const Eigen::Matrix3d c1 = position_covariance(in.anchors, in.emitter, s1);
  const Eigen::Matrix3d c2 = position_covariance(in.anchors, in.emitter, s2);
  CHECK((c1 - c1.transpose()).norm() < 1e-9 * c1.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(c1);
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  CHECK((c2 - 4.0 * c1).norm() < 1e-6 * c2.norm());
  CHECK_THROWS_AS(position_covariance(in.anchors, in.emitter, std::vector<double>(3, 1e-9)),
                  std::invalid_argument);
}
