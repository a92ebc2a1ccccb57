#include <doctest.h>

#include <omp.h>

#include <random>

#include "avtrack/airsim/dataset.hpp"
#include "avtrack/constants.hpp"
#include "avtrack/parallel/batch.hpp"
#include "avtrack/parallel/monte_carlo.hpp"
#include "avtrack/pipeline/report.hpp"
#include "avtrack/pipeline/sweep.hpp"

using namespace avtrack;
using namespace avtrack::parallel;

namespace {

std::vector<mlat::TdoaMeasurementSet> random_batch(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xy(-20000, 20000), z(0, 1000), ez(5000, 12000);
  std::normal_distribution<double> noise(0.0, 20e-9);
  std::vector<mlat::TdoaMeasurementSet> out;
  for (std::size_t i = 0; i < n; ++i) {
    mlat::TdoaMeasurementSet m;
    m.anchors.push_back({0, 0, 0});
    const std::size_t k = 4 + i % 3;
    for (std::size_t j = 1; j < k; ++j) m.anchors.push_back({xy(rng), xy(rng), z(rng)});
    const mlat::CartesianPosition q{xy(rng), xy(rng), ez(rng)};
    for (const auto& a : m.anchors) m.toas.push_back(geo::distance(a, q) / kSpeedOfLight + noise(rng));
    if (i % 17 == 0) m.toas.pop_back();  // malformed on purpose
    out.push_back(std::move(m));
  }
  return out;
}

struct Threads {
  explicit Threads(int n) : saved(omp_get_max_threads()) { omp_set_num_threads(n); }
  ~Threads() { omp_set_num_threads(saved); }
  int saved;
};

}  // namespace

TEST_CASE("batch solve matches the serial reference") {
  const Threads threads(4);
  const auto batch = random_batch(2000, 1);
  const auto a = solve_batch_serial(batch);
  const auto b = solve_batch(batch);
  REQUIRE(a.size() == b.size());
  std::size_t ok = 0, invalid = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].status == b[i].status);
    CHECK(a[i].solution.position == b[i].solution.position);
    ok += a[i].status == SolveStatus::Ok;
    invalid += a[i].status == SolveStatus::Invalid;
  }
  CHECK(ok > 1500);
  CHECK(invalid == (2000 + 16) / 17);
  CHECK(solve_batch({}).empty());
}

TEST_CASE("Monte-Carlo trials match the serial reference") {
  const Threads threads(4);
  const std::vector<mlat::CartesianPosition> anchors{
      {0, 0, 0}, {18000, 2000, 100}, {-5000, 15000, 300}, {-12000, -9000, 50}, {7000, -14000, 600}};
  const mlat::CartesianPosition emitter{3000, 4000, 9500};
  const auto a = mlat_noise_trials_serial(anchors, emitter, 10e-9, 5000, 7);
  const auto b = mlat_noise_trials(anchors, emitter, 10e-9, 5000, 7);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].status == b[i].status);
    CHECK(a[i].error == b[i].error);
  }
  CHECK(mlat_noise_trials(anchors, emitter, 0.0, 10, 7)[3].error < 1e-6);
  CHECK(mlat_noise_trials(anchors, emitter, 10e-9, 10, 8)[3].error != b[3].error);
}

TEST_CASE("parallel sweep matches the serial sweep") {
  const Threads threads(3);
  const auto sc = airsim::make_preset("default", 2);
  const auto mixed = airsim::simulate_dataset(sc);
  const auto twin = airsim::simulate_dataset(airsim::to_all_gsn(sc));
  std::vector<pipeline::SweepCase> cases;
  for (auto m : pipeline::all_modes()) {
    pipeline::SweepCase c;
    c.label = std::string(pipeline::to_string(m));
    c.config.mode = m;
    c.data = m == pipeline::SyncMode::Gsn ? &twin : &mixed;
    cases.push_back(c);
  }
  const auto a = pipeline::run_cases_serial(cases);
  const auto b = pipeline::run_cases(cases);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CAPTURE(cases[i].label);
    CHECK(pipeline::format_fixes(a[i]) == pipeline::format_fixes(b[i]));
    CHECK(pipeline::format_sync(a[i]) == pipeline::format_sync(b[i]));
  }

  const auto sweep = pipeline::sweep_modes(sc, pipeline::RunConfig{}, pipeline::all_modes());
  REQUIRE(sweep.reports.size() == a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(pipeline::format_fixes(sweep.reports[i]) == pipeline::format_fixes(a[i]));
}
