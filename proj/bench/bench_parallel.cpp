// Serial reference vs OpenMP for the three parallel kernels. The thread count
// is the benchmark argument; the serial variants ignore it.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "avtrack/airsim/dataset.hpp"
#include "avtrack/constants.hpp"
#include "avtrack/parallel/batch.hpp"
#include "avtrack/parallel/monte_carlo.hpp"
#include "avtrack/pipeline/sweep.hpp"

using namespace avtrack;

namespace {

const std::vector<mlat::TdoaMeasurementSet>& batch() {
  static const auto b = [] {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> xy(-20000, 20000), z(0, 1000), ez(5000, 12000);
    std::normal_distribution<double> noise(0.0, 20e-9);
    std::vector<mlat::TdoaMeasurementSet> out;
    for (int i = 0; i < 20000; ++i) {
      mlat::TdoaMeasurementSet m;
      m.anchors.push_back({0, 0, 0});
      for (int j = 0; j < 5; ++j) m.anchors.push_back({xy(rng), xy(rng), z(rng)});
      const mlat::CartesianPosition q{xy(rng), xy(rng), ez(rng)};
      for (const auto& a : m.anchors) m.toas.push_back(geo::distance(a, q) / kSpeedOfLight + noise(rng));
      out.push_back(std::move(m));
    }
    return out;
  }();
  return b;
}

const std::vector<mlat::CartesianPosition> kAnchors{
    {0, 0, 0}, {18000, 2000, 100}, {-5000, 15000, 300}, {-12000, -9000, 50}, {7000, -14000, 600}};
const mlat::CartesianPosition kEmitter{3000, 4000, 9500};

struct SweepInput {
  airsim::Dataset mixed, twin;
  std::vector<pipeline::SweepCase> cases;
};

const SweepInput& sweep_input() {
  static const SweepInput in = [] {
    SweepInput s;
    const auto sc = airsim::make_preset("default", 1);
    s.mixed = airsim::simulate_dataset(sc);
    s.twin = airsim::simulate_dataset(airsim::to_all_gsn(sc));
    for (auto m : {pipeline::SyncMode::None, pipeline::SyncMode::Prior, pipeline::SyncMode::Arima,
                   pipeline::SyncMode::Gsn}) {
      pipeline::SweepCase c;
      c.config.mode = m;
      c.data = m == pipeline::SyncMode::Gsn ? &s.twin : &s.mixed;
      s.cases.push_back(c);
    }
    return s;
  }();
  return in;
}

void BM_BatchMlatSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(parallel::solve_batch_serial(batch()));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(batch().size()));
}

void BM_BatchMlatOmp(benchmark::State& st) {
  omp_set_num_threads(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(parallel::solve_batch(batch()));
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(batch().size()));
}

void BM_MonteCarloSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(parallel::mlat_noise_trials_serial(kAnchors, kEmitter, 10e-9, 20000, 3));
  st.SetItemsProcessed(st.iterations() * 20000);
}

void BM_MonteCarloOmp(benchmark::State& st) {
  omp_set_num_threads(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(parallel::mlat_noise_trials(kAnchors, kEmitter, 10e-9, 20000, 3));
  st.SetItemsProcessed(st.iterations() * 20000);
}

void BM_SweepSerial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(pipeline::run_cases_serial(sweep_input().cases));
}

void BM_SweepOmp(benchmark::State& st) {
  omp_set_num_threads(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(pipeline::run_cases(sweep_input().cases));
}

}  // namespace

BENCHMARK(BM_BatchMlatSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchMlatOmp)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_MonteCarloSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MonteCarloOmp)->RangeMultiplier(2)->Range(1, 8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepOmp)->RangeMultiplier(2)->Range(1, 4)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
