#include "avtrack/parallel/monte_carlo.hpp"

#include "avtrack/constants.hpp"
#include "avtrack/random.hpp"

namespace avtrack::parallel {

namespace {

NoiseTrial one_trial(std::span<const mlat::CartesianPosition> anchors, const mlat::CartesianPosition& emitter,
                     double sigma, std::size_t rep, std::uint64_t seed) {
  mlat::TdoaMeasurementSet m;
  m.anchors.assign(anchors.begin(), anchors.end());
  for (std::size_t k = 0; k < anchors.size(); ++k)
    m.toas.push_back(geo::distance(anchors[k], emitter) / kSpeedOfLight + sigma * hash_normal(seed, rep, k));
  NoiseTrial t;
  try {
    t.error = geo::distance(mlat::solve(m).position, emitter);
    t.status = SolveStatus::Ok;
  } catch (const mlat::GeometryError&) {
    t.status = SolveStatus::Geometry;
  } catch (const mlat::NoSolutionError&) {
    t.status = SolveStatus::NoSolution;
  } catch (const mlat::AmbiguityError&) {
    t.status = SolveStatus::Ambiguous;
  } catch (const std::invalid_argument&) {
    t.status = SolveStatus::Invalid;
  }
  return t;
}

}  // namespace

std::vector<NoiseTrial> mlat_noise_trials_serial(std::span<const mlat::CartesianPosition> anchors,
                                                 const mlat::CartesianPosition& emitter, double sigma,
                                                 std::size_t reps, std::uint64_t seed) {
  std::vector<NoiseTrial> out(reps);
  for (std::size_t i = 0; i < reps; ++i) out[i] = one_trial(anchors, emitter, sigma, i, seed);
  return out;
}

std::vector<NoiseTrial> mlat_noise_trials(std::span<const mlat::CartesianPosition> anchors,
                                          const mlat::CartesianPosition& emitter, double sigma,
                                          std::size_t reps, std::uint64_t seed) {
  std::vector<NoiseTrial> out(reps);
  const auto n = static_cast<long>(reps);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] = one_trial(anchors, emitter, sigma, static_cast<std::size_t>(i), seed);
  return out;
}

}  // namespace avtrack::parallel
