#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "avtrack/parallel/batch.hpp"

namespace avtrack::parallel {

struct NoiseTrial {
  SolveStatus status = SolveStatus::Invalid;
  double error = 0.0;  // m, distance to the emitter when status == Ok
};

/// Re-solves one geometry `reps` times with i.i.d. Gaussian ToA noise of
/// `sigma` seconds. The noise of replicate i depends only on (seed, i, anchor),
/// so every thread layout gives the same trials.
std::vector<NoiseTrial> mlat_noise_trials_serial(std::span<const mlat::CartesianPosition> anchors,
                                                 const mlat::CartesianPosition& emitter, double sigma,
                                                 std::size_t reps, std::uint64_t seed);
std::vector<NoiseTrial> mlat_noise_trials(std::span<const mlat::CartesianPosition> anchors,
                                          const mlat::CartesianPosition& emitter, double sigma,
                                          std::size_t reps, std::uint64_t seed);

}  // namespace avtrack::parallel
