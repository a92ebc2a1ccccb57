#pragma once

#include <optional>
#include <span>
#include <vector>

#include "avtrack/mlat/mlat.hpp"

namespace avtrack::parallel {

enum class SolveStatus { Ok, Geometry, NoSolution, Ambiguous, Invalid };

struct BatchResult {
  SolveStatus status = SolveStatus::Invalid;
  mlat::MlatSolution solution;  // valid when status == Ok
};

/// Reference implementation: one solve after another.
std::vector<BatchResult> solve_batch_serial(std::span<const mlat::TdoaMeasurementSet> batch);

/// OpenMP version; results are identical to the serial one, element by element.
std::vector<BatchResult> solve_batch(std::span<const mlat::TdoaMeasurementSet> batch);

}  // namespace avtrack::parallel
