#include "avtrack/parallel/batch.hpp"

namespace avtrack::parallel {

namespace {

BatchResult solve_one(const mlat::TdoaMeasurementSet& m) {
  BatchResult r;
  try {
    r.solution = mlat::solve(m);
    r.status = SolveStatus::Ok;
  } catch (const mlat::GeometryError&) {
    r.status = SolveStatus::Geometry;
  } catch (const mlat::NoSolutionError&) {
    r.status = SolveStatus::NoSolution;
  } catch (const mlat::AmbiguityError&) {
    r.status = SolveStatus::Ambiguous;
  } catch (const std::invalid_argument&) {
    r.status = SolveStatus::Invalid;
  }
  return r;
}

}  // namespace

std::vector<BatchResult> solve_batch_serial(std::span<const mlat::TdoaMeasurementSet> batch) {
  std::vector<BatchResult> out(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) out[i] = solve_one(batch[i]);
  return out;
}

std::vector<BatchResult> solve_batch(std::span<const mlat::TdoaMeasurementSet> batch) {
  std::vector<BatchResult> out(batch.size());
  const auto n = static_cast<long>(batch.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = solve_one(batch[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace avtrack::parallel
