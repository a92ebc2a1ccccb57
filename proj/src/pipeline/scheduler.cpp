#include "avtrack/pipeline/scheduler.hpp"

namespace avtrack::pipeline {

RetrainDecision retrain_scheduler(double now, double last_retrain, std::size_t samples_in_window,
                                  double period, std::size_t min_samples) {
  if (now - last_retrain < period) return RetrainDecision::Wait;
  return samples_in_window >= min_samples ? RetrainDecision::Retrain : RetrainDecision::Starved;
}

}  // namespace avtrack::pipeline
