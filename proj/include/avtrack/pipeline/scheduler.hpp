#pragma once

#include <cstddef>

namespace avtrack::pipeline {

enum class RetrainDecision { Wait, Retrain, Starved };

/// Retrain once `period` has elapsed since `last_retrain` and the trailing
/// window holds at least `min_samples`; past the period with fewer samples
/// the retrain is deferred as data starvation.
RetrainDecision retrain_scheduler(double now, double last_retrain, std::size_t samples_in_window,
                                  double period = 1200.0, std::size_t min_samples = 100);

}  // namespace avtrack::pipeline
