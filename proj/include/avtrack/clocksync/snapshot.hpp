#pragma once

#include <string>
#include <string_view>

#include "avtrack/clocksync/arima.hpp"
#include "avtrack/lstm/lstm.hpp"

namespace avtrack::clocksync {

// Model checkpoints are JSON documents with a "format" tag
// ("avtrack-ar v1" or "avtrack-lstm v1"). Doubles round-trip exactly.

std::string save_snapshot(const ClockModelAR& model);
std::string save_snapshot(const lstm::ClockModelLSTM& model);

/// Throw std::invalid_argument on a malformed document or wrong format tag.
ClockModelAR load_ar_snapshot(std::string_view json);
lstm::ClockModelLSTM load_lstm_snapshot(std::string_view json);

}  // namespace avtrack::clocksync
