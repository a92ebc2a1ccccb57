#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "avtrack/pipeline/config.hpp"

namespace avtrack::pipeline {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads a JSON object on top of `base`; absent keys keep their base value,
/// unknown keys are rejected. The result is validated.
RunConfig parse_run_config(std::string_view json_text, RunConfig base = {});
std::string format_run_config(const RunConfig& config);

}  // namespace avtrack::pipeline
