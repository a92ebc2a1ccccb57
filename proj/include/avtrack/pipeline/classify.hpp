#pragma once

#include <stdexcept>

#include "avtrack/pipeline/config.hpp"
#include "avtrack/records.hpp"

namespace avtrack::pipeline {

enum class Role { Trusted, Target };

class UnknownAvError : public std::runtime_error {
 public:
  explicit UnknownAvError(int av_id)
      : std::runtime_error("no classification rule for av_id " + std::to_string(av_id)), av_id(av_id) {}
  int av_id;
};

/// Target list first, then trusted list. When only a target list is given the
/// remaining aircraft are trusted. Otherwise the record flag decides, unless
/// disabled, in which case `unknown` applies.
Role classify(const BroadcastRecord& record, const ClassifyPolicy& policy);

}  // namespace avtrack::pipeline
