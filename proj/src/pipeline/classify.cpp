#include "avtrack/pipeline/classify.hpp"

#include <algorithm>

namespace avtrack::pipeline {

std::string_view to_string(SyncMode m) {
  switch (m) {
    case SyncMode::None: return "none";
    case SyncMode::Prior: return "prior";
    case SyncMode::Arima: return "arima";
    case SyncMode::Lstm: return "lstm";
    case SyncMode::Gsn: return "gsn";
  }
  return "?";
}

std::optional<SyncMode> parse_sync_mode(std::string_view s) {
  if (s == "none") return SyncMode::None;
  if (s == "prior" || s == "prior_offset") return SyncMode::Prior;
  if (s == "arima") return SyncMode::Arima;
  if (s == "lstm") return SyncMode::Lstm;
  if (s == "gsn" || s == "all_gsn_baseline") return SyncMode::Gsn;
  return std::nullopt;
}

std::vector<SyncMode> all_modes() {
  return {SyncMode::None, SyncMode::Prior, SyncMode::Arima, SyncMode::Lstm, SyncMode::Gsn};
}

void RunConfig::validate() const {
  if (!(retrain_period > 0.0)) throw std::invalid_argument("retrain_period must be > 0");
  if (min_receivers < 4) throw std::invalid_argument("min_receivers must be >= 4");
  if (!(sample_expiry > 0.0)) throw std::invalid_argument("sample_expiry must be > 0");
  if (!(toa_sigma_gsn > 0.0) || !(toa_sigma_sn > 0.0))
    throw std::invalid_argument("ToA sigmas must be > 0");
  if (kf2_gate < 0.0 || kf2_gate_reset < 1) throw std::invalid_argument("invalid KF2 gate");
  lstm.validate();
}

Role classify(const BroadcastRecord& record, const ClassifyPolicy& policy) {
  auto has = [](const std::vector<int>& v, int id) { return std::find(v.begin(), v.end(), id) != v.end(); };
  if (has(policy.targets, record.av_id)) return Role::Target;
  if (has(policy.trusted, record.av_id)) return Role::Trusted;
  if (!policy.targets.empty() && policy.trusted.empty()) return Role::Trusted;
  if (policy.use_record_flag) return record.trusted ? Role::Trusted : Role::Target;
  switch (policy.unknown) {
    case UnknownPolicy::Trusted: return Role::Trusted;
    case UnknownPolicy::Target: return Role::Target;
    case UnknownPolicy::Reject: break;
  }
  throw UnknownAvError(record.av_id);
}

}  // namespace avtrack::pipeline
