#include "avtrack/pipeline/config_io.hpp"

#include <nlohmann/json.hpp>

#include <set>

namespace avtrack::pipeline {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (!allowed.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) {
    try {
      out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(std::string("key '") + key + "': " + e.what());
    }
  }
}

PairingPolicy parse_pairing(const std::string& s) {
  if (s == "average") return PairingPolicy::Average;
  if (s == "first_gsn") return PairingPolicy::FirstGsn;
  throw ConfigError("pairing must be average or first_gsn, got '" + s + "'");
}

UnknownPolicy parse_unknown(const std::string& s) {
  if (s == "reject") return UnknownPolicy::Reject;
  if (s == "trusted") return UnknownPolicy::Trusted;
  if (s == "target") return UnknownPolicy::Target;
  throw ConfigError("unknown must be reject, trusted or target, got '" + s + "'");
}

RunConfig parse_impl(std::string_view json_text, RunConfig c) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  check_keys(j,
             {"mode", "retrain_period", "min_training_msgs", "min_receivers", "sample_expiry",
              "pairing", "targets", "trusted", "use_record_flag", "unknown", "use_kf2",
              "propagate_R", "toa_sigma_gsn", "toa_sigma_sn", "kf2_gate", "kf2_gate_reset", "sigma_a2", "seed", "kf1", "lstm",
              "order_selection"},
             "config");
  if (j.contains("mode")) {
    auto m = parse_sync_mode(j.at("mode").get<std::string>());
    if (!m) throw ConfigError("unknown mode '" + j.at("mode").get<std::string>() + "'");
    c.mode = *m;
  }
  read(j, "retrain_period", c.retrain_period);
  read(j, "min_training_msgs", c.min_training_msgs);
  read(j, "min_receivers", c.min_receivers);
  read(j, "sample_expiry", c.sample_expiry);
  if (j.contains("pairing")) c.pairing = parse_pairing(j.at("pairing").get<std::string>());
  read(j, "targets", c.classify.targets);
  read(j, "trusted", c.classify.trusted);
  read(j, "use_record_flag", c.classify.use_record_flag);
  if (j.contains("unknown")) c.classify.unknown = parse_unknown(j.at("unknown").get<std::string>());
  read(j, "use_kf2", c.use_kf2);
  read(j, "propagate_R", c.propagate_R);
  read(j, "toa_sigma_gsn", c.toa_sigma_gsn);
  read(j, "toa_sigma_sn", c.toa_sigma_sn);
  read(j, "kf2_gate", c.kf2_gate);
  read(j, "kf2_gate_reset", c.kf2_gate_reset);
  read(j, "sigma_a2", c.motion.sigma_a2);
  read(j, "seed", c.seed);
  if (j.contains("kf1")) {
    const auto& k = j.at("kf1");
    check_keys(k, {"meas_var", "quant_step", "offset_noise_var"}, "kf1");
    if (k.contains("meas_var")) c.kf1.meas_var = k.at("meas_var").get<double>();
    read(k, "quant_step", c.kf1.quant_step);
    read(k, "offset_noise_var", c.kf1.offset_noise_var);
  }
  if (j.contains("lstm")) {
    const auto& l = j.at("lstm");
    check_keys(l,
               {"hidden_units", "fc1_units", "dropout_rate", "learning_rate", "epochs", "patience",
                "window_len", "batch_size"},
               "lstm");
    read(l, "hidden_units", c.lstm.hidden_units);
    read(l, "fc1_units", c.lstm.fc1_units);
    read(l, "dropout_rate", c.lstm.dropout_rate);
    read(l, "learning_rate", c.lstm.learning_rate);
    read(l, "epochs", c.lstm.epochs);
    read(l, "patience", c.lstm.patience);
    read(l, "window_len", c.lstm.window_len);
    read(l, "batch_size", c.lstm.batch_size);
  }
  if (j.contains("order_selection")) {
    const auto& o = j.at("order_selection");
    check_keys(o, {"max_lag", "max_order"}, "order_selection");
    read(o, "max_lag", c.order_selection.max_lag);
    read(o, "max_order", c.order_selection.max_order);
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, RunConfig base) {
  try {
    return parse_impl(json_text, std::move(base));
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
}

std::string format_run_config(const RunConfig& c) {
  json j;
  j["mode"] = std::string(to_string(c.mode));
  j["retrain_period"] = c.retrain_period;
  j["min_training_msgs"] = c.min_training_msgs;
  j["min_receivers"] = c.min_receivers;
  j["sample_expiry"] = c.sample_expiry;
  j["pairing"] = c.pairing == PairingPolicy::Average ? "average" : "first_gsn";
  j["targets"] = c.classify.targets;
  j["trusted"] = c.classify.trusted;
  j["use_record_flag"] = c.classify.use_record_flag;
  j["unknown"] = c.classify.unknown == UnknownPolicy::Reject    ? "reject"
                 : c.classify.unknown == UnknownPolicy::Trusted ? "trusted"
                                                                : "target";
  j["use_kf2"] = c.use_kf2;
  j["propagate_R"] = c.propagate_R;
  j["toa_sigma_gsn"] = c.toa_sigma_gsn;
  j["toa_sigma_sn"] = c.toa_sigma_sn;
  j["kf2_gate"] = c.kf2_gate;
  j["kf2_gate_reset"] = c.kf2_gate_reset;
  j["sigma_a2"] = c.motion.sigma_a2;
  j["seed"] = c.seed;
  json k;
  if (c.kf1.meas_var) k["meas_var"] = *c.kf1.meas_var;
  k["quant_step"] = c.kf1.quant_step;
  k["offset_noise_var"] = c.kf1.offset_noise_var;
  j["kf1"] = k;
  j["lstm"] = {{"hidden_units", c.lstm.hidden_units},   {"fc1_units", c.lstm.fc1_units},
               {"dropout_rate", c.lstm.dropout_rate},   {"learning_rate", c.lstm.learning_rate},
               {"epochs", c.lstm.epochs},               {"patience", c.lstm.patience},
               {"window_len", c.lstm.window_len},       {"batch_size", c.lstm.batch_size}};
  j["order_selection"] = {{"max_lag", c.order_selection.max_lag},
                          {"max_order", c.order_selection.max_order}};
  return j.dump(2) + "\n";
}

}  // namespace avtrack::pipeline
