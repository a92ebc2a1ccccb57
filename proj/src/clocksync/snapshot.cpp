#include "avtrack/clocksync/snapshot.hpp"

#include <nlohmann/json.hpp>

namespace avtrack::clocksync {

using nlohmann::json;

namespace {

json vec(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vec(const json& j) {
  const auto v = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

json mat(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> r(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index k = 0; k < m.cols(); ++k) r[static_cast<std::size_t>(k)] = m(i, k);
    rows.push_back(r);
  }
  return rows;
}

Eigen::MatrixXd mat(const json& j) {
  const auto rows = j.get<std::vector<std::vector<double>>>();
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto m = n ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  Eigen::MatrixXd out(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != m)
      throw std::invalid_argument("ragged matrix in snapshot");
    for (Eigen::Index k = 0; k < m; ++k) out(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
  }
  return out;
}

json parse(std::string_view text, std::string_view format) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("snapshot is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != format)
    throw std::invalid_argument("snapshot format is not '" + std::string(format) + "'");
  return j;
}

}  // namespace

std::string save_snapshot(const ClockModelAR& m) {
  json j;
  j["format"] = "avtrack-ar v1";
  j["sn_id"] = m.sn_id;
  j["order"] = {m.order.p, m.order.d, m.order.q};
  j["ar"] = m.ar;
  j["ma"] = m.ma;
  j["mean"] = m.mean;
  j["noise_var"] = m.noise_var;
  j["window"] = {m.t_start, m.t_end};
  j["tau"] = m.tau;
  j["meas_var"] = m.meas_var;
  j["offset_noise_var"] = m.offset_noise_var;
  j["kf1"] = {{"initialised", m.kf1.initialised},
              {"t", m.kf1.t},
              {"last_measurement", m.kf1.last_measurement},
              {"x", vec(m.kf1.x)},
              {"P", mat(m.kf1.P)}};
  return j.dump(1);
}

std::string save_snapshot(const lstm::ClockModelLSTM& m) {
  const auto& c = m.config;
  json j;
  j["format"] = "avtrack-lstm v1";
  j["sn_id"] = m.sn_id;
  j["config"] = {{"hidden_units", c.hidden_units}, {"fc1_units", c.fc1_units},
                 {"dropout_rate", c.dropout_rate}, {"learning_rate", c.learning_rate},
                 {"epochs", c.epochs},             {"patience", c.patience},
                 {"window_len", c.window_len},     {"batch_size", c.batch_size},
                 {"seed", c.seed}};
  j["normalization"] = {m.norm_mean, m.norm_std};
  j["window"] = {m.t_start, m.t_end};
  j["tau"] = m.tau;
  j["theta"] = vec(m.theta);
  return j.dump(1);
}

ClockModelAR load_ar_snapshot(std::string_view text) {
  const json j = parse(text, "avtrack-ar v1");
  try {
    ClockModelAR m;
    m.sn_id = j.at("sn_id").get<int>();
    const auto o = j.at("order").get<std::vector<int>>();
    if (o.size() != 3) throw std::invalid_argument("order needs three entries");
    m.order = {o[0], o[1], o[2]};
    m.ar = j.at("ar").get<std::vector<double>>();
    m.ma = j.at("ma").get<std::vector<double>>();
    if (static_cast<int>(m.ar.size()) != m.order.p || static_cast<int>(m.ma.size()) != m.order.q)
      throw std::invalid_argument("coefficient counts do not match the order");
    m.mean = j.at("mean").get<double>();
    m.noise_var = j.at("noise_var").get<double>();
    const auto w = j.at("window").get<std::vector<double>>();
    m.t_start = w.at(0);
    m.t_end = w.at(1);
    m.tau = j.at("tau").get<double>();
    m.meas_var = j.at("meas_var").get<double>();
    m.offset_noise_var = j.value("offset_noise_var", 0.0);
    const json& k = j.at("kf1");
    m.kf1.initialised = k.at("initialised").get<bool>();
    m.kf1.t = k.at("t").get<double>();
    m.kf1.last_measurement = k.at("last_measurement").get<double>();
    m.kf1.x = vec(k.at("x"));
    m.kf1.P = mat(k.at("P"));
    return m;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed AR snapshot: ") + e.what());
  }
}

lstm::ClockModelLSTM load_lstm_snapshot(std::string_view text) {
  const json j = parse(text, "avtrack-lstm v1");
  try {
    lstm::ClockModelLSTM m;
    const json& c = j.at("config");
    m.config.hidden_units = c.at("hidden_units").get<int>();
    m.config.fc1_units = c.at("fc1_units").get<int>();
    m.config.dropout_rate = c.at("dropout_rate").get<double>();
    m.config.learning_rate = c.at("learning_rate").get<double>();
    m.config.epochs = c.at("epochs").get<int>();
    m.config.patience = c.at("patience").get<int>();
    m.config.window_len = c.at("window_len").get<int>();
    m.config.batch_size = c.at("batch_size").get<int>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.validate();
    m.sn_id = j.at("sn_id").get<int>();
    const auto nm = j.at("normalization").get<std::vector<double>>();
    m.norm_mean = nm.at(0);
    m.norm_std = nm.at(1);
    if (!(m.norm_std > 0.0)) throw std::invalid_argument("normalization std must be > 0");
    const auto w = j.at("window").get<std::vector<double>>();
    m.t_start = w.at(0);
    m.t_end = w.at(1);
    m.tau = j.at("tau").get<double>();
    m.theta = vec(j.at("theta"));
    if (static_cast<std::size_t>(m.theta.size()) != lstm::parameter_count(m.config))
      throw std::invalid_argument("parameter count does not match the config");
    return m;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed LSTM snapshot: ") + e.what());
  }
}

}  // namespace avtrack::clocksync
