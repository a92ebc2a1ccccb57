#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "avtrack/airsim/dataset.hpp"
#include "avtrack/airsim/records_io.hpp"
#include "avtrack/airsim/scenario.hpp"
#include "avtrack/airsim/scenario_io.hpp"
#include "avtrack/clocksync/snapshot.hpp"
#include "avtrack/pipeline/ingest.hpp"
#include "avtrack/text_io.hpp"

using namespace avtrack;

TEST_CASE("format_double round-trips exactly") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::pow(10.0, static_cast<int>(rng() % 20) - 10);
    CHECK(text::parse_double(text::format_double(v)) == v);
  }
  CHECK(text::format_double(0.5) == "0.5");
  CHECK(text::format_fixed(1.23456, 2) == "1.23");
  CHECK_THROWS_AS(text::parse_double("abc", 7), text::ParseError);
  CHECK_THROWS_AS(text::parse_double("inf"), text::ParseError);
  CHECK_THROWS_AS(text::parse_int("1.5"), text::ParseError);
  CHECK(text::parse_int("-42") == -42);
  CHECK(text::parse_uint("18446744073709551615") == std::numeric_limits<std::uint64_t>::max());
  try {
    text::parse_double("x", 12);
    FAIL("expected a parse error");
  } catch (const text::ParseError& e) {
    CHECK(e.line() == 12);
  }
  const auto f = text::split_ws("  a\tbb   c ");
  REQUIRE(f.size() == 3);
  CHECK(f[1] == "bb");
  CHECK(text::trim("  x y \n") == "x y");
}

TEST_CASE("records and truth round-trip") {
  const auto d = airsim::simulate_dataset(airsim::make_preset("default", 4));
  REQUIRE(d.records.size() > 1000);
  const std::string rec_text = airsim::format_records(d.records);
  CHECK(rec_text.rfind(std::string(airsim::kRecordsHeader), 0) == 0);
  CHECK(airsim::parse_records(rec_text) == d.records);
  const std::string truth_text = airsim::format_truth(d.truth);
  CHECK(airsim::parse_truth(truth_text) == d.truth);
  CHECK(pipeline::ingest_text(rec_text).records == d.records);
  CHECK(pipeline::ingest_text(rec_text).out_of_order == 0);
}

TEST_CASE("record parsing errors carry the line number") {
  const std::string head = std::string(airsim::kRecordsHeader) + "\n";
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      airsim::parse_records(text);
    } catch (const text::ParseError& e) {
      return e.line();
    }
    return 0;
  };
  const std::string good = "1.5 7 1 1 3 50 4 100 1.25 GSN\n";
  CHECK(airsim::parse_records(head + good).size() == 1);
  CHECK(line_of(head + good + "2.5 7 1 2 3 50 4 100 1.25 GSN\n") == 3);
  CHECK(line_of(head + "\n# note\n" + "2.5 7 2 1 3 50 4 100 1.25 GSN\n") == 4);
  CHECK(line_of(head + "2.5 7 1 1 3 50 4 100 1.25 XX\n") == 2);
  CHECK(line_of(head + "2.5 7 1 1 3 95 4 100 1.25 SN\n") == 2);
  CHECK(line_of(good) == 1);
  CHECK(line_of("# avtrack-records v9\n" + good) == 1);
}

TEST_CASE("ingest: empty input and out-of-order lines") {
  CHECK(pipeline::ingest_text("").records.empty());
  CHECK(pipeline::ingest_text(std::string(airsim::kRecordsHeader) + "\n").records.empty());
  const std::string text = std::string(airsim::kRecordsHeader) +
                           "\n5 1 1 1 3 50 4 100 1.25 GSN\n"
                           "3 2 1 1 3 50 4 100 1.5 SN\n"
                           "5 3 0 1 3 50 4 100 2 GSN\n";
  const auto r = pipeline::ingest_text(text);
  CHECK(r.out_of_order == 1);
  REQUIRE(r.records.size() == 3);
  CHECK(r.records[0].av_id == 2);
  CHECK(r.records[1].av_id == 1);
  CHECK(r.records[2].av_id == 3);
  CHECK(r.records[0].receptions[0].kind == ReceiverKind::SN);
}

TEST_CASE("scenario files round-trip") {
  for (const auto& name : airsim::preset_names()) {
    const auto s = airsim::make_preset(name, 3);
    const std::string text = airsim::format_scenario(s);
    const auto back = airsim::parse_scenario(text);
    CHECK(airsim::format_scenario(back) == text);
    CHECK(airsim::format_records(airsim::simulate_dataset(back).records) ==
          airsim::format_records(airsim::simulate_dataset(s).records));
  }
}

TEST_CASE("scenario parse errors") {
  const std::string head = std::string(airsim::kScenarioHeader) + "\n";
  CHECK_THROWS_AS(airsim::parse_scenario("duration = 10\n"), text::ParseError);
  CHECK_THROWS_AS(airsim::parse_scenario(head + "bogus = 1\n"), text::ParseError);
  CHECK_THROWS_AS(airsim::parse_scenario(head + "[planet]\n"), text::ParseError);
  CHECK_THROWS_AS(airsim::parse_scenario(head + "duration 10\n"), text::ParseError);
  // Syntactically fine, but no receivers.
  CHECK_THROWS_AS(airsim::parse_scenario(head + "duration = 10\n"), std::invalid_argument);
}

TEST_CASE("AR snapshot round-trip") {
  clocksync::ClockModelAR m;
  m.order = {2, 1, 1};
  m.ar = {0.3, -0.1};
  m.ma = {0.05};
  m.mean = 1.0 / 3.0;
  m.noise_var = 1.7e-18;
  m.t_start = 10.0;
  m.t_end = 1210.0;
  m.sn_id = 12;
  m.tau = 0.987654321;
  m.meas_var = 2.2e-16;
  m.offset_noise_var = 1e-19;
  m.kf1.x = Eigen::Vector3d(1e-6, 2e-9, -3e-10);
  m.kf1.P = Eigen::Matrix3d::Identity() * 1e-17;
  m.kf1.P(0, 1) = m.kf1.P(1, 0) = 3e-19;
  m.kf1.t = 1210.0;
  m.kf1.last_measurement = 1.1e-6;
  m.kf1.initialised = true;

  const std::string js = clocksync::save_snapshot(m);
  const auto back = clocksync::load_ar_snapshot(js);
  CHECK(back.order == m.order);
  CHECK(back.ar == m.ar);
  CHECK(back.ma == m.ma);
  CHECK(back.mean == m.mean);
  CHECK(back.noise_var == m.noise_var);
  CHECK(back.tau == m.tau);
  CHECK(back.kf1.x == m.kf1.x);
  CHECK(back.kf1.P == m.kf1.P);
  CHECK(back.kf1.initialised);
  CHECK(clocksync::save_snapshot(back) == js);

  CHECK_THROWS_AS(clocksync::load_ar_snapshot("{"), std::invalid_argument);
  CHECK_THROWS_AS(clocksync::load_lstm_snapshot(js), std::invalid_argument);
}

TEST_CASE("LSTM snapshot round-trip") {
  lstm::LstmConfig c;
  c.seed = 99;
  auto m = lstm::build(c);
  m.norm_mean = 1.5e-9;
  m.norm_std = 3.25e-9;
  m.tau = 1.1;
  m.sn_id = 14;
  const std::string js = clocksync::save_snapshot(m);
  const auto back = clocksync::load_lstm_snapshot(js);
  CHECK(back.theta == m.theta);
  CHECK(back.norm_mean == m.norm_mean);
  CHECK(back.norm_std == m.norm_std);
  CHECK(back.config.hidden_units == c.hidden_units);
  CHECK(back.config.seed == c.seed);
  CHECK(clocksync::save_snapshot(back) == js);
  CHECK_THROWS_AS(clocksync::load_ar_snapshot(js), std::invalid_argument);
}
