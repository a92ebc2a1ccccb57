#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "avtrack/airsim/dataset.hpp"
#include "avtrack/airsim/records_io.hpp"
#include "avtrack/airsim/scenario.hpp"
#include "avtrack/airsim/scenario_io.hpp"
#include "avtrack/pipeline/config_io.hpp"
#include "avtrack/pipeline/ingest.hpp"
#include "avtrack/pipeline/report.hpp"
#include "avtrack/pipeline/sweep.hpp"
#include "avtrack/text_io.hpp"

namespace fs = std::filesystem;
using namespace avtrack;

namespace {

struct Common {
  std::string config;
  std::string mode;
  std::uint64_t seed = 1;
  bool seed_set = false;
  std::string out;
  std::vector<int> targets;
};

airsim::Scenario load_scenario(const std::string& preset, const std::string& file, std::uint64_t seed) {
  if (!file.empty()) return airsim::parse_scenario(text::read_file(file));
  return airsim::make_preset(preset, seed);
}

pipeline::RunConfig load_run_config(const Common& c, const std::string& config_path) {
  pipeline::RunConfig cfg;
  if (!config_path.empty()) cfg = pipeline::parse_run_config(text::read_file(config_path));
  if (!c.mode.empty()) {
    auto m = pipeline::parse_sync_mode(c.mode);
    if (!m) throw std::invalid_argument("unknown mode '" + c.mode + "'");
    cfg.mode = *m;
  }
  if (c.seed_set) cfg.seed = c.seed;
  if (!c.targets.empty()) cfg.classify.targets = c.targets;
  cfg.validate();
  return cfg;
}

void print_summary(const std::vector<pipeline::ErrorSummary>& rows) {
  std::cout << pipeline::format_summary(rows);
}

std::vector<pipeline::SyncMode> parse_modes(const std::vector<std::string>& names) {
  if (names.empty()) return pipeline::all_modes();
  std::vector<pipeline::SyncMode> out;
  for (const auto& n : names) {
    auto m = pipeline::parse_sync_mode(n);
    if (!m) throw std::invalid_argument("unknown mode '" + n + "'");
    out.push_back(*m);
  }
  return out;
}

int cmd_simulate(const Common& c, const std::string& preset) {
  auto s = load_scenario(preset, c.config, c.seed);
  if (c.seed_set && !c.config.empty()) s.rng_seed = c.seed;
  s.validate();
  auto d = airsim::simulate_dataset(s);
  fs::create_directories(c.out);
  text::write_file((fs::path(c.out) / "records.txt").string(), airsim::format_records(d.records));
  text::write_file((fs::path(c.out) / "truth.txt").string(), airsim::format_truth(d.truth));
  text::write_file((fs::path(c.out) / "scenario.txt").string(), airsim::format_scenario(s));
  std::cout << d.records.size() << " records, " << d.truth.size() << " truth rows -> " << c.out
            << "\n";
  return 0;
}

int cmd_run(const Common& c, const std::string& data_dir, bool no_kf2) {
  auto cfg = load_run_config(c, c.config);
  if (no_kf2) cfg.use_kf2 = false;
  auto in = pipeline::ingest((fs::path(data_dir) / "records.txt").string());
  if (in.out_of_order) std::cerr << "warning: " << in.out_of_order << " out-of-order records reordered\n";
  auto truth = airsim::parse_truth(text::read_file((fs::path(data_dir) / "truth.txt").string()));
  auto report = pipeline::run(cfg, in.records, truth);
  if (!c.out.empty()) {
    pipeline::emit_report(report, c.out);
    text::write_file((fs::path(c.out) / "config.json").string(), pipeline::format_run_config(cfg));
  }
  print_summary(pipeline::summarize(report));
  return 0;
}

int cmd_sweep(const Common& c, const std::string& preset, const std::string& scenario_file,
              const std::vector<std::string>& mode_names, bool compositions) {
  auto base = load_run_config(c, c.config);
  auto s = load_scenario(preset, scenario_file, base.seed);
  auto modes = parse_modes(mode_names);
  auto sw = pipeline::sweep_modes(s, base, modes);

  std::vector<std::string> labels;
  std::vector<pipeline::RunReport> reports = sw.reports;
  for (const auto& k : sw.cases) labels.push_back(k.label);

  if (compositions) {
    std::vector<airsim::Dataset> data;
    data.push_back(airsim::simulate_dataset(airsim::with_composition(s, 1)));
    data.push_back(airsim::simulate_dataset(airsim::with_composition(s, 3)));
    std::vector<pipeline::SweepCase> cases;
    for (auto m : modes) {
      if (m == pipeline::SyncMode::Gsn) continue;
      for (int g = 0; g < 2; ++g) {
        pipeline::SweepCase k;
        k.label = std::string(pipeline::to_string(m)) + (g == 0 ? "-gsn1sn3" : "-gsn3sn1");
        k.config = base;
        k.config.mode = m;
        k.data = &data[static_cast<std::size_t>(g)];
        cases.push_back(std::move(k));
      }
    }
    auto extra = pipeline::run_cases(cases);
    for (std::size_t i = 0; i < cases.size(); ++i) {
      labels.push_back(cases[i].label);
      reports.push_back(std::move(extra[i]));
    }
  }

  std::vector<pipeline::ErrorSummary> rows;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    auto r = pipeline::summarize(reports[i]);
    for (auto& row : r) {
      auto suffix = row.label.substr(std::string(pipeline::to_string(reports[i].mode)).size());
      row.label = labels[i] + suffix;
      rows.push_back(row);
    }
    if (!c.out.empty()) pipeline::emit_report(reports[i], (fs::path(c.out) / labels[i]).string());
  }
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    text::write_file((fs::path(c.out) / "summary.tsv").string(), pipeline::format_summary(rows));
  }
  print_summary(rows);
  return 0;
}

int cmd_report(const Common& c) {
  auto rows = pipeline::summarize_fixes_file((fs::path(c.out) / "fixes.tsv").string());
  text::write_file((fs::path(c.out) / "summary.tsv").string(), pipeline::format_summary(rows));
  print_summary(rows);
  return 0;
}

void add_common(CLI::App* app, Common& c, bool with_mode) {
  if (with_mode) {
    app->add_option("--mode", c.mode, "Clock compensation: none, prior, arima, lstm or gsn");
    app->add_option("--targets", c.targets, "AV ids to localise (all others are trusted)")
        ->delimiter(',');
  }
  app->add_option_function<std::uint64_t>(
      "--seed", [&c](std::uint64_t s) { c.seed = s; c.seed_set = true; }, "Random seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aircraft localisation with crowdsourced, clock-compensated receivers"};
  app.require_subcommand(1);
  Common c;
  std::string preset = "default";
  std::string data_dir;
  std::string scenario_file;
  std::vector<std::string> modes;
  bool no_kf2 = false;
  bool compositions = false;

  auto* sim = app.add_subcommand("simulate", "Generate a synthetic dataset");
  add_common(sim, c, false);
  sim->add_option("--config", c.config, "Scenario file (overrides --preset)")->check(CLI::ExistingFile);
  sim->add_option("--preset", preset, "Built-in scenario")
      ->check(CLI::IsMember(airsim::preset_names()));
  sim->add_option("--out", c.out, "Output directory")->required();

  auto* run = app.add_subcommand("run", "Localise the targets of a dataset");
  add_common(run, c, true);
  run->add_option("--config", c.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
  run->add_option("--data", data_dir, "Directory with records.txt and truth.txt")
      ->required()
      ->check(CLI::ExistingDirectory);
  run->add_option("--out", c.out, "Report directory");
  run->add_flag("--no-kf2", no_kf2, "Report raw MLAT fixes only");

  auto* sweep = app.add_subcommand("sweep", "Run several modes on one scenario");
  add_common(sweep, c, false);
  sweep->add_option("--targets", c.targets, "AV ids to localise")->delimiter(',');
  sweep->add_option("--config", c.config, "Run configuration (JSON)")->check(CLI::ExistingFile);
  sweep->add_option("--preset", preset, "Built-in scenario")
      ->check(CLI::IsMember(airsim::preset_names()));
  sweep->add_option("--scenario", scenario_file, "Scenario file (overrides --preset)")
      ->check(CLI::ExistingFile);
  sweep->add_option("--mode", modes, "Modes to run (default: all)")->delimiter(',');
  sweep->add_flag("--compositions", compositions, "Also run the 1-GSN and 3-GSN variants");
  sweep->add_option("--out", c.out, "Output directory");

  auto* report = app.add_subcommand("report", "Recompute summary.tsv from fixes.tsv");
  report->add_option("--out", c.out, "Report directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*sim) return cmd_simulate(c, preset);
    if (*run) return cmd_run(c, data_dir, no_kf2);
    if (*sweep) return cmd_sweep(c, preset, scenario_file, modes, compositions);
    if (*report) return cmd_report(c);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
