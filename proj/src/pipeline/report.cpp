#include "avtrack/pipeline/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>

#include "avtrack/clocksync/stats.hpp"
#include "avtrack/text_io.hpp"

namespace avtrack::pipeline {

using text::format_double;

double percentile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double rank = std::ceil(q * static_cast<double>(sorted.size()));
  const auto idx = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(sorted.size()))) - 1;
  return sorted[idx];
}

ErrorSummary summarize(const std::string& label, std::vector<double> errors) {
  ErrorSummary s;
  s.label = label;
  s.count = errors.size();
  if (errors.empty()) return s;
  std::sort(errors.begin(), errors.end());
  s.mean = std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
  const std::size_t n = errors.size();
  s.median = n % 2 ? errors[n / 2] : 0.5 * (errors[n / 2 - 1] + errors[n / 2]);
  s.p80 = percentile(errors, 0.8);
  return s;
}

namespace {

std::vector<ErrorSummary> mode_rows(const std::string& mode, bool kf2, std::vector<double> kf,
                                    std::vector<double> raw) {
  if (!kf2) return {summarize(mode + " without KF2", std::move(raw))};
  return {summarize(mode, std::move(kf)), summarize(mode + " without KF2", std::move(raw))};
}

}  // namespace

std::vector<ErrorSummary> summarize(const RunReport& report) {
  std::vector<double> kf, raw;
  for (const auto& f : report.fixes) {
    kf.push_back(f.kf_error);
    raw.push_back(f.raw_error);
  }
  return mode_rows(std::string(to_string(report.mode)), report.kf2, std::move(kf), std::move(raw));
}

std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> errors) {
  std::sort(errors.begin(), errors.end());
  std::vector<std::pair<double, double>> out;
  const auto n = static_cast<double>(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) out.emplace_back(errors[i], static_cast<double>(i + 1) / n);
  return out;
}

std::string format_fixes(const RunReport& report) {
  std::string out = "# avtrack-fixes v1\n";
  out += "# mode " + std::string(to_string(report.mode)) + (report.kf2 ? " kf2\n" : " raw\n");
  out += "av_id\tt\tn\ttruth_x\ttruth_y\ttruth_z\traw_x\traw_y\traw_z\tkf_x\tkf_y\tkf_z\traw_error\tkf_error\n";
  for (const auto& f : report.fixes) {
    out += std::to_string(f.av_id) + '\t' + format_double(f.t) + '\t' + std::to_string(f.n_receivers);
    for (const auto* p : {&f.truth, &f.raw, &f.kf})
      out += '\t' + format_double(p->x) + '\t' + format_double(p->y) + '\t' + format_double(p->z);
    out += '\t' + format_double(f.raw_error) + '\t' + format_double(f.kf_error) + '\n';
  }
  return out;
}

std::string format_cdf(const RunReport& report) {
  std::vector<double> errors;
  for (const auto& f : report.fixes) errors.push_back(report.kf2 ? f.kf_error : f.raw_error);
  std::string out = "# avtrack-cdf v1\nerror_m\tprobability\n";
  for (const auto& [e, p] : empirical_cdf(errors)) out += format_double(e) + '\t' + format_double(p) + '\n';
  return out;
}

std::string format_summary(const std::vector<ErrorSummary>& rows) {
  std::string out = "# avtrack-summary v1\nmode\tcount\tmean_m\tmedian_m\tp80_m\n";
  for (const auto& r : rows)
    out += r.label + '\t' + std::to_string(r.count) + '\t' + format_double(r.mean) + '\t' +
           format_double(r.median) + '\t' + format_double(r.p80) + '\n';
  return out;
}

std::string format_sync(const RunReport& report) {
  std::string out = "# avtrack-sync v1\n";
  out += "sn_id\tsamples\tquarantined\tresiduals\tresidual_mean_ns\tresidual_std_ns\tskewness\texcess_kurtosis\tunimodal\n";
  for (const auto& [id, d] : report.sync) {
    out += std::to_string(id) + '\t' + std::to_string(d.samples.size()) + '\t' + std::to_string(d.quarantined) +
           '\t' + std::to_string(d.residuals.size());
    if (d.residuals.size() >= 100) {
      const auto nc = clocksync::normality_check(d.residuals);
      out += '\t' + text::format_fixed(clocksync::mean(d.residuals) * 1e9, 3) + '\t' +
             text::format_fixed(std::sqrt(clocksync::variance(d.residuals)) * 1e9, 3) + '\t' +
             text::format_fixed(nc.skewness, 4) + '\t' + text::format_fixed(nc.excess_kurtosis, 4) + '\t' +
             (nc.unimodal ? "yes" : "no");
    } else {
      out += "\t-\t-\t-\t-\t-";
    }
    out += '\n';
  }
  out += "\n# retrain log\nsn_id\tt\tsamples\ttrained\tdetail\n";
  for (const auto& [id, d] : report.sync)
    for (const auto& e : d.retrains)
      out += std::to_string(id) + '\t' + format_double(e.t) + '\t' + std::to_string(e.samples) + '\t' +
             (e.trained ? "1" : "0") + '\t' + e.detail + '\n';
  return out;
}

std::string format_offsets(const RunReport& report) {
  std::string out = "# avtrack-offsets v1\nsn_id\tt\teta_ns\tpredicted_ns\n";
  for (const auto& [id, d] : report.sync) {
    for (std::size_t i = 0; i < d.samples.size(); ++i) {
      const double p = i < d.predicted.size() ? d.predicted[i] : std::nan("");
      out += std::to_string(id) + '\t' + text::format_double(d.samples[i].t) + '\t' +
             text::format_fixed(d.samples[i].eta * 1e9, 3) + '\t' +
             (std::isnan(p) ? std::string("nan") : text::format_fixed(p * 1e9, 3)) + '\n';
    }
  }
  return out;
}

void emit_report(const RunReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + out_dir + "': " + ec.message());
  const fs::path dir(out_dir);
  text::write_file((dir / "fixes.tsv").string(), format_fixes(report));
  text::write_file((dir / "summary.tsv").string(), format_summary(summarize(report)));
  text::write_file((dir / "sync.tsv").string(), format_sync(report));
  text::write_file((dir / "offsets.tsv").string(), format_offsets(report));
  const fs::path cdf = dir / "cdf.tsv";
  if (!report.fixes.empty())
    text::write_file(cdf.string(), format_cdf(report));
  else
    fs::remove(cdf, ec);
}

std::vector<ErrorSummary> summarize_fixes_file(const std::string& path) {
  const std::string body = text::read_file(path);
  std::vector<double> raw, kf;
  std::size_t line_no = 0, pos = 0;
  bool header_row = false;
  std::string mode = "unknown";
  bool kf2 = true;
  while (pos < body.size()) {
    const std::size_t nl = body.find('\n', pos);
    const std::string_view line(body.data() + pos, (nl == std::string::npos ? body.size() : nl) - pos);
    pos = nl == std::string::npos ? body.size() : nl + 1;
    ++line_no;
    if (line.starts_with("# mode ")) {
      const auto f = text::split_ws(line.substr(7));
      if (f.size() != 2) throw text::ParseError(line_no, "mode line needs a mode and kf2|raw");
      mode = std::string(f[0]);
      kf2 = f[1] == "kf2";
      continue;
    }
    if (line.empty() || line.front() == '#') continue;
    if (!header_row) {
      header_row = true;
      continue;
    }
    const auto f = text::split_ws(line);
    if (f.size() != 14) throw text::ParseError(line_no, "fixes row needs 14 columns");
    raw.push_back(text::parse_double(f[12], line_no));
    kf.push_back(text::parse_double(f[13], line_no));
  }
  return mode_rows(mode, kf2, std::move(kf), std::move(raw));
}

}  // namespace avtrack::pipeline
