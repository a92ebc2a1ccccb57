#pragma once

#include <string>
#include <vector>

#include "avtrack/pipeline/run.hpp"

namespace avtrack::pipeline {

struct ErrorSummary {
  std::string label;
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double p80 = 0.0;
};

ErrorSummary summarize(const std::string& label, std::vector<double> errors);
/// Nearest-rank percentile of already sorted data, q in [0, 1].
double percentile(const std::vector<double>& sorted, double q);

/// Rows "<mode>" (KF2 output) and "<mode> without KF2" (raw MLAT).
std::vector<ErrorSummary> summarize(const RunReport& report);

/// Sorted errors with cumulative probabilities i / n, ending at 1.
std::vector<std::pair<double, double>> empirical_cdf(std::vector<double> errors);

std::string format_fixes(const RunReport& report);
std::string format_cdf(const RunReport& report);
std::string format_summary(const std::vector<ErrorSummary>& rows);
std::string format_sync(const RunReport& report);
/// Every measured offset with the prediction made just before it arrived.
std::string format_offsets(const RunReport& report);

/// Writes fixes.tsv, summary.tsv, sync.tsv, offsets.tsv and, when there are fixes, cdf.tsv
/// into `out_dir` (created if needed). Throws std::runtime_error on I/O failure.
void emit_report(const RunReport& report, const std::string& out_dir);

/// Rebuilds summary rows from a fixes.tsv written by emit_report.
std::vector<ErrorSummary> summarize_fixes_file(const std::string& path);

}  // namespace avtrack::pipeline
