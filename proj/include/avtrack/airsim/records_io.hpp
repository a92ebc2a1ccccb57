#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "avtrack/records.hpp"

namespace avtrack::airsim {

// Record lines:
//   server_time_s av_id trusted n {rx_id lat lon alt toa_s kind}*n
// Truth lines:
//   av_id index time_s lat lon alt
// Both files start with a versioned '#' header; other '#' lines and blank lines are skipped.

inline constexpr std::string_view kRecordsHeader = "# avtrack-records v1";
inline constexpr std::string_view kTruthHeader = "# avtrack-truth v1";

std::string format_records(const std::vector<BroadcastRecord>& records);
std::string format_truth(const std::vector<TruthRow>& truth);

/// Throws text::ParseError with the offending line number. Records are
/// returned in file order.
std::vector<BroadcastRecord> parse_records(std::string_view text);
std::vector<TruthRow> parse_truth(std::string_view text);

}  // namespace avtrack::airsim
