#pragma once

#include <string>
#include <vector>

#include "avtrack/records.hpp"

namespace avtrack::pipeline {

struct IngestResult {
  std::vector<BroadcastRecord> records;  // ordered by server_time (stable)
  std::size_t out_of_order = 0;          // lines earlier than their predecessor
};

/// Parses a records file; malformed lines raise text::ParseError with the line number.
IngestResult ingest(const std::string& path);
IngestResult ingest_text(std::string_view text);

}  // namespace avtrack::pipeline
