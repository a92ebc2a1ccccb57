#include "avtrack/pipeline/ingest.hpp"

#include <algorithm>

#include "avtrack/airsim/records_io.hpp"
#include "avtrack/text_io.hpp"

namespace avtrack::pipeline {

IngestResult ingest_text(std::string_view text) {
  IngestResult r;
  r.records = airsim::parse_records(text);
  for (std::size_t i = 1; i < r.records.size(); ++i)
    if (r.records[i].server_time < r.records[i - 1].server_time) ++r.out_of_order;
  if (r.out_of_order > 0)
    std::stable_sort(r.records.begin(), r.records.end(),
                     [](const BroadcastRecord& a, const BroadcastRecord& b) { return a.server_time < b.server_time; });
  return r;
}

IngestResult ingest(const std::string& path) { return ingest_text(text::read_file(path)); }

}  // namespace avtrack::pipeline
