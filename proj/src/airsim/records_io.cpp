#include "avtrack/airsim/records_io.hpp"

#include <cmath>

#include "avtrack/text_io.hpp"

namespace avtrack::airsim {

namespace {

using text::format_double;
using text::ParseError;

template <typename F>
void for_each_line(std::string_view body, std::string_view header, F&& fn) {
  std::size_t line_no = 0;
  bool saw_header = false;
  while (!body.empty()) {
    const std::size_t nl = body.find('\n');
    std::string_view line = body.substr(0, nl);
    body = nl == std::string_view::npos ? std::string_view{} : body.substr(nl + 1);
    ++line_no;
    line = text::trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.starts_with("# avtrack-")) {
        if (line != header) throw ParseError(line_no, "unsupported header '" + std::string(line) + "'");
        saw_header = true;
      }
      continue;
    }
    if (!saw_header) throw ParseError(line_no, "missing header '" + std::string(header) + "'");
    fn(line, line_no);
  }
}

geo::GeodeticPosition parse_position(const std::vector<std::string_view>& f, std::size_t at,
                                     std::size_t line) {
  geo::GeodeticPosition p{text::parse_double(f[at], line), text::parse_double(f[at + 1], line),
                          text::parse_double(f[at + 2], line)};
  try {
    p.validate();
  } catch (const std::exception& e) {
    throw ParseError(line, e.what());
  }
  return p;
}

}  // namespace

std::string format_records(const std::vector<BroadcastRecord>& records) {
  std::string out(kRecordsHeader);
  out += '\n';
  for (const auto& r : records) {
    out += format_double(r.server_time);
    out += ' ' + std::to_string(r.av_id) + ' ' + (r.trusted ? "1" : "0") + ' ' +
           std::to_string(r.n());
    for (const auto& rx : r.receptions) {
      out += ' ' + std::to_string(rx.rx_id) + ' ' + format_double(rx.position.latitude) + ' ' +
             format_double(rx.position.longitude) + ' ' + format_double(rx.position.altitude) +
             ' ' + format_double(rx.toa) + ' ' + std::string(to_string(rx.kind));
    }
    out += '\n';
  }
  return out;
}

std::string format_truth(const std::vector<TruthRow>& truth) {
  std::string out(kTruthHeader);
  out += '\n';
  for (const auto& t : truth) {
    out += std::to_string(t.av_id) + ' ' + std::to_string(t.index) + ' ' + format_double(t.time) +
           ' ' + format_double(t.position.latitude) + ' ' + format_double(t.position.longitude) +
           ' ' + format_double(t.position.altitude) + '\n';
  }
  return out;
}

std::vector<BroadcastRecord> parse_records(std::string_view body) {
  std::vector<BroadcastRecord> out;
  for_each_line(body, kRecordsHeader, [&](std::string_view line, std::size_t no) {
    const auto f = text::split_ws(line);
    if (f.size() < 4) throw ParseError(no, "record needs at least 4 fields");
    BroadcastRecord r;
    r.server_time = text::parse_double(f[0], no);
    r.av_id = static_cast<int>(text::parse_int(f[1], no));
    if (f[2] != "0" && f[2] != "1") throw ParseError(no, "trusted flag must be 0 or 1");
    r.trusted = f[2] == "1";
    const auto n = text::parse_uint(f[3], no);
    if (n == 0) throw ParseError(no, "record without receptions");
    if (f.size() != 4 + 6 * n)
      throw ParseError(no, "receiver count " + std::to_string(n) + " does not match " +
                               std::to_string(f.size() - 4) + " trailing fields");
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t b = 4 + 6 * i;
      Reception rx;
      rx.rx_id = static_cast<int>(text::parse_int(f[b], no));
      rx.position = parse_position(f, b + 1, no);
      rx.toa = text::parse_double(f[b + 4], no);
      if (!std::isfinite(rx.toa)) throw ParseError(no, "non-finite ToA");
      const auto kind = parse_receiver_kind(f[b + 5]);
      if (!kind) throw ParseError(no, "unknown receiver kind '" + std::string(f[b + 5]) + "'");
      rx.kind = *kind;
      r.receptions.push_back(rx);
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<TruthRow> parse_truth(std::string_view body) {
  std::vector<TruthRow> out;
  for_each_line(body, kTruthHeader, [&](std::string_view line, std::size_t no) {
    const auto f = text::split_ws(line);
    if (f.size() != 6) throw ParseError(no, "truth row needs 6 fields");
    TruthRow t;
    t.av_id = static_cast<int>(text::parse_int(f[0], no));
    t.index = text::parse_int(f[1], no);
    t.time = text::parse_double(f[2], no);
    t.position = parse_position(f, 3, no);
    out.push_back(t);
  });
  return out;
}

}  // namespace avtrack::airsim
