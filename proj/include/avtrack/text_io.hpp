#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace avtrack::text {

/// Raised for malformed input; `line` is 1-based, 0 when unknown.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);
/// Fixed-point rendering with `digits` decimals (used for human-facing tables).
std::string format_fixed(double v, int digits);

double parse_double(std::string_view s, std::size_t line = 0);
std::int64_t parse_int(std::string_view s, std::size_t line = 0);
std::uint64_t parse_uint(std::string_view s, std::size_t line = 0);

std::vector<std::string_view> split_ws(std::string_view s);
std::string_view trim(std::string_view s);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace avtrack::text
