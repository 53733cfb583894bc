/// Deterministic text output: 12 significant digits, RFC-4180 CSV, metadata header.
#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace quasitop::io {

inline constexpr const char* module_version = "1.0.0";

// Shortest of fixed/scientific at 12 significant digits; locale independent.
std::string fmt(double x);

std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t h);

// Quotes fields containing ',', '"', CR or LF.
std::string csv_field(std::string_view s);

struct Metadata {
  std::string command;
  std::string config_json;  // canonical dump
  std::string config_hash;  // hex fnv1a64 of config_json
};

Metadata make_metadata(std::string command, std::string canonical_config);

class CsvWriter {
 public:
  // Writes "# quasitop ..." comment lines, then the header row.
  CsvWriter(std::ostream& os, const Metadata& meta, const std::vector<std::string>& columns);

  CsvWriter& cell(double x);
  CsvWriter& cell(long long x);
  CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
  CsvWriter& cell(std::string_view s);
  CsvWriter& empty();
  void end_row();

 private:
  std::ostream& os_;
  std::size_t ncols_;
  std::size_t col_ = 0;
  void sep();
};

}  // namespace quasitop::io

namespace quasitop::io {

// x rounded to 12 significant digits, for JSON number emission.
double round12(double x);

}  // namespace quasitop::io
