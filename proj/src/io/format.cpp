#include "quasitop/io/format.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace quasitop::io {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // drops the sign of -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  if (res.ec != std::errc()) throw std::runtime_error("fmt: to_chars failed");
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Metadata make_metadata(std::string command, std::string canonical_config) {
  Metadata m;
  m.command = std::move(command);
  m.config_hash = hex64(fnv1a64(canonical_config));
  m.config_json = std::move(canonical_config);
  return m;
}

CsvWriter::CsvWriter(std::ostream& os, const Metadata& meta, const std::vector<std::string>& columns)
    : os_(os), ncols_(columns.size()) {
  os_ << "# quasitop " << module_version << " command=" << meta.command << " config_hash=" << meta.config_hash << "\r\n";
  os_ << "# config=" << meta.config_json << "\r\n";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) os_ << ',';
    os_ << csv_field(columns[i]);
  }
  os_ << "\r\n";
}

void CsvWriter::sep() {
  if (col_ >= ncols_) throw std::logic_error("CsvWriter: too many cells in row");
  if (col_) os_ << ',';
  ++col_;
}

CsvWriter& CsvWriter::cell(double x) {
  sep();
  os_ << fmt(x);
  return *this;
}

CsvWriter& CsvWriter::cell(long long x) {
  sep();
  os_ << x;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view s) {
  sep();
  os_ << csv_field(s);
  return *this;
}

CsvWriter& CsvWriter::empty() {
  sep();
  return *this;
}

void CsvWriter::end_row() {
  if (col_ != ncols_) throw std::logic_error("CsvWriter: short row");
  os_ << "\r\n";
  col_ = 0;
}

}  // namespace quasitop::io

namespace quasitop::io {

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  std::string s = fmt(x);
  double y = 0;
  std::from_chars(s.data(), s.data() + s.size(), y);
  return y;
}

}  // namespace quasitop::io
