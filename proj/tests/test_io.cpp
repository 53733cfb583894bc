#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "quasitop/io/format.hpp"
#include "quasitop/io/svg.hpp"

using namespace quasitop::io;

TEST_CASE("12 significant digits") {
  CHECK(fmt(1.0) == "1");
  CHECK(fmt(0.1) == "0.1");
  CHECK(fmt(1.0 / 3.0) == "0.333333333333");
  CHECK(fmt(-0.0) == "0");
  CHECK(fmt(1e-20) == "1e-20");
  CHECK(fmt(123456789012345.0) == "1.23456789012e+14");
  CHECK(fmt(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(fmt(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(round12(1.0 / 3.0) == 0.333333333333);
}

TEST_CASE("FNV-1a reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("RFC 4180 quoting") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("x\ny") == "\"x\ny\"");
}

TEST_CASE("CSV writer layout") {
  auto meta = make_metadata("spectrum", "{\"q\":13}");
  CHECK(meta.config_hash == hex64(fnv1a64("{\"q\":13}")));
  std::ostringstream os;
  CsvWriter w(os, meta, {"a", "b"});
  w.cell(0.5).cell(3);
  w.end_row();
  w.cell("x,y").empty();
  w.end_row();
  std::string want = "# quasitop 1.0.0 command=spectrum config_hash=" + meta.config_hash +
                     "\r\n# config={\"q\":13}\r\na,b\r\n0.5,3\r\n\"x,y\",\r\n";
  CHECK(os.str() == want);
}

TEST_CASE("SVG is deterministic and carries metadata") {
  auto meta = make_metadata("momentum", "{}");
  Plot p;
  p.title = "n(k)";
  p.series.push_back({"a", {0, 1, 2}, {1, 0.5, 2}, Mark::Line, ""});
  p.series.push_back({"b", {0, 1, 2}, {1e-3, 1e-2, 1}, Mark::Scatter, ""});
  auto s1 = render_svg(p, meta, std::nullopt);
  auto s2 = render_svg(p, meta, std::nullopt);
  CHECK(s1 == s2);
  CHECK(s1.find("<svg") != std::string::npos);
  CHECK(s1.find(meta.config_hash) != std::string::npos);
  CHECK(s1.find("1.0.0") != std::string::npos);
  auto s3 = render_svg(p, meta, std::string("2024-01-01T00:00:00Z"));
  CHECK(s3.find("2024-01-01T00:00:00Z") != std::string::npos);
  CHECK(s1.find("2024-01-01") == std::string::npos);
  p.log_y = true;
  CHECK(render_svg(p, meta, std::nullopt).find("<svg") != std::string::npos);
}
