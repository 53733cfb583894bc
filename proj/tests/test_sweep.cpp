#include <doctest.h>

#include <stdexcept>

#include "quasitop/kernels/sweep.hpp"

using namespace quasitop;

TEST_CASE("map keeps index order") {
  auto f = [](std::size_t i) { return static_cast<double>(i * i) * 0.5; };
  auto a = map_indexed(Exec::Serial, 1000, f);
  auto b = map_indexed(Exec::Parallel, 1000, f);
  CHECK(a == b);
  CHECK(a[10] == 50.0);
}

TEST_CASE("exceptions propagate from the parallel path") {
  auto bad = [](std::size_t i) -> int {
    if (i == 7) throw std::runtime_error("boom");
    return static_cast<int>(i);
  };
  CHECK_THROWS_AS(map_parallel(20, bad), std::runtime_error);
  CHECK_THROWS_AS(map_serial(20, bad), std::runtime_error);
}

TEST_CASE("thread count control") {
  set_threads(2);
  CHECK(max_threads() >= 1);
  set_threads(0);
}
