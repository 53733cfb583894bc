#include <doctest.h>

#include <cmath>

#include "quasitop/momentum.hpp"
#include "quasitop/spectra.hpp"
#include "quasitop/states.hpp"

using namespace quasitop;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("uniform and single-site states") {
  Eigen::VectorXcd u = Eigen::VectorXcd::Constant(13, 1 / std::sqrt(13.0));
  auto d = state_momentum(u);
  CHECK(d.n[0] == doctest::Approx(1.0));
  for (int j = 1; j < 13; ++j) CHECK(std::abs(d.n[j]) < 1e-14);
  Eigen::VectorXcd s = Eigen::VectorXcd::Zero(13);
  s[4] = 1;
  d = state_momentum(s);
  for (double x : d.n) CHECK(x == doctest::Approx(1 / 13.0));
  CHECK(d.k[1] == doctest::Approx(2 * kPi / 13));
}

TEST_CASE("direct DFT reference") {
  Eigen::VectorXcd v(5);
  v << 0.1, std::complex<double>(0.2, -0.3), 0.5, -0.4, std::complex<double>(0, 0.6);
  v.normalize();
  auto d = state_momentum(v);
  for (int j = 0; j < 5; ++j) {
    std::complex<double> a = 0;
    for (int n = 0; n < 5; ++n) a += v[n] * std::polar(1.0, -2 * kPi * j * n / 5.0);
    CHECK(d.n[j] == doctest::Approx(std::norm(a) / 5));
  }
}

TEST_CASE("real parity-symmetric state is k-symmetric") {
  auto s = band_edge_state(make_flux(8, 13), 1.0, 0.0, 4, Side::Lower);
  REQUIRE(s.amplitudes.imag().cwiseAbs().maxCoeff() == 0.0);
  auto d = state_momentum(s.amplitudes);
  for (int j = 1; j < 13; ++j) CHECK(std::abs(d.n[j] - d.n[13 - j]) < 1e-10);
}

TEST_CASE("sea sum rule and symmetry") {
  auto f = make_flux(34, 55);
  for (int r : {gap_for_chern(f, 1), gap_for_chern(f, 4), half_filling_gap(f)}) {
    auto d = sea_momentum(f, 1.0, r, {4, 8});
    double sum = 0;
    for (double x : d.n) {
      CHECK(x >= 0);
      sum += x;
    }
    CHECK(std::abs(sum - r) < 1e-8);
    double rho = 0;
    for (double x : d.density) rho += x;
    CHECK(std::abs(rho - sum) < 1e-8);
    for (int j = 1; j < 55; ++j) CHECK(std::abs(d.n[j] - d.n[55 - j]) < 1e-8);
  }
}

TEST_CASE("large lambda sea flattens as 1/lambda") {
  // r = 4 with phi in {0, 1/3, 2/3}: no sample puts a degenerate mirror pair
  // across the Fermi level, where the occupied state is a bonding combination
  auto f = make_flux(8, 13);
  auto dev = [&](double lam) {
    auto d = sea_momentum(f, lam, 4, {3, 8});
    double m = 0;
    for (double x : d.n) m = std::max(m, std::abs(x - 4 / 13.0));
    return m;
  };
  double d100 = dev(100.0), d1000 = dev(1000.0);
  CHECK(d100 < 0.1);
  CHECK(d1000 < 0.01);
  CHECK(d1000 < 0.2 * d100);
}

TEST_CASE("sea serial equals parallel") {
  auto f = make_flux(8, 13);
  auto a = sea_momentum(f, 1.0, 5, {4, 8}, Exec::Serial);
  auto b = sea_momentum(f, 1.0, 5, {4, 8}, Exec::Parallel);
  CHECK(a.n == b.n);
}

TEST_CASE("gap lookup by Chern label") {
  auto f = make_flux(34, 55);
  CHECK(gap_for_chern(f, 1) == 34);
  CHECK(gap_for_chern(f, -1) == 21);
  CHECK(half_filling_gap(f) == 27);
  CHECK_THROWS_AS(gap_for_chern(make_flux(1, 3), 5), std::invalid_argument);
}

TEST_CASE("wiggle metric on synthetic input") {
  const int q = 89;
  std::vector<double> mono(q), full(q), half(q);
  for (int j = 0; j < q; ++j) {
    double k = 2 * kPi * j / q;
    mono[j] = 1 + std::cos(k);
    full[j] = 1 + 0.5 * std::cos(4 * k);
    // four periods inside 0 < k < pi, even in k
    half[j] = 1 - 0.5 * std::cos(8 * k);
  }
  CHECK(wiggle_metric(mono).count == 0);
  CHECK(wiggle_metric(half).count == 4);
  // four maxima over the whole zone: one strictly inside each half, the other on k = 0 and near k = pi
  CHECK(wiggle_metric(full).count == 1);
  CHECK(wiggle_metric(full).total_variation == doctest::Approx(8.0).epsilon(0.02));
}

TEST_CASE("C = 4 sea has more variation than C = 1") {
  auto f = make_flux(34, 55);
  auto c1 = wiggle_metric(sea_momentum(f, 1.0, gap_for_chern(f, 1)));
  auto c4 = wiggle_metric(sea_momentum(f, 1.0, gap_for_chern(f, 4)));
  CHECK(c4.total_variation > c1.total_variation);
}
