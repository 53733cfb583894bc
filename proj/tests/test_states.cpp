#include <doctest.h>

#include <cmath>

#include "quasitop/states.hpp"
#include "quasitop/topology.hpp"

using namespace quasitop;

namespace {
Eigen::VectorXcd from_real(const std::vector<double>& v) {
  Eigen::VectorXcd out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<int>(i)] = v[i];
  return out;
}
}  // namespace

TEST_CASE("local maxima and dimer partners") {
  Eigen::VectorXd a(8);
  a << 0.1, 0.9, 0.85, 0.2, 0.1, 0.5, 0.1, 0.05;
  auto lm = local_maxima(a);
  CHECK(lm == std::vector<int>{1, 5});
  auto pc = peak_candidates(a, 0.5);
  CHECK(pc == std::vector<int>{1, 2, 5});
}

TEST_CASE("synthetic doublet") {
  std::vector<double> v(40, 0.01);
  v[10] = 1.0;
  v[14] = 0.8;
  v[30] = 0.3;
  auto d = doublet_separation(from_real(v));
  CHECK(d.found);
  CHECK(d.separation == 4);
  v[14] = 0.3;
  CHECK_FALSE(doublet_separation(from_real(v)).found);
}

TEST_CASE("smooth window on a flat profile covers the chain") {
  auto w = smooth_windows(from_real(std::vector<double>(21, 0.2)), 0);
  REQUIRE(w.size() == 1);
  CHECK(w[0].length == 21);
}

TEST_CASE("smooth window length between two peaks") {
  std::vector<double> v(30, 0.0);
  for (int n = 0; n < 30; ++n) v[n] = 0.05 + 0.01 * std::abs(n - 12);
  v[5] = 1.0;
  v[14] = 0.9;
  auto w = smooth_windows(from_real(v), 4);
  bool nine = false;
  for (auto& x : w) nine |= (x.start == 5 && x.length == 9 && x.fib_minus_c);
  CHECK(nine);
}

TEST_CASE("parity of band-edge states at phi = 0") {
  auto f = make_flux(8, 13);
  for (int r = 1; r < 13; ++r)
    for (Side side : {Side::Lower, Side::Upper}) {
      auto s = band_edge_state(f, 1.0, 0.0, r, side);
      auto p = parity_check(s);
      CHECK(p.center != ParityCenter::None);
      CHECK(p.residual < 1e-8);
      CHECK(p.pair_mismatch < 1e-8);
    }
}

TEST_CASE("a generic phase breaks parity") {
  auto f = make_flux(8, 13);
  auto s = band_edge_state(f, 1.0, 0.013, 3, Side::Lower);
  CHECK(parity_check(s).center == ParityCenter::None);
}

TEST_CASE("doublet separation equals |C| at q = 55") {
  auto f = make_flux(34, 55);
  for (int r = 1; r < 55; ++r) {
    int c = std::abs(chern_diophantine(f, r));
    if (c != 1 && c != 2 && c != 4) continue;
    for (Side side : {Side::Lower, Side::Upper}) {
      auto s = band_edge_state(f, 1.0, doublet_phase(f, r), r, side);
      auto d = doublet_separation(s.amplitudes);
      CHECK(d.found);
      CHECK(d.separation == c);
    }
  }
  auto g = band_edge_state(f, 1.0, 0.5 / 55, 0, Side::Upper);
  CHECK_FALSE(doublet_separation(g.amplitudes).found);
}

TEST_CASE("peak hierarchy of the ground state") {
  auto f = make_flux(34, 55);
  auto g = band_edge_state(f, 1.0, 0.5 / 55, 0, Side::Upper);
  auto h = detect_peaks(g.amplitudes);
  REQUIRE(!h.groups.empty());
  CHECK(h.groups[h.central].ratio == doctest::Approx(1.0));
  bool fib = false;
  for (auto& grp : h.groups) fib |= grp.cls == OffsetClass::Fibonacci;
  CHECK(fib);
}

TEST_CASE("Chern-4 smooth window of length 9") {
  auto f = make_flux(34, 55);
  int hits = 0;
  for (int r = 1; r < 55; ++r) {
    if (std::abs(chern_diophantine(f, r)) != 4) continue;
    for (Side side : {Side::Lower, Side::Upper}) {
      auto s = band_edge_state(f, 1.0, doublet_phase(f, r), r, side);
      for (auto& w : smooth_windows(s.amplitudes, 4)) hits += w.length == 9;
    }
  }
  CHECK(hits > 0);
}

TEST_CASE("zeta converges over Fibonacci offsets") {
  auto f = golden_approximant(13);  // q = 233
  auto g = band_edge_state(f, 1.0, 0.5 / static_cast<double>(f.q), 0, Side::Upper);
  auto z = subpeak_ratio_zeta(g.amplitudes, f);
  double lo = 1, hi = 0;
  for (auto& e : z)
    if (e.offset == 8 || e.offset == 13 || e.offset == 21 || e.offset == 34) {
      lo = std::min(lo, e.ratio);
      hi = std::max(hi, e.ratio);
    }
  CHECK(hi - lo < 0.05);
}

TEST_CASE("zeta converges at large offsets for q = 987") {
  auto f = golden_approximant(16);
  auto g = band_edge_state(f, 1.0, 0.5 / static_cast<double>(f.q), 0, Side::Upper);
  double lo = 1, hi = 0;
  for (auto& e : subpeak_ratio_zeta(g.amplitudes, f))
    if (e.offset == 34 || e.offset == 55 || e.offset == 89) {
      lo = std::min(lo, e.ratio);
      hi = std::max(hi, e.ratio);
    }
  CHECK(hi > 0);
  CHECK(hi - lo < 0.05);
}

TEST_CASE("Chern-beat argmax at |C|") {
  auto f = make_flux(34, 55);
  for (double lam : {0.5, 1.0}) {
    auto g = band_edge_state(f, lam, 0.5 / 55, 0, Side::Upper);
    for (int r = 1; r < 55; ++r) {
      int c = std::abs(chern_diophantine(f, r));
      if (c != 1 && c != 2) continue;
      auto s = band_edge_state(f, lam, doublet_phase(f, r), r, Side::Lower);
      int best = 0;
      double bv = -1;
      for (int m = 0; m <= 6; ++m) {
        double o = chern_beat_overlap(s.amplitudes, g.amplitudes, f, m);
        CHECK(o >= -1e-12);
        CHECK(o <= 1 + 1e-12);
        if (o > bv) bv = o, best = m;
      }
      CHECK(best == c);
    }
  }
}

TEST_CASE("peak invariance across lambda for a Chern-1 edge") {
  auto f = make_flux(34, 55);
  int r = 0;
  for (int k = 1; k < 55 && !r; ++k)
    if (std::abs(chern_diophantine(f, k)) == 1) r = k;
  auto inv = peak_lambda_invariance(f, r, Side::Lower, {1.0, 1.1, 1.5}, doublet_phase(f, r));
  CHECK(inv.invariant);
  CHECK(inv.sites.size() == 3);
}
