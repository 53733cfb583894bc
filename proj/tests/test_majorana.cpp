#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "quasitop/banded.hpp"
#include "quasitop/majorana.hpp"

using namespace quasitop;

TEST_CASE("particle-hole symmetry at random points") {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 20; ++i) {
    BdgParams p{0.5 * u(rng), 2.0 * u(rng), make_flux(34, 55), u(rng), 20 + static_cast<int>(60 * u(rng)),
                u(rng) < 0.5 ? BdgBoundary::Open : BdgBoundary::Periodic};
    auto s = solve_bdg(p);
    const auto n = s.spectrum.size();
    for (Eigen::Index k = 0; k < n; ++k) CHECK(std::abs(s.spectrum[k] + s.spectrum[n - 1 - k]) < 1e-10);
  }
}

TEST_CASE("delta = 0 gives two Harper copies") {
  auto f = make_flux(34, 55);
  BdgParams p{0.0, 1.3, f, 0.1, 55, BdgBoundary::Open};
  auto s = solve_bdg(p);
  auto h = eigenvalues(build_harper_real({1.3, f, 0.1, Boundary::Open, 0.0}, 55));
  std::vector<double> want;
  for (int i = 0; i < 55; ++i) want.push_back(h[i]), want.push_back(-h[i]);
  std::sort(want.begin(), want.end());
  for (int i = 0; i < 110; ++i) CHECK(std::abs(s.spectrum[i] - want[i]) < 1e-10);
}

TEST_CASE("clean chain: periodic gap and odd-length zero mode") {
  auto f = make_flux(34, 55);
  auto per = solve_bdg({0.02, 0.0, f, 0.0, 200, BdgBoundary::Periodic});
  CHECK(per.zero_energy > 0.019);
  auto odd = solve_bdg({0.02, 0.0, f, 0.0, 201, BdgBoundary::Open});
  CHECK(odd.zero_energy < 1e-12);
  double prev = 1;
  for (int L : {100, 200, 400}) {
    auto e = solve_bdg({0.02, 0.0, f, 0.0, L, BdgBoundary::Open}).zero_energy;
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("banded path agrees with dense") {
  auto f = make_flux(55, 89);
  for (double lam : {0.5, 0.9, 1.3}) {
    BdgParams p{0.3, lam, f, 0.0, 150, BdgBoundary::Open};
    auto d = solve_bdg(p, BdgMethod::Dense);
    auto b = solve_bdg(p, BdgMethod::Banded);
    CHECK((d.spectrum - b.spectrum).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs(d.zero_energy - b.zero_energy) < 1e-10);
    CHECK((d.zero_mode - b.zero_mode).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(d.edge_weight == doctest::Approx(b.edge_weight).epsilon(1e-6));
  }
}

TEST_CASE("band storage round trip and LAPACK eigenvalues") {
  BdgParams p{0.1, 0.7, make_flux(8, 13), 0.2, 30, BdgBoundary::Open};
  Eigen::MatrixXd h = build_bdg(p);
  auto b = SymBand::from_dense(h, 3);
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 60; ++j)
      if (std::abs(i - j) <= 3) CHECK(b.get(i, j) == h(i, j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  CHECK((band_eigenvalues(b) - es.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::VectorXd v = band_inverse_iteration(b, es.eigenvalues()[30]);
  CHECK((h * v - es.eigenvalues()[30] * v).norm() < 1e-9);
}

TEST_CASE("zero mode is canonical and normalized") {
  auto s = solve_bdg({0.3, 0.5, make_flux(34, 55), 0.0, 55, BdgBoundary::Open});
  CHECK(s.zero_mode.norm() == doctest::Approx(1.0));
  Eigen::Index imax;
  s.zero_mode.cwiseAbs().maxCoeff(&imax);
  CHECK(s.zero_mode[imax] > 0);
  CHECK(std::abs(s.zero_energy - s.spectrum.cwiseAbs().minCoeff()) < 1e-15);
}

TEST_CASE("edge weight on trivial states") {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(200);
  v[0] = 1;
  CHECK(edge_weight(v) == doctest::Approx(1.0));
  Eigen::VectorXd u = Eigen::VectorXd::Constant(200, 1 / std::sqrt(200.0));
  CHECK(edge_weight(u, 0.1) == doctest::Approx(0.2));
  CHECK(bdg_ipr(u) == doctest::Approx(1 / 100.0));
}

TEST_CASE("edge splitting shrinks with length below lambda_c") {
  auto e89 = solve_bdg({0.02, 0.9, golden_approximant(11), 0.0, 89, BdgBoundary::Open}).zero_energy;
  auto e144 = solve_bdg({0.02, 0.9, golden_approximant(12), 0.0, 144, BdgBoundary::Open}).zero_energy;
  CHECK(e144 < e89);
}

TEST_CASE("central-gap mode disappears with periodic boundary") {
  auto f = golden_approximant(11);
  auto open = solve_bdg({0.5, 0.5, f, 0.0, 89, BdgBoundary::Open});
  auto per = solve_bdg({0.5, 0.5, f, 0.0, 89, BdgBoundary::Periodic});
  CHECK(open.zero_energy < 1e-6);
  CHECK(open.edge_weight > 0.9);
  CHECK(per.zero_energy > 0.5 * 0.5 * per.gap_at_zero);
  CHECK(per.zero_energy > 1e3 * open.zero_energy);
}

TEST_CASE("small delta moves non-central levels by O(delta)") {
  auto f = golden_approximant(11);
  const double d = 0.02;
  auto s = solve_bdg({d, 1.0, f, 0.0, 89, BdgBoundary::Open});
  auto h = eigenvalues(build_harper_real({1.0, f, 0.0, Boundary::Open, 0.0}, 89));
  std::vector<double> mag(h.data(), h.data() + 89);
  for (auto& x : mag) x = std::abs(x);
  std::sort(mag.begin(), mag.end());
  for (int i = 0; i < 89; ++i) CHECK(std::abs(s.spectrum[89 + i] - mag[i]) < 10 * d);
}

TEST_CASE("Sturm bisection matches a general eigensolver") {
  auto t = build_fluctuation(1.7, make_flux(8, 13), 0.05, 40);
  auto st = sturm_eigenvalues(t);
  Eigen::EigenSolver<Eigen::MatrixXd> es(t.dense());
  std::vector<double> ref;
  for (int i = 0; i < 40; ++i) {
    CHECK(std::abs(es.eigenvalues()[i].imag()) < 1e-8);
    ref.push_back(es.eigenvalues()[i].real());
  }
  std::sort(ref.begin(), ref.end());
  // the nonsymmetric reference loses digits to the e^{L xi} eigenvector conditioning
  for (int i = 0; i < 40; ++i) CHECK(std::abs(st[i] - ref[i]) < 1e-7);
  // symmetrized similarity: diag, sqrt(sub * super) off the diagonal
  Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(40, 40);
  for (int i = 0; i < 40; ++i) {
    sym(i, i) = t.diag[i];
    if (i + 1 < 40) sym(i, i + 1) = sym(i + 1, i) = std::sqrt(t.sub[i] * t.super[i]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ss(sym);
  for (int i = 0; i < 40; ++i) CHECK(std::abs(st[i] - ss.eigenvalues()[i]) < 1e-12);
}

TEST_CASE("fluctuation correspondence") {
  for (double lam : {1.2, 1.5, 2.0}) {
    auto r = fluctuation_correspondence(lam, make_flux(34, 55), 0.0, 55);
    CHECK(r.spectral_mismatch < 1e-8);
    CHECK(r.residual_f < 1e-8);
    CHECK(r.residual_g < 1e-8);
    CHECK(r.delta == doctest::Approx(lam - 1 / lam));
    CHECK(r.xi == doctest::Approx(std::log(lam)));
    CHECK(r.envelope.size() == 55);
  }
  CHECK_THROWS_AS(fluctuation_correspondence(1.0, make_flux(34, 55), 0.0, 55), std::invalid_argument);
}

TEST_CASE("phase scan is identical serial and parallel") {
  auto f = golden_approximant(11);
  auto lams = linspace(0.8, 1.3, 11);
  CHECK(lams.size() == 11);
  CHECK(lams.back() == 1.3);
  auto a = phase_scan(0.02, f, 0.0, 89, lams, Exec::Serial);
  auto b = phase_scan(0.02, f, 0.0, 89, lams, Exec::Parallel);
  for (std::size_t i = 0; i < lams.size(); ++i) {
    CHECK(a.rows[i].min_abs_e == b.rows[i].min_abs_e);
    CHECK(a.rows[i].ipr == b.rows[i].ipr);
  }
  CHECK(a.lambda_c_estimate == b.lambda_c_estimate);
}

TEST_CASE("ghost report structure") {
  auto f = golden_approximant(11);
  auto g = ghost_shadow_report(f, 0.02, 0.0, 89, {1, 2});
  CHECK(g.lambda_c == doctest::Approx(bdg_couplings(0.02).jy));
  CHECK(g.ghost_profile.size() == 89);
  CHECK(g.chern_profile.size() == 89);
  CHECK(std::abs(g.chern) == 4);
  CHECK(g.overlap > 0);
  CHECK(g.overlap <= 1 + 1e-12);
}
