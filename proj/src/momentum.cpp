#include "quasitop/momentum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quasitop/errors.hpp"

namespace quasitop {

namespace {

// rows: e^{-2 pi i j n / q} / sqrt(q)
Eigen::MatrixXcd dft_matrix(int q) {
  Eigen::MatrixXcd f(q, q);
  const double s = 1.0 / std::sqrt(static_cast<double>(q));
  for (int j = 0; j < q; ++j)
    for (int n = 0; n < q; ++n) {
      std::int64_t jn = (static_cast<std::int64_t>(j) * n) % q;
      f(j, n) = std::polar(s, -2.0 * std::numbers::pi * static_cast<double>(jn) / q);
    }
  return f;
}

std::vector<double> k_grid(int q) {
  std::vector<double> k(q);
  for (int j = 0; j < q; ++j) k[j] = 2.0 * std::numbers::pi * j / q;
  return k;
}

}  // namespace

MomentumDistribution state_momentum(const Eigen::VectorXcd& psi) {
  const int q = static_cast<int>(psi.size());
  Eigen::VectorXcd t = dft_matrix(q) * psi;
  MomentumDistribution d;
  d.k = k_grid(q);
  d.n.resize(q);
  for (int j = 0; j < q; ++j) d.n[j] = std::norm(t(j));
  d.density.resize(q);
  for (int n = 0; n < q; ++n) d.density[n] = std::norm(psi(n));
  d.particles = psi.squaredNorm();
  d.filling = "single state";
  return d;
}

MomentumDistribution sea_momentum(const RationalFlux& flux, double lambda, int r, const SeaOptions& opt, Exec exec) {
  const int q = static_cast<int>(flux.q);
  if (r < 1 || r > q) throw std::invalid_argument("sea_momentum: r outside 1..q");
  if (opt.phi_samples < 1 || opt.theta_samples < 1) throw std::invalid_argument("sea_momentum: need >= 1 sample");
  const Eigen::MatrixXcd f = dft_matrix(q);
  const int nt = opt.theta_samples, np = opt.phi_samples;

  struct Sample {
    Eigen::VectorXd nk, rho;
    double below, above;
  };
  auto samples = map_indexed(exec, static_cast<std::size_t>(nt) * np, [&](std::size_t idx) {
    int i = static_cast<int>(idx % nt), j = static_cast<int>(idx / nt);
    HarperParams hp;
    hp.lambda = lambda;
    hp.flux = flux;
    hp.phi = static_cast<double>(j) / np;
    hp.theta = 2.0 * std::numbers::pi * (i + 0.5) / nt;
    EigenSystem es = diagonalize(build_harper(hp, q));
    Eigen::MatrixXcd t = f * es.vectors.leftCols(r);
    Sample s;
    s.nk = t.cwiseAbs2().rowwise().sum();
    s.rho = es.vectors.leftCols(r).cwiseAbs2().rowwise().sum();
    s.below = es.values(r - 1);
    s.above = r < q ? es.values(r) : 1e300;
    return s;
  });

  double top = -1e300, bottom = 1e300;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(q), rho = Eigen::VectorXd::Zero(q);
  for (const Sample& s : samples) {
    acc += s.nk;
    rho += s.rho;
    top = std::max(top, s.below);
    bottom = std::min(bottom, s.above);
  }
  if (r < q && !(bottom - top > 1e-12)) throw NumericalError("sea_momentum: gap " + std::to_string(r) + " is closed");
  acc /= static_cast<double>(samples.size());
  rho /= static_cast<double>(samples.size());

  MomentumDistribution d;
  d.k = k_grid(q);
  d.n.assign(acc.data(), acc.data() + q);
  d.density.assign(rho.data(), rho.data() + q);
  d.particles = r;
  d.gap = r;
  d.theta_samples = nt;
  d.phi_samples = np;
  d.filling = "lowest " + std::to_string(r) + " levels";
  return d;
}

int gap_for_chern(const RationalFlux& flux, int chern) {
  for (int r = 1; r < flux.q; ++r) {
    try {
      if (mod_solve(flux.p, flux.q, r) == chern) return r;
    } catch (const std::domain_error&) {
    }
  }
  throw std::invalid_argument("no gap with Chern label " + std::to_string(chern) + " for q=" + std::to_string(flux.q));
}

int half_filling_gap(const RationalFlux& flux) { return static_cast<int>(flux.q / 2); }

Wiggles wiggle_metric(const std::vector<double>& n) {
  const int q = static_cast<int>(n.size());
  Wiggles w;
  if (q < 3) return w;
  std::vector<double> s(q);
  for (int j = 0; j < q; ++j) s[j] = (n[(j - 1 + q) % q] + n[j] + n[(j + 1) % q]) / 3.0;
  for (int j = 0; j < q; ++j) w.total_variation += std::abs(n[(j + 1) % q] - n[j]);
  // 0 < k_j < pi  <=>  0 < 2j < q
  const double eps = 1e-14 * (*std::max_element(s.begin(), s.end()));
  for (int j = 1; 2 * j < q; ++j)
    if (s[j] > s[j - 1] + eps && s[j] > s[j + 1] + eps) ++w.count;
  return w;
}

Wiggles wiggle_metric(const MomentumDistribution& dist) { return wiggle_metric(dist.n); }

}  // namespace quasitop
