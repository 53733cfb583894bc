#include "quasitop/majorana.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "quasitop/banded.hpp"
#include "quasitop/errors.hpp"
#include "quasitop/topology.hpp"

namespace quasitop {

namespace {

// (A f)_n = jx f_{n+1} + jy f_{n-1} + V_n f_n, (A^T g)_n = jy g_{n+1} + jx g_{n-1} + V_n g_n
struct BlockOp {
  std::vector<double> v;
  Couplings c;
  bool periodic;

  explicit BlockOp(const BdgParams& p)
      : v(potential_profile(p.flux, p.lambda, wrap_unit(p.phi), p.length)),
        c(bdg_couplings(p.delta)),
        periodic(p.boundary == BdgBoundary::Periodic) {}

  Eigen::VectorXd apply(const Eigen::VectorXd& f, bool transpose) const {
    const int L = static_cast<int>(f.size());
    const double up = transpose ? c.jy : c.jx, down = transpose ? c.jx : c.jy;
    Eigen::VectorXd out(L);
    for (int n = 0; n < L; ++n) {
      double s = v[n] * f(n);
      if (n + 1 < L) s += up * f(n + 1);
      else if (periodic) s += up * f(0);
      if (n > 0) s += down * f(n - 1);
      else if (periodic) s += down * f(L - 1);
      out(n) = s;
    }
    return out;
  }
};

SymBand bdg_band(const BdgParams& p) {
  const int L = p.length, n = 2 * L, kd = 3;
  BlockOp op(p);
  SymBand b;
  b.n = n;
  b.kd = kd;
  b.ab.assign(static_cast<std::size_t>(kd + 1) * n, 0.0);
  auto set = [&](int i, int j, double x) {
    if (i > j) std::swap(i, j);
    b.ab[static_cast<std::size_t>(j) * (kd + 1) + kd + i - j] += x;
  };
  for (int m = 0; m < L; ++m) {
    set(2 * m + 1, 2 * m, op.v[m]);
    if (m + 1 < L) {
      set(2 * m + 1, 2 * (m + 1), op.c.jx);  // A(m, m+1)
      set(2 * (m + 1) + 1, 2 * m, op.c.jy);  // A(m+1, m)
    }
  }
  return b;
}

Eigen::VectorXd part(const Eigen::VectorXd& x, int which) {
  const int L = static_cast<int>(x.size() / 2);
  Eigen::VectorXd out(L);
  for (int n = 0; n < L; ++n) out(n) = x(2 * n + which);
  return out;
}

Eigen::VectorXd canonical_zero_mode(const Eigen::VectorXd& x, const BdgParams& p) {
  Eigen::VectorXd f = part(x, 0), g = part(x, 1);
  double nf = f.norm(), ng = g.norm();
  const double tiny = 1e-12;
  int parts = 0;
  if (nf > tiny) { f /= nf; ++parts; } else f.setZero();
  if (ng > tiny) { g /= ng; ++parts; } else g.setZero();
  if (parts == 0) throw NumericalError("zero mode vanished");
  BlockOp op(p);
  if (g.dot(op.apply(f, false)) < 0) g = -g;  // E >= 0 member of the pair
  const double s = 1.0 / std::sqrt(static_cast<double>(parts));
  Eigen::VectorXd out(x.size());
  for (Eigen::Index n = 0; n < f.size(); ++n) {
    out(2 * n) = s * f(n);
    out(2 * n + 1) = s * g(n);
  }
  Eigen::Index imax = 0;
  out.cwiseAbs().maxCoeff(&imax);
  if (out(imax) < 0) out = -out;
  return out;
}

}  // namespace

Eigen::VectorXd site_weights(const Eigen::VectorXd& x) {
  const Eigen::Index L = x.size() / 2;
  Eigen::VectorXd w(L);
  for (Eigen::Index n = 0; n < L; ++n) w(n) = x(2 * n) * x(2 * n) + x(2 * n + 1) * x(2 * n + 1);
  return w;
}

double edge_weight(const Eigen::VectorXd& x, double fraction) {
  Eigen::VectorXd w = site_weights(x);
  const int L = static_cast<int>(w.size());
  int nf = std::max(1, static_cast<int>(std::lround(fraction * L)));
  nf = std::min(nf, L / 2);
  double s = 0;
  for (int n = 0; n < nf; ++n) s += w(n) + w(L - 1 - n);
  return s / w.sum();
}

double bdg_ipr(const Eigen::VectorXd& x) {
  Eigen::VectorXd w = site_weights(x);
  w /= w.sum();
  return w.squaredNorm();
}

BdgSolution solve_bdg(const BdgParams& params, BdgMethod method) {
  if (params.length < 2) throw std::invalid_argument("solve_bdg: length < 2");
  if (method == BdgMethod::Auto)
    method = params.length <= 400 || params.boundary == BdgBoundary::Periodic ? BdgMethod::Dense : BdgMethod::Banded;
  if (method == BdgMethod::Banded && params.boundary == BdgBoundary::Periodic)
    throw std::invalid_argument("solve_bdg: banded path is open-boundary only");

  BdgSolution s;
  s.params = params;
  s.couplings = bdg_couplings(params.delta);
  Eigen::VectorXd raw;
  if (method == BdgMethod::Dense) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_bdg(params));
    if (es.info() != Eigen::Success) throw NumericalError("solve_bdg: eigensolver failed");
    s.spectrum = es.eigenvalues();
    Eigen::Index i0 = 0;
    s.spectrum.cwiseAbs().minCoeff(&i0);
    raw = es.eigenvectors().col(i0);
  } else {
    SymBand b = bdg_band(params);
    s.spectrum = band_eigenvalues(b);
    Eigen::Index i0 = 0;
    s.spectrum.cwiseAbs().minCoeff(&i0);
    raw = band_inverse_iteration(b, std::abs(s.spectrum(i0)));
  }
  std::vector<double> mags(s.spectrum.size());
  for (Eigen::Index i = 0; i < s.spectrum.size(); ++i) mags[i] = std::abs(s.spectrum(i));
  std::sort(mags.begin(), mags.end());
  s.zero_energy = mags[0];
  if (params.boundary == BdgBoundary::Periodic) s.gap_at_zero = 2.0 * mags[0];
  else s.gap_at_zero = mags.size() > 2 ? 2.0 * mags[2] : 0.0;
  s.zero_mode = canonical_zero_mode(raw, params);
  s.edge_weight = edge_weight(s.zero_mode);
  s.ipr = bdg_ipr(s.zero_mode);
  return s;
}

std::vector<double> linspace(double lo, double hi, int steps) {
  if (steps < 1) throw std::invalid_argument("linspace: steps < 1");
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) out[i] = steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1);
  return out;
}

PhaseScan phase_scan(double delta, const RationalFlux& flux, double phi, int length, const std::vector<double>& lambdas,
                     Exec exec, BdgMethod method) {
  PhaseScan ps;
  ps.jy = bdg_couplings(delta).jy;
  ps.rows = map_indexed(exec, lambdas.size(), [&](std::size_t i) {
    BdgParams p;
    p.delta = delta;
    p.lambda = lambdas[i];
    p.flux = flux;
    p.phi = phi;
    p.length = length;
    BdgSolution s = solve_bdg(p, method);
    ScanRow row;
    row.lambda = lambdas[i];
    row.min_abs_e = s.zero_energy;
    row.edge_weight = s.edge_weight;
    row.ipr = s.ipr;
    Eigen::Index pk = 0;
    site_weights(s.zero_mode).maxCoeff(&pk);
    row.peak_site = static_cast<int>(pk);
    return row;
  });
  double best = -1;
  for (const ScanRow& r : ps.rows)
    if (1.0 / r.ipr > best) {
      best = 1.0 / r.ipr;
      ps.lambda_c_estimate = r.lambda;
    }
  return ps;
}

GhostReport ghost_shadow_report(const RationalFlux& flux, double delta, double phi, int length, const SeaOptions& sea) {
  GhostReport g;
  g.length = length;
  g.lambda_c = bdg_couplings(delta).jy;
  BdgParams p;
  p.delta = delta;
  p.lambda = g.lambda_c;
  p.flux = flux;
  p.phi = phi;
  p.length = length;
  BdgSolution s = solve_bdg(p);
  g.ghost_profile = site_weights(s.zero_mode).cwiseSqrt();

  // lowest gap with |C| = 4
  g.chern_gap = -1;
  for (int r = 1; r < flux.q && g.chern_gap < 0; ++r) {
    try {
      if (std::abs(chern_diophantine(flux, r)) == 4) g.chern_gap = r;
    } catch (const std::domain_error&) {
    }
  }
  if (g.chern_gap < 0) throw std::invalid_argument("ghost_shadow_report: flux has no Chern-4 gap");
  g.chern = chern_diophantine(flux, g.chern_gap);
  StateProfile c4 = band_edge_state(flux, 1.0, doublet_phase(flux, g.chern_gap), g.chern_gap, Side::Lower);
  g.chern_profile = c4.amplitudes.cwiseAbs();

  PeakOptions opt;
  opt.chern = 4;
  PeakHierarchy gh = detect_peaks(g.ghost_profile.cast<std::complex<double>>(), opt);
  PeakHierarchy ch = detect_peaks(c4.amplitudes, opt);
  std::set<int> seps;
  for (const PeakGroup& grp : gh.groups)
    if (grp.separation > 0) seps.insert(grp.separation);
  g.ghost_doublets.assign(seps.begin(), seps.end());
  g.ghost_has_separation_4 = seps.count(4) > 0;
  seps.clear();
  for (const PeakGroup& grp : ch.groups)
    if (grp.separation > 0) seps.insert(grp.separation);
  g.chern_doublets.assign(seps.begin(), seps.end());

  const Eigen::Index common = std::min<Eigen::Index>(g.ghost_profile.size(), g.chern_profile.size());
  g.overlap = g.ghost_profile.head(common).dot(g.chern_profile.head(common));

  std::set<int> go, co;
  for (const PeakGroup& grp : gh.groups) go.insert(static_cast<int>(std::lround(grp.offset)));
  for (const PeakGroup& grp : ch.groups) co.insert(static_cast<int>(std::lround(grp.offset)));
  g.ghost_offsets = static_cast<int>(go.size());
  g.chern_offsets = static_cast<int>(co.size());
  std::set_intersection(go.begin(), go.end(), co.begin(), co.end(), std::back_inserter(g.shared_offsets));

  Eigen::VectorXcd fpart(length);
  for (int n = 0; n < length; ++n) fpart(n) = s.zero_mode(2 * n);
  g.ghost_momentum = state_momentum(fpart.normalized());
  g.chern_sea_momentum = sea_momentum(flux, 1.0, g.chern_gap, sea);
  g.ghost_wiggles = wiggle_metric(g.ghost_momentum);
  g.chern_wiggles = wiggle_metric(g.chern_sea_momentum);
  return g;
}

std::vector<double> sturm_eigenvalues(const Tridiagonal& t, double tol) {
  const int n = t.size();
  for (int i = 0; i + 1 < n; ++i)
    if (!(t.sub[i] * t.super[i] > 0)) throw std::invalid_argument("sturm_eigenvalues: need sub * super > 0");
  double lo = 1e300, hi = -1e300;
  for (int i = 0; i < n; ++i) {
    double r = 0;
    if (i > 0) r += std::sqrt(t.sub[i - 1] * t.super[i - 1]);
    if (i + 1 < n) r += std::sqrt(t.sub[i] * t.super[i]);
    lo = std::min(lo, t.diag[i] - r);
    hi = std::max(hi, t.diag[i] + r);
  }
  // number of eigenvalues below x
  auto count = [&](double x) {
    int c = 0;
    double d = 1.0;
    for (int i = 0; i < n; ++i) {
      double off = i > 0 ? t.sub[i - 1] * t.super[i - 1] : 0.0;
      d = t.diag[i] - x - (i > 0 ? off / d : 0.0);
      if (d == 0.0) d = -1e-300;
      if (d < 0) ++c;
    }
    return c;
  };
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    double a = lo, b = hi;
    while (b - a > tol * std::max(1.0, std::abs(a) + std::abs(b))) {
      double m = 0.5 * (a + b);
      if (m <= a || m >= b) break;
      if (count(m) > k) b = m;
      else a = m;
    }
    out[k] = 0.5 * (a + b);
  }
  return out;
}

FluctuationReport fluctuation_correspondence(double lambda, const RationalFlux& flux, double phi, int length) {
  if (!(lambda > 1.0)) throw std::invalid_argument("fluctuation_correspondence: lambda must be > 1");
  FluctuationReport r;
  r.lambda = lambda;
  r.xi = std::log(lambda);
  r.delta = lambda - 1.0 / lambda;

  std::vector<double> fl = sturm_eigenvalues(build_fluctuation(lambda, flux, phi, length));
  HarperParams hp;
  hp.lambda = lambda;
  hp.flux = flux;
  hp.phi = phi;
  hp.boundary = Boundary::Open;
  Eigen::MatrixXd h = build_harper_real(hp, length);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  for (int i = 0; i < length; ++i) r.spectral_mismatch = std::max(r.spectral_mismatch, std::abs(fl[i] - es.eigenvalues()(i)));

  BdgParams bp;
  bp.delta = r.delta;
  bp.lambda = lambda;
  bp.flux = flux;
  bp.phi = phi;
  bp.length = length;
  BdgSolution s = solve_bdg(bp);
  r.bdg_energy = s.zero_energy;
  Eigen::VectorXd f = part(s.zero_mode, 0), g = part(s.zero_mode, 1);
  BlockOp op(bp);
  r.residual_f = (op.apply(f, false) - s.zero_energy * g).cwiseAbs().maxCoeff();
  r.residual_g = (op.apply(g, true) - s.zero_energy * f).cwiseAbs().maxCoeff();

  r.envelope.resize(length);
  for (int n = 0; n < length; ++n) r.envelope(n) = std::exp(-n * r.xi) * f(n);
  if (r.envelope.norm() > 0) r.envelope.normalize();
  Eigen::Index i0 = 0;
  es.eigenvalues().cwiseAbs().minCoeff(&i0);
  r.harper_energy = es.eigenvalues()(i0);
  r.harper_state = es.eigenvectors().col(i0);
  r.envelope_overlap = std::abs(r.envelope.cwiseAbs().dot(r.harper_state.cwiseAbs()));
  return r;
}

}  // namespace quasitop
