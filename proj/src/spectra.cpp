#include "quasitop/spectra.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

#include "quasitop/errors.hpp"

namespace quasitop {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

std::string fingerprint(const ChainMatrix& h) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "[%ldx%ld, |H|_F=%.6e, tr=%.6e]", static_cast<long>(h.rows()),
                static_cast<long>(h.cols()), h.norm(), h.trace().real());
  return buf;
}

HarperParams bloch(const RationalFlux& flux, double lambda, double phi, double theta) {
  HarperParams p;
  p.lambda = lambda;
  p.flux = flux;
  p.phi = phi;
  p.boundary = Boundary::Bloch;
  p.theta = theta;
  return p;
}

double level_at(const RationalFlux& flux, double lambda, double phi, double theta, int level) {
  return eigenvalues(build_harper(bloch(flux, lambda, phi, theta), static_cast<int>(flux.q)))(level);
}
}  // namespace

EigenSystem diagonalize(const ChainMatrix& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("diagonalize: matrix not square");
  Eigen::SelfAdjointEigenSolver<ChainMatrix> es(h);
  if (es.info() != Eigen::Success) throw NumericalError("diagonalize: no convergence " + fingerprint(h));
  return {es.eigenvalues(), es.eigenvectors()};
}

Eigen::VectorXd eigenvalues(const ChainMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ChainMatrix> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalues: no convergence " + fingerprint(h));
  return es.eigenvalues();
}

Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalues: no convergence " + fingerprint(h.cast<std::complex<double>>()));
  return es.eigenvalues();
}

double grid_theta(const GridSpec& g, int i) { return two_pi * i / g.n_theta; }
double grid_phi(const GridSpec& g, int j) { return wrap_unit(g.phi_origin + static_cast<double>(j) / g.n_phi); }

BandStructure band_structure(const RationalFlux& flux, double lambda, const GridSpec& grid, Exec exec) {
  if (grid.n_theta < 4 || grid.n_phi < 4) throw std::invalid_argument("band_structure: grid must be at least 4x4");
  const int q = static_cast<int>(flux.q);
  const std::size_t npts = static_cast<std::size_t>(grid.n_theta) * grid.n_phi;
  auto rows = map_indexed(exec, npts, [&](std::size_t idx) {
    int i = static_cast<int>(idx % grid.n_theta), j = static_cast<int>(idx / grid.n_theta);
    return eigenvalues(build_harper(bloch(flux, lambda, grid_phi(grid, j), grid_theta(grid, i)), q));
  });
  BandStructure bs;
  bs.flux = flux;
  bs.lambda = lambda;
  bs.grid = grid;
  bs.levels.resize(static_cast<Eigen::Index>(npts), q);
  for (std::size_t idx = 0; idx < npts; ++idx) bs.levels.row(static_cast<Eigen::Index>(idx)) = rows[idx].transpose();
  bs.band_min.resize(q);
  bs.band_max.resize(q);
  for (int l = 0; l < q; ++l) {
    Eigen::Index lo = 0, hi = 0;
    bs.levels.col(l).minCoeff(&lo);
    bs.levels.col(l).maxCoeff(&hi);
    auto rec = [&](Eigen::Index idx) {
      int i = static_cast<int>(idx % grid.n_theta), j = static_cast<int>(idx / grid.n_theta);
      return BandExtremum{grid_theta(grid, i), grid_phi(grid, j), bs.levels(idx, l)};
    };
    bs.band_min[l] = rec(lo);
    bs.band_max[l] = rec(hi);
  }
  return bs;
}

std::vector<GapRecord> gap_records(const BandStructure& bands, double closed_tol) {
  const int q = static_cast<int>(bands.flux.q);
  std::vector<GapRecord> out;
  for (int r = 1; r < q; ++r) {
    GapRecord g;
    g.r = r;
    g.lower_edge = bands.band_max[r - 1].energy;
    g.upper_edge = bands.band_min[r].energy;
    g.width = g.upper_edge - g.lower_edge;
    g.open = g.width > closed_tol;
    out.push_back(g);
  }
  return out;
}

std::pair<double, double> spectrum_edges(const BandStructure& bands) {
  return {bands.levels.minCoeff(), bands.levels.maxCoeff()};
}

void fix_gauge(Eigen::VectorXcd& v) {
  Eigen::Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  std::complex<double> a = v(imax);
  if (std::abs(a) == 0.0) return;
  v *= std::conj(a) / std::abs(a);
  v(imax) = std::abs(v(imax));
}

namespace {

// All levels at theta_i = 2 pi i / n; 0 and pi are built exactly real.
struct ThetaSamples {
  std::vector<double> theta;
  std::vector<Eigen::VectorXd> levels;
};

ThetaSamples sample_theta(const RationalFlux& flux, double lambda, double phi, int n) {
  ThetaSamples ts;
  const int q = static_cast<int>(flux.q);
  for (int i = 0; i < n; ++i) {
    double th = 2 * i == n ? std::numbers::pi : two_pi * i / n;
    HarperParams hp = bloch(flux, lambda, phi, th);
    ts.theta.push_back(th);
    if (i == 0 || 2 * i == n) ts.levels.push_back(eigenvalues(build_harper_real(hp, q)));
    else ts.levels.push_back(eigenvalues(build_harper(hp, q)));
  }
  return ts;
}

ThetaExtremum refine_level(const RationalFlux& flux, double lambda, double phi, int level, bool maximize,
                           const ThetaSamples& ts) {
  const double sgn = maximize ? -1.0 : 1.0;  // minimise sgn * E
  auto f = [&](double th) { return sgn * level_at(flux, lambda, phi, th, level); };
  const int ns = static_cast<int>(ts.theta.size());
  int best = 0;
  for (int i = 1; i < ns; ++i)
    if (sgn * ts.levels[i](level) < sgn * ts.levels[best](level)) best = i;
  double fbest = sgn * ts.levels[best](level);

  // E(theta) = E(-theta), so 0 and pi are stationary; a sample there that beats
  // both neighbours needs no refinement
  const double fl = sgn * ts.levels[(best - 1 + ns) % ns](level), fr = sgn * ts.levels[(best + 1) % ns](level);
  const bool symmetric_point = best == 0 || 2 * best == ns;
  if (symmetric_point && fbest <= fl && fbest <= fr) return {ts.theta[best], sgn * fbest};

  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = two_pi * (best - 1) / ns, b = two_pi * (best + 1) / ns;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-9) {
    if (fc < fd) { b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c); }
    else { a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d); }
  }
  double th = wrap_angle(0.5 * (a + b));
  double fth = f(th);
  if (fbest < fth) { th = ts.theta[best]; fth = fbest; }

  // snap onto the time-reversal points when they are as good
  double snap = -1, fsnap = 0;
  for (int i : {0, ns / 2}) {
    double cand = ts.theta[i];
    double dist = std::abs(std::remainder(th - cand, two_pi));
    double fc2 = sgn * ts.levels[i](level);
    if ((dist < 1e-7 || fc2 <= fth + 1e-12) && (snap < 0 || fc2 < fsnap)) { snap = cand; fsnap = fc2; }
  }
  if (snap >= 0) { th = snap; fth = fsnap; }
  return {th, sgn * fth};
}

constexpr int theta_samples = 8;

}  // namespace

ThetaExtremum extremize_level(const RationalFlux& flux, double lambda, double phi, int level, bool maximize) {
  return refine_level(flux, lambda, phi, level, maximize, sample_theta(flux, lambda, phi, theta_samples));
}

StateProfile band_edge_state(const RationalFlux& flux, double lambda, double phi, int r, Side side) {
  const int q = static_cast<int>(flux.q);
  if (r < 0 || r > q) throw std::invalid_argument("band_edge_state: gap index outside 0..q");
  if (side == Side::Lower && r == 0) throw std::invalid_argument("band_edge_state: no band below r = 0");
  if (side == Side::Upper && r == q) throw std::invalid_argument("band_edge_state: no band above r = q");

  ThetaSamples ts = sample_theta(flux, lambda, phi, theta_samples);
  int level = side == Side::Lower ? r - 1 : r;
  ThetaExtremum ext = refine_level(flux, lambda, phi, level, side == Side::Lower, ts);
  if (r >= 1 && r <= q - 1) {
    ThetaExtremum other = refine_level(flux, lambda, phi, side == Side::Lower ? r : r - 1, side != Side::Lower, ts);
    double top = side == Side::Lower ? ext.energy : other.energy;
    double bottom = side == Side::Lower ? other.energy : ext.energy;
    if (!(bottom - top > 1e-12))
      throw NumericalError("band_edge_state: gap " + std::to_string(r) + " is closed at phi=" + std::to_string(phi));
  }

  StateProfile s;
  s.params = bloch(flux, lambda, wrap_unit(phi), ext.theta);
  const bool real = ext.theta == 0.0 || ext.theta == std::numbers::pi;
  if (real) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_harper_real(s.params, q));
    if (es.info() != Eigen::Success) throw NumericalError("band_edge_state: eigensolver failed");
    s.amplitudes = es.eigenvectors().col(level).cast<std::complex<double>>();
    s.energy = es.eigenvalues()(level);
  } else {
    EigenSystem es = diagonalize(build_harper(s.params, q));
    s.amplitudes = es.vectors.col(level);
    s.energy = es.values(level);
  }
  s.amplitudes.normalize();
  fix_gauge(s.amplitudes);
  s.level = level;
  s.gap = r;
  s.side = side;
  return s;
}

double ipr(const Eigen::VectorXcd& v) {
  double s = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::norm(v(i)), 2);
  return s;
}

}  // namespace quasitop
