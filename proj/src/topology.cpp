#include "quasitop/topology.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "quasitop/errors.hpp"

namespace quasitop {

using cd = std::complex<double>;

namespace {

HarperParams bloch_at(const RationalFlux& flux, double lambda, double phi, double theta) {
  HarperParams p;
  p.lambda = lambda;
  p.flux = flux;
  p.phi = phi;
  p.theta = theta;
  return p;
}

cd block_det(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(m).determinant();
}

// Overlap determinants of the lowest-r projector for r = 1..q. M is unitary, so
// det(M_rr) = det(M) conj(det(M_ee)) lets us factor the smaller block.
void gap_links(const Eigen::MatrixXcd& m, cd* out) {
  const int q = static_cast<int>(m.rows());
  cd full = block_det(m);
  for (int r = 1; r <= q; ++r) {
    if (r == q) out[r - 1] = full;
    else if (2 * r <= q) out[r - 1] = block_det(m.topLeftCorner(r, r));
    else out[r - 1] = full * std::conj(block_det(m.bottomRightCorner(q - r, q - r)));
  }
}

struct RowLinks {
  std::vector<cd> gap_theta, gap_phi;    // [i * q + r - 1]
  std::vector<cd> band_theta, band_phi;  // [i * q + l]
  std::vector<double> lmin, lmax;
};

double plaquette(cd l1, cd l2_next, cd l1_up, cd l2) { return std::arg(l1 * l2_next * std::conj(l1_up) * std::conj(l2)); }

}  // namespace

GridSpec default_chern_grid(const RationalFlux& flux) {
  GridSpec g;
  g.n_theta = 8;
  g.n_phi = static_cast<int>(std::max<std::int64_t>(32, 2 * flux.q));
  return g;
}

GridSpec doubled(const GridSpec& g) { return {2 * g.n_theta, 2 * g.n_phi, g.phi_origin}; }

BerryFluxes berry_fluxes(const RationalFlux& flux, double lambda, const GridSpec& grid, Exec exec) {
  if (grid.n_theta < 4 || grid.n_phi < 4) throw std::invalid_argument("berry_fluxes: grid must be at least 4x4");
  const int q = static_cast<int>(flux.q);
  const int nt = grid.n_theta, np = grid.n_phi;

  auto rows = map_indexed(exec, static_cast<std::size_t>(np), [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    std::vector<EigenSystem> here(nt), up(nt);
    for (int i = 0; i < nt; ++i) {
      here[i] = diagonalize(build_harper(bloch_at(flux, lambda, grid_phi(grid, j), grid_theta(grid, i)), q));
      up[i] = diagonalize(build_harper(bloch_at(flux, lambda, grid_phi(grid, (j + 1) % np), grid_theta(grid, i)), q));
    }
    RowLinks rl;
    rl.gap_theta.resize(static_cast<std::size_t>(nt) * q);
    rl.gap_phi.resize(static_cast<std::size_t>(nt) * q);
    rl.band_theta.resize(static_cast<std::size_t>(nt) * q);
    rl.band_phi.resize(static_cast<std::size_t>(nt) * q);
    rl.lmin.assign(q, 1e300);
    rl.lmax.assign(q, -1e300);
    for (int i = 0; i < nt; ++i) {
      const Eigen::MatrixXcd& u = here[i].vectors;
      Eigen::MatrixXcd mt = u.adjoint() * here[(i + 1) % nt].vectors;
      Eigen::MatrixXcd mp = u.adjoint() * up[i].vectors;
      gap_links(mt, &rl.gap_theta[static_cast<std::size_t>(i) * q]);
      gap_links(mp, &rl.gap_phi[static_cast<std::size_t>(i) * q]);
      for (int l = 0; l < q; ++l) {
        rl.band_theta[static_cast<std::size_t>(i) * q + l] = mt(l, l);
        rl.band_phi[static_cast<std::size_t>(i) * q + l] = mp(l, l);
        rl.lmin[l] = std::min(rl.lmin[l], here[i].values(l));
        rl.lmax[l] = std::max(rl.lmax[l], here[i].values(l));
      }
    }
    return rl;
  });

  BerryFluxes bf;
  bf.grid = grid;
  bf.gap_flux.assign(q, 0.0);
  bf.band_flux.assign(q, 0.0);
  bf.level_min.assign(q, 1e300);
  bf.level_max.assign(q, -1e300);
  for (int j = 0; j < np; ++j) {
    const RowLinks& a = rows[j];
    const RowLinks& b = rows[(j + 1) % np];
    for (int i = 0; i < nt; ++i) {
      const std::size_t s = static_cast<std::size_t>(i) * q;
      const std::size_t sn = static_cast<std::size_t>((i + 1) % nt) * q;
      for (int k = 0; k < q; ++k) {
        bf.gap_flux[k] += plaquette(a.gap_theta[s + k], a.gap_phi[sn + k], b.gap_theta[s + k], a.gap_phi[s + k]);
        bf.band_flux[k] += plaquette(a.band_theta[s + k], a.band_phi[sn + k], b.band_theta[s + k], a.band_phi[s + k]);
      }
    }
    for (int l = 0; l < q; ++l) {
      bf.level_min[l] = std::min(bf.level_min[l], a.lmin[l]);
      bf.level_max[l] = std::max(bf.level_max[l], a.lmax[l]);
    }
  }
  for (auto& x : bf.gap_flux) x /= 2.0 * std::numbers::pi;
  for (auto& x : bf.band_flux) x /= 2.0 * std::numbers::pi;
  return bf;
}

ChernTable chern_table(const RationalFlux& flux, double lambda, const GridSpec& grid, Exec exec, double closed_tol) {
  const int q = static_cast<int>(flux.q);
  BerryFluxes coarse = berry_fluxes(flux, lambda, grid, exec);
  BerryFluxes fine = berry_fluxes(flux, lambda, doubled(grid), exec);

  ChernTable t;
  t.grid = grid;
  t.gap_chern.resize(q - 1);
  t.gap_width.resize(q - 1);
  t.band_chern.resize(q);
  std::vector<bool> open(q + 1, true);  // open[r]: gap below level r; ends count as open
  std::ostringstream unstable;
  for (int r = 1; r < q; ++r) {
    double w = std::min(coarse.level_min[r], fine.level_min[r]) - std::max(coarse.level_max[r - 1], fine.level_max[r - 1]);
    t.gap_width[r - 1] = w;
    open[r] = w > closed_tol;
    if (!open[r]) continue;
    long c0 = std::lround(coarse.gap_flux[r - 1]), c1 = std::lround(fine.gap_flux[r - 1]);
    if (c0 != c1 || std::abs(fine.gap_flux[r - 1] - static_cast<double>(c1)) > 1e-6) {
      unstable << " r=" << r << " (" << coarse.gap_flux[r - 1] << " vs " << fine.gap_flux[r - 1] << ")";
      continue;
    }
    t.gap_chern[r - 1] = static_cast<int>(c1);
  }
  if (!unstable.str().empty()) throw NumericalError("chern: grid-unstable integer at" + unstable.str());
  for (int l = 0; l < q; ++l) {
    if (!open[l] || !open[l + 1]) continue;
    long c0 = std::lround(coarse.band_flux[l]), c1 = std::lround(fine.band_flux[l]);
    if (c0 == c1) t.band_chern[l] = static_cast<int>(c1);
  }
  return t;
}

int chern_berry(const RationalFlux& flux, double lambda, int r, const GridSpec& grid, Exec exec) {
  if (r < 1 || r >= flux.q) throw std::invalid_argument("chern_berry: r outside 1..q-1");
  ChernTable t = chern_table(flux, lambda, grid, exec);
  if (!t.gap_chern[r - 1]) throw NumericalError("chern_berry: gap " + std::to_string(r) + " is closed");
  return *t.gap_chern[r - 1];
}

int chern_berry(const RationalFlux& flux, double lambda, int r) {
  return chern_berry(flux, lambda, r, default_chern_grid(flux));
}

int chern_diophantine(const RationalFlux& flux, int r) { return static_cast<int>(mod_solve(flux.p, flux.q, r)); }

PairTable pairing_table(const RationalFlux& flux, double phi, double lambda) {
  (void)lambda;
  const std::int64_t q = flux.q;
  const double ph = wrap_unit(phi);
  const double sd = 2.0 * static_cast<double>(q) * ph;
  const double sr = std::round(sd);
  if (std::abs(sd - sr) > 1e-9)
    throw std::invalid_argument("pairing_table: phi breaks the exact V pairing; use phi = s/(2q), e.g. 0 or 1/(2q)");
  const std::int64_t s = static_cast<std::int64_t>(sr);
  const std::int64_t pinv = mod_inverse(flux.p, q);

  PairTable t;
  t.flux = flux;
  t.phi = ph;
  struct Unit {
    double v;
    int a, b;  // b == -1: singleton
  };
  std::vector<Unit> units;
  for (std::int64_t n = 0; n < q; ++n) {
    // p (n + m) = -s (mod q)
    std::int64_t m = wrap_mod(wrap_mod(-s, q) * pinv % q - n, q);
    double vn = potential(flux, 1.0, ph, n);
    if (m == n) units.push_back({vn, static_cast<int>(n), -1});
    else if (n < m) {
      double vm = potential(flux, 1.0, ph, m);
      if (std::abs(vn - vm) > 1e-12) throw NumericalError("pairing_table: pair potentials differ beyond 1e-12");
      units.push_back({std::min(vn, vm), static_cast<int>(n), static_cast<int>(m)});
    }
  }
  std::stable_sort(units.begin(), units.end(), [](const Unit& x, const Unit& y) { return x.v < y.v; });
  t.rank_pair.assign(q, -1);
  int rank = 0;
  for (const Unit& u : units) {
    if (u.b < 0) {
      t.order.push_back(u.a);
      t.singletons.push_back(u.a);
      ++rank;
      continue;
    }
    PairEntry e;
    e.rank_lo = rank;
    e.rank_hi = rank + 1;
    e.n1 = u.a;
    e.n2 = u.b;
    int d = u.b - u.a;
    e.separation = static_cast<int>(std::min<std::int64_t>(d, q - d));
    t.order.push_back(u.a);
    t.order.push_back(u.b);
    t.rank_pair[rank] = t.rank_pair[rank + 1] = static_cast<int>(t.pairs.size());
    t.pairs.push_back(e);
    rank += 2;
  }
  std::sort(t.singletons.begin(), t.singletons.end());
  return t;
}

std::optional<int> chern_pairing(const PairTable& table, int r) {
  const int q = static_cast<int>(table.flux.q);
  if (r < 1 || r >= q) throw std::invalid_argument("chern_pairing: r outside 1..q-1");
  int a = table.rank_pair[r - 1], b = table.rank_pair[r];
  if (a < 0 || a != b) return std::nullopt;
  return table.pairs[a].separation;
}

std::optional<int> chern_pairing(const RationalFlux& flux, double phi, int r) {
  return chern_pairing(pairing_table(flux, phi), r);
}

double doublet_phase(const RationalFlux& flux, int r) {
  for (double phi : {0.0, 0.5 / static_cast<double>(flux.q)})
    if (chern_pairing(flux, phi, r)) return phi;
  throw NumericalError("doublet_phase: no symmetric phase brackets gap " + std::to_string(r));
}

LocalizationCenters localization_centers(const RationalFlux& flux, double lambda, int r, Side side, double min_lambda) {
  if (lambda < min_lambda)
    throw std::invalid_argument("localization_centers: lambda below " + std::to_string(min_lambda) +
                                " is not in the localized doublet regime");
  LocalizationCenters lc;
  lc.state = band_edge_state(flux, lambda, doublet_phase(flux, r), r, side);
  Eigen::VectorXd a = lc.state.amplitudes.cwiseAbs();
  std::vector<int> idx(a.size());
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return a(x) > a(y); });
  lc.n1 = std::min(idx[0], idx[1]);
  lc.n2 = std::max(idx[0], idx[1]);
  lc.weight = a(lc.n1) * a(lc.n1) + a(lc.n2) * a(lc.n2);
  int d = lc.n2 - lc.n1;
  lc.separation = std::min<int>(d, static_cast<int>(flux.q) - d);
  if (!(lc.weight > 0.9))
    throw NumericalError("localization_centers: combined weight " + std::to_string(lc.weight) +
                         " <= 0.9, not in localized doublet regime");
  return lc;
}

}  // namespace quasitop
