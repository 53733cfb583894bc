/// Per-gap Chern numbers: plaquette Berry flux, Diophantine label, large-lambda pairing.
#pragma once

#include <optional>
#include <vector>

#include "quasitop/kernels/sweep.hpp"
#include "quasitop/spectra.hpp"

namespace quasitop {

// n_theta = 8, n_phi = max(32, 2q): the spectrum repeats with period 1/q in phi.
GridSpec default_chern_grid(const RationalFlux& flux);
GridSpec doubled(const GridSpec& g);

// Plaquette sums on one grid, no doubling check.
struct BerryFluxes {
  GridSpec grid;
  std::vector<double> gap_flux;   // index r-1, r = 1..q; projector onto the lowest r bands, in units of 2 pi
  std::vector<double> band_flux;  // index l, single-band projector
  std::vector<double> level_min;  // per level over the grid
  std::vector<double> level_max;
};

BerryFluxes berry_fluxes(const RationalFlux& flux, double lambda, const GridSpec& grid, Exec exec = Exec::Parallel);

struct ChernTable {
  GridSpec grid;
  std::vector<std::optional<int>> gap_chern;  // index r-1, r = 1..q-1; empty when closed
  std::vector<double> gap_width;              // grid estimate
  std::vector<std::optional<int>> band_chern; // empty when the band touches a neighbour
};

// Computes on grid and doubled(grid); throws NumericalError if any open-gap integer changes.
ChernTable chern_table(const RationalFlux& flux, double lambda, const GridSpec& grid, Exec exec = Exec::Parallel,
                       double closed_tol = 1e-10);

// One gap, certified by doubling. Throws on closed gap or unstable grid.
int chern_berry(const RationalFlux& flux, double lambda, int r, const GridSpec& grid, Exec exec = Exec::Parallel);
int chern_berry(const RationalFlux& flux, double lambda, int r);

int chern_diophantine(const RationalFlux& flux, int r);

struct PairEntry {
  int rank_lo = 0;  // ranks in ascending V order
  int rank_hi = 0;
  int n1 = 0;       // n1 < n2
  int n2 = 0;
  int separation = 0;  // min(|n1 - n2|, q - |n1 - n2|)
};

struct PairTable {
  RationalFlux flux;
  double phi = 0;
  std::vector<int> order;      // sites by ascending V
  std::vector<int> rank_pair;  // rank -> index into pairs, -1 for singletons
  std::vector<PairEntry> pairs;
  std::vector<int> singletons;
};

// Exact pairs exist only at phi = s / (2q); other phases throw std::invalid_argument.
// lambda does not change the table (ranks only depend on the cosine).
PairTable pairing_table(const RationalFlux& flux, double phi, double lambda = 1.0);

// |C_r| from the pair straddling the cut between rank r-1 and rank r; empty when
// the cut falls next to a singleton or between two different pairs.
std::optional<int> chern_pairing(const PairTable& table, int r);
std::optional<int> chern_pairing(const RationalFlux& flux, double phi, int r);

// The symmetric phase in {0, 1/(2q)} whose pair table straddles gap r.
double doublet_phase(const RationalFlux& flux, int r);

struct LocalizationCenters {
  int n1 = 0;
  int n2 = 0;
  double weight = 0;  // |psi_n1|^2 + |psi_n2|^2
  int separation = 0;
  StateProfile state;
};

// Two dominant sites of the band-edge state at the doublet phase of gap r.
// Requires lambda >= min_lambda and combined weight > 0.9 (NumericalError otherwise).
LocalizationCenters localization_centers(const RationalFlux& flux, double lambda, int r, Side side,
                                         double min_lambda = 8.0);

}  // namespace quasitop
