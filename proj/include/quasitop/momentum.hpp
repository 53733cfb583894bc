/// Momentum distributions of single states and filled phi-averaged Fermi seas.
///
/// DFT convention: n(k_j) = |sum_n psi_n e^{-2 pi i j n / q} / sqrt(q)|^2, k_j = 2 pi j / q.
#pragma once

#include <string>
#include <vector>

#include "quasitop/kernels/sweep.hpp"
#include "quasitop/spectra.hpp"

namespace quasitop {

struct MomentumDistribution {
  std::vector<double> k;  // 2 pi j / q, j = 0..q-1
  std::vector<double> n;
  std::vector<double> density;  // real-space counterpart, same averaging; sum equals sum n
  double particles = 0;   // occupied states per (theta, phi) sample
  int gap = 0;            // r, 0 for a single state
  int theta_samples = 0;
  int phi_samples = 0;
  std::string filling;
};

MomentumDistribution state_momentum(const Eigen::VectorXcd& psi);

struct SeaOptions {
  int phi_samples = 8;
  int theta_samples = 16;
};

// Lowest r levels at theta_i = 2 pi (i + 1/2) / n_theta and phi_j = j / n_phi,
// averaged; sum n(k) = r. Throws NumericalError if gap r closes on the samples.
MomentumDistribution sea_momentum(const RationalFlux& flux, double lambda, int r, const SeaOptions& opt = {},
                                  Exec exec = Exec::Parallel);

// Lowest gap whose Diophantine label equals chern; throws std::invalid_argument if none.
int gap_for_chern(const RationalFlux& flux, int chern);
int half_filling_gap(const RationalFlux& flux);

struct Wiggles {
  int count = 0;  // local maxima of the 3-point smoothed n(k) strictly inside 0 < k < pi
  double total_variation = 0;  // sum_j |n_{j+1} - n_j|, periodic
};

Wiggles wiggle_metric(const MomentumDistribution& dist);
Wiggles wiggle_metric(const std::vector<double>& n);

}  // namespace quasitop
