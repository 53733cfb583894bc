/// Zero-energy physics of the superconducting chain: Majorana modes, the ghost at lambda_c, the fluctuation-matrix link.
#pragma once

#include <string>
#include <vector>

#include "quasitop/kernels/sweep.hpp"
#include "quasitop/model.hpp"
#include "quasitop/momentum.hpp"
#include "quasitop/states.hpp"

namespace quasitop {

enum class BdgMethod { Auto, Dense, Banded };

struct BdgSolution {
  BdgParams params;
  Couplings couplings{};
  Eigen::VectorXd spectrum;  // ascending
  double zero_energy = 0;    // min |E|
  // interleaved (f_0, g_0, ...), f and g parts normalized separately and
  // scaled by 1/sqrt(2); for a near-degenerate +-E pair this removes the
  // arbitrary mixing inside the pair
  Eigen::VectorXd zero_mode;
  double edge_weight = 0;
  double ipr = 0;
  double gap_at_zero = 0;
};

BdgSolution solve_bdg(const BdgParams& params, BdgMethod method = BdgMethod::Auto);

// |f_n|^2 + |g_n|^2 for an interleaved two-component state.
Eigen::VectorXd site_weights(const Eigen::VectorXd& interleaved);

// Weight in the outer max(1, round(fraction L)) sites at each end.
double edge_weight(const Eigen::VectorXd& interleaved, double fraction = 0.1);
double bdg_ipr(const Eigen::VectorXd& interleaved);

struct ScanRow {
  double lambda = 0;
  double min_abs_e = 0;
  double edge_weight = 0;
  double ipr = 0;
  int peak_site = 0;  // site of largest weight
};

struct PhaseScan {
  std::vector<ScanRow> rows;
  double lambda_c_estimate = 0;  // argmax of 1 / ipr
  double jy = 0;
};

std::vector<double> linspace(double lo, double hi, int steps);

PhaseScan phase_scan(double delta, const RationalFlux& flux, double phi, int length, const std::vector<double>& lambdas,
                     Exec exec = Exec::Parallel, BdgMethod method = BdgMethod::Auto);

struct GhostReport {
  double lambda_c = 0;
  int length = 0;
  int chern_gap = 0;
  int chern = 0;
  Eigen::VectorXd ghost_profile;  // sqrt(site weight), length L
  Eigen::VectorXd chern_profile;  // |psi|, length q
  std::vector<int> ghost_doublets;  // separations of doublet groups
  std::vector<int> chern_doublets;
  bool ghost_has_separation_4 = false;
  double overlap = 0;            // sum_n ghost_n chern_n on the common sites
  std::vector<int> shared_offsets;  // peak offsets from the centre found in both
  int ghost_offsets = 0;
  int chern_offsets = 0;
  MomentumDistribution ghost_momentum;
  MomentumDistribution chern_sea_momentum;
  Wiggles ghost_wiggles;
  Wiggles chern_wiggles;
};

// lambda = lambda_c = J_y; Harper comparison state is the Chern-4 gap edge at lambda = 1.
GhostReport ghost_shadow_report(const RationalFlux& flux, double delta, double phi, int length,
                                const SeaOptions& sea = {});

struct FluctuationReport {
  double lambda = 0;
  double xi = 0;
  double delta = 0;
  double spectral_mismatch = 0;  // max |E_fluct - E_harper|
  double bdg_energy = 0;
  double residual_f = 0;  // max_n |jx f_{n+1} + jy f_{n-1} + V f_n - E g_n|
  double residual_g = 0;
  Eigen::VectorXd envelope;       // e^{-n xi} eta_n, normalized
  Eigen::VectorXd harper_state;   // open Harper eigenvector nearest E = 0
  double harper_energy = 0;
  double envelope_overlap = 0;    // |<|envelope|, |harper|>|
};

// Eigenvalues of a tridiagonal with sub * super > 0 by Sturm bisection, ascending.
std::vector<double> sturm_eigenvalues(const Tridiagonal& t, double tol = 1e-14);

FluctuationReport fluctuation_correspondence(double lambda, const RationalFlux& flux, double phi, int length);

}  // namespace quasitop
