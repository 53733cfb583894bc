/// Eigensystems, bands and gaps over the (theta, phi) torus, band-edge states.
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "quasitop/kernels/sweep.hpp"
#include "quasitop/model.hpp"

namespace quasitop {

struct EigenSystem {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors;  // columns
};

// Full Hermitian eigendecomposition. Throws NumericalError on failure.
EigenSystem diagonalize(const ChainMatrix& h);
Eigen::VectorXd eigenvalues(const ChainMatrix& h);
Eigen::VectorXd eigenvalues(const Eigen::MatrixXd& h);

struct GridSpec {
  int n_theta = 32;
  int n_phi = 32;
  double phi_origin = 0.0;
};

// theta_i = 2 pi i / n_theta, phi_j = phi_origin + j / n_phi
double grid_theta(const GridSpec& g, int i);
double grid_phi(const GridSpec& g, int j);

struct BandExtremum {
  double theta = 0;
  double phi = 0;
  double energy = 0;
};

struct BandStructure {
  RationalFlux flux;
  double lambda = 0;
  GridSpec grid;
  // row = j * n_theta + i (phi-major), column = level
  Eigen::MatrixXd levels;
  std::vector<BandExtremum> band_min;
  std::vector<BandExtremum> band_max;
};

BandStructure band_structure(const RationalFlux& flux, double lambda, const GridSpec& grid, Exec exec = Exec::Parallel);

struct GapRecord {
  int r = 0;
  double lower_edge = 0;  // top of band r
  double upper_edge = 0;  // bottom of band r + 1
  double width = 0;
  bool open = false;
  std::optional<int> chern;
};

std::vector<GapRecord> gap_records(const BandStructure& bands, double closed_tol = 1e-12);

enum class Side { Lower, Upper };

// One eigenstate plus where it came from.
struct StateProfile {
  Eigen::VectorXcd amplitudes;
  HarperParams params;  // boundary, theta and phi of the state
  int level = 0;        // sorted level index at params.theta
  int gap = -1;         // gap index r it borders, -1 if none
  Side side = Side::Lower;
  double energy = 0;

  int size() const { return static_cast<int>(amplitudes.size()); }
};

// Rotate so the largest-magnitude amplitude is real positive.
void fix_gauge(Eigen::VectorXcd& v);

// Lower: top of band r (level r-1, maximised over theta); Upper: bottom of
// band r+1 (level r, minimised over theta). r = 0 with Upper is the ground state.
// Throws NumericalError if 1 <= r <= q-1 and the gap is closed at this phi.
StateProfile band_edge_state(const RationalFlux& flux, double lambda, double phi, int r, Side side);

// Level l at fixed phi as a function of theta, extremised over [0, 2 pi).
struct ThetaExtremum {
  double theta;
  double energy;
};
ThetaExtremum extremize_level(const RationalFlux& flux, double lambda, double phi, int level, bool maximize);

double ipr(const Eigen::VectorXcd& v);

// Global min/max of the spectrum over the sampled torus.
std::pair<double, double> spectrum_edges(const BandStructure& bands);

}  // namespace quasitop
