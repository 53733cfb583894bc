/// Harper chain, superconducting (BdG) chain and the tridiagonal fluctuation matrix.
///
/// Convention: H psi_n = psi_{n+1} + psi_{n-1} + V_n psi_n with
/// V_n = 2 lambda cos(2 pi (p n / q + phi)). Bloch corners carry
/// H[q-1][0] = e^{-i theta}, H[0][q-1] = e^{+i theta}, i.e. psi_{n+q} = e^{-i theta} psi_n.
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "quasitop/approximant.hpp"

namespace quasitop {

enum class Boundary { Open, Bloch };

struct HarperParams {
  double lambda = 1.0;
  RationalFlux flux;
  double phi = 0.0;
  Boundary boundary = Boundary::Bloch;
  double theta = 0.0;  // total Bloch phase over one period, theta = k q
};

using ChainMatrix = Eigen::MatrixXcd;

double wrap_unit(double x);      // into [0, 1)
double wrap_angle(double theta);  // into [0, 2 pi)

// V_n with p n reduced mod q first, so symmetric pairs are bit-exact.
double potential(const RationalFlux& flux, double lambda, double phi, std::int64_t n);
std::vector<double> potential_profile(const RationalFlux& flux, double lambda, double phi, int length);

ChainMatrix build_harper(const HarperParams& params, int length);
// Real version for Open boundaries and theta in {0, pi}.
Eigen::MatrixXd build_harper_real(const HarperParams& params, int length);

enum class BdgBoundary { Open, Periodic };

struct BdgParams {
  double delta = 0.02;
  double lambda = 1.0;
  RationalFlux flux;
  double phi = 0.0;
  int length = 89;
  BdgBoundary boundary = BdgBoundary::Open;
};

struct Couplings {
  double xi;
  double jx;  // e^{-xi}
  double jy;  // e^{+xi}
};

// xi = asinh(delta / 2), so jx jy = 1 and jy - jx = delta.
Couplings bdg_couplings(double delta);

// 2L x 2L real symmetric, interleaved (f_0, g_0, f_1, g_1, ...).
//   E g_n = jx f_{n+1} + jy f_{n-1} + V_n f_n
//   E f_n = jy g_{n+1} + jx g_{n-1} + V_n g_n
Eigen::MatrixXd build_bdg(const BdgParams& params);

// The L x L block A with E g = A f (A f)_n = jx f_{n+1} + jy f_{n-1} + V_n f_n.
Eigen::MatrixXd bdg_block(const BdgParams& params);

struct Tridiagonal {
  std::vector<double> diag;
  std::vector<double> super;  // (i, i+1)
  std::vector<double> sub;    // (i+1, i)

  int size() const { return static_cast<int>(diag.size()); }
  Eigen::MatrixXd dense() const;
};

// super e^{-xi}, sub e^{+xi}, diag V_n, xi = ln lambda. Requires lambda > 1.
Tridiagonal build_fluctuation(double lambda, const RationalFlux& flux, double phi, int length);

}  // namespace quasitop
