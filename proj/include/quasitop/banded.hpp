/// Symmetric band matrices through LAPACK (dsbev, dgbtrf/dgbtrs).
#pragma once

#include <Eigen/Dense>
#include <vector>

namespace quasitop {

struct SymBand {
  int n = 0;
  int kd = 0;
  std::vector<double> ab;  // LAPACK upper storage, (kd + 1) x n column-major

  static SymBand from_dense(const Eigen::MatrixXd& m, int kd);
  double get(int i, int j) const;
};

// All eigenvalues, ascending.
Eigen::VectorXd band_eigenvalues(const SymBand& b);

// Inverse iteration for the eigenvector nearest shift.
Eigen::VectorXd band_inverse_iteration(const SymBand& b, double shift, int iterations = 4);

}  // namespace quasitop
