#include "quasitop/banded.hpp"

#include <lapacke.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "quasitop/errors.hpp"

namespace quasitop {

SymBand SymBand::from_dense(const Eigen::MatrixXd& m, int kd) {
  SymBand b;
  b.n = static_cast<int>(m.rows());
  b.kd = kd;
  const int ld = kd + 1;
  b.ab.assign(static_cast<std::size_t>(ld) * b.n, 0.0);
  for (int j = 0; j < b.n; ++j)
    for (int i = std::max(0, j - kd); i <= j; ++i) b.ab[static_cast<std::size_t>(j) * ld + kd + i - j] = m(i, j);
  for (int j = 0; j < b.n; ++j)
    for (int i = 0; i < b.n; ++i)
      if (std::abs(i - j) > kd && m(i, j) != 0.0) throw std::invalid_argument("SymBand: entry outside the band");
  return b;
}

double SymBand::get(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (j - i > kd) return 0.0;
  return ab[static_cast<std::size_t>(j) * (kd + 1) + kd + i - j];
}

Eigen::VectorXd band_eigenvalues(const SymBand& b) {
  std::vector<double> ab = b.ab;
  Eigen::VectorXd w(b.n);
  lapack_int info = LAPACKE_dsbev(LAPACK_COL_MAJOR, 'N', 'U', b.n, b.kd, ab.data(), b.kd + 1, w.data(), nullptr, 1);
  if (info != 0) throw NumericalError("dsbev failed, info=" + std::to_string(info));
  return w;
}

Eigen::VectorXd band_inverse_iteration(const SymBand& b, double shift, int iterations) {
  const int n = b.n, kl = b.kd, ku = b.kd;
  const int ld = 2 * kl + ku + 1;
  double scale = 0;
  for (double x : b.ab) scale = std::max(scale, std::abs(x));
  std::vector<double> gb;
  std::vector<lapack_int> piv(n);
  double sigma = shift;
  for (int attempt = 0;; ++attempt) {
    gb.assign(static_cast<std::size_t>(ld) * n, 0.0);
    // general band storage: row kl + ku + i - j of column j
    for (int j = 0; j < n; ++j)
      for (int i = std::max(0, j - ku); i <= std::min(n - 1, j + kl); ++i) {
        double v = b.get(i, j) - (i == j ? sigma : 0.0);
        gb[static_cast<std::size_t>(j) * ld + kl + ku + i - j] = v;
      }
    lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n, n, kl, ku, gb.data(), ld, piv.data());
    if (info == 0) break;
    if (info < 0 || attempt > 3) throw NumericalError("dgbtrf failed, info=" + std::to_string(info));
    sigma += 1e-13 * std::max(1.0, scale) * std::pow(10.0, attempt);  // exactly singular shift
  }
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = 1.0 + 0.5 * std::sin(1.0 + 0.37 * i);
  x.normalize();
  for (int it = 0; it < iterations; ++it) {
    lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n, kl, ku, 1, gb.data(), ld, piv.data(), x.data(), n);
    if (info != 0) throw NumericalError("dgbtrs failed, info=" + std::to_string(info));
    x.normalize();
  }
  return x;
}

}  // namespace quasitop
