#include "quasitop/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace quasitop {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite and >= 0");
}
}  // namespace

double wrap_unit(double x) {
  double y = x - std::floor(x);
  return y >= 1.0 ? 0.0 : y;
}

double wrap_angle(double theta) {
  double y = std::fmod(theta, two_pi);
  if (y < 0) y += two_pi;
  return y >= two_pi ? 0.0 : y;
}

double potential(const RationalFlux& flux, double lambda, double phi, std::int64_t n) {
  double frac = static_cast<double>(wrap_mod(flux.p * n, flux.q)) / static_cast<double>(flux.q);
  return 2.0 * lambda * std::cos(two_pi * (frac + phi));
}

std::vector<double> potential_profile(const RationalFlux& flux, double lambda, double phi, int length) {
  std::vector<double> v(length);
  for (int n = 0; n < length; ++n) v[n] = potential(flux, lambda, phi, n);
  return v;
}

ChainMatrix build_harper(const HarperParams& params, int length) {
  check_lambda(params.lambda);
  if (length < 2) throw std::invalid_argument("build_harper: length < 2");
  if (params.boundary == Boundary::Bloch && length != params.flux.q)
    throw std::invalid_argument("build_harper: Bloch boundary needs length == q (" + std::to_string(params.flux.q) +
                                "), got " + std::to_string(length));
  ChainMatrix h = ChainMatrix::Zero(length, length);
  double phi = wrap_unit(params.phi);
  for (int n = 0; n < length; ++n) h(n, n) = potential(params.flux, params.lambda, phi, n);
  for (int n = 0; n + 1 < length; ++n) h(n, n + 1) = h(n + 1, n) = 1.0;
  if (params.boundary == Boundary::Bloch) {
    double th = wrap_angle(params.theta);
    std::complex<double> e = th == std::numbers::pi ? std::complex<double>(-1.0, 0.0) : std::polar(1.0, th);
    // length 2: corners coincide with the bond, so they add up
    h(length - 1, 0) += std::conj(e);
    h(0, length - 1) += e;
  }
  return h;
}

Eigen::MatrixXd build_harper_real(const HarperParams& params, int length) {
  ChainMatrix h = build_harper(params, length);
  if (h.imag().cwiseAbs().maxCoeff() > 1e-12)
    throw std::invalid_argument("build_harper_real: matrix is not real (theta not in {0, pi})");
  return h.real();
}

Couplings bdg_couplings(double delta) {
  double xi = std::asinh(delta / 2.0);
  return {xi, std::exp(-xi), std::exp(xi)};
}

Eigen::MatrixXd bdg_block(const BdgParams& params) {
  check_lambda(params.lambda);
  const int L = params.length;
  if (L < 2) throw std::invalid_argument("build_bdg: length < 2");
  Couplings c = bdg_couplings(params.delta);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(L, L);
  double phi = wrap_unit(params.phi);
  for (int n = 0; n < L; ++n) a(n, n) = potential(params.flux, params.lambda, phi, n);
  for (int n = 0; n + 1 < L; ++n) {
    a(n, n + 1) += c.jx;
    a(n + 1, n) += c.jy;
  }
  if (params.boundary == BdgBoundary::Periodic) {
    a(L - 1, 0) += c.jx;
    a(0, L - 1) += c.jy;
  }
  return a;
}

Eigen::MatrixXd build_bdg(const BdgParams& params) {
  Eigen::MatrixXd a = bdg_block(params);
  const int L = params.length;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * L, 2 * L);
  // g-row n reads f via A, f-row n reads g via A^T
  for (int n = 0; n < L; ++n)
    for (int m = 0; m < L; ++m) {
      if (a(n, m) == 0.0) continue;
      h(2 * n + 1, 2 * m) = a(n, m);
      h(2 * m, 2 * n + 1) = a(n, m);
    }
  return h;
}

Eigen::MatrixXd Tridiagonal::dense() const {
  const int n = size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = diag[i];
  for (int i = 0; i + 1 < n; ++i) {
    m(i, i + 1) = super[i];
    m(i + 1, i) = sub[i];
  }
  return m;
}

Tridiagonal build_fluctuation(double lambda, const RationalFlux& flux, double phi, int length) {
  if (!(lambda > 1.0)) throw std::invalid_argument("build_fluctuation: lambda must be > 1");
  if (length < 2) throw std::invalid_argument("build_fluctuation: length < 2");
  double xi = std::log(lambda);
  Tridiagonal t;
  t.diag = potential_profile(flux, lambda, wrap_unit(phi), length);
  t.super.assign(length - 1, std::exp(-xi));
  t.sub.assign(length - 1, std::exp(xi));
  return t;
}

}  // namespace quasitop
