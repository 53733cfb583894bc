// Independent reference computations used only by tests.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace oracle {

// C in (-q/2, q/2) with p C = r mod q, by exhaustive search.
inline std::optional<long> brute_mod_solve(long p, long q, long r) {
  std::optional<long> hit;
  for (long c = -q; c <= q; ++c) {
    if (2 * std::abs(c) >= q) continue;
    if ((((p * c - r) % q) + q) % q == 0) {
      if (hit && *hit != c) return std::nullopt;
      hit = c;
    }
  }
  return hit;
}

// Cyclic Jacobi on a real symmetric matrix (row-major n x n), ascending eigenvalues.
inline std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n) {
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(at(p, q)) < 1e-300) continue;
        double theta = (at(q, q) - at(p, p)) / (2 * at(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = at(k, p), akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = at(p, k), aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = at(i, i);
  std::sort(w.begin(), w.end());
  return w;
}

// Hermitian H = X + iY through the real embedding [[X, -Y], [Y, X]]; each eigenvalue appears twice.
inline std::vector<double> hermitian_eigenvalues(const std::vector<std::complex<double>>& h, int n) {
  std::vector<double> big(static_cast<std::size_t>(4) * n * n);
  const int m = 2 * n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto z = h[static_cast<std::size_t>(i) * n + j];
      big[static_cast<std::size_t>(i) * m + j] = z.real();
      big[static_cast<std::size_t>(i + n) * m + j + n] = z.real();
      big[static_cast<std::size_t>(i) * m + j + n] = -z.imag();
      big[static_cast<std::size_t>(i + n) * m + j] = z.imag();
    }
  auto w = jacobi_eigenvalues(big, m);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = 0.5 * (w[2 * i] + w[2 * i + 1]);
  return out;
}

// Harper Bloch matrix written out independently, row-major.
inline std::vector<std::complex<double>> harper_bloch(long p, long q, double lambda, double phi, double theta) {
  const double pi = 3.14159265358979323846;
  std::vector<std::complex<double>> h(static_cast<std::size_t>(q * q));
  for (long n = 0; n < q; ++n) {
    h[n * q + n] = 2 * lambda * std::cos(2 * pi * (static_cast<double>(p * n % q) / q + phi));
    if (n + 1 < q) h[n * q + n + 1] = h[(n + 1) * q + n] = 1.0;
  }
  h[(q - 1) * q] += std::polar(1.0, -theta);
  h[q - 1] += std::polar(1.0, theta);
  return h;
}

// J with J - 1/J = delta, J > 0.
inline double quadratic_jy(double delta) { return 0.5 * (delta + std::sqrt(delta * delta + 4)); }

inline long fib(int n) {
  long a = 0, b = 1;
  for (int i = 0; i < n; ++i) {
    long c = a + b;
    a = b;
    b = c;
  }
  return a;
}

}  // namespace oracle
