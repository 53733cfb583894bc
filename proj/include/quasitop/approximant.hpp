/// Fibonacci numbers, golden-mean approximants and the gap-labeling solve.
#pragma once

#include <cstdint>
#include <vector>

namespace quasitop {

struct RationalFlux {
  std::int64_t p = 1;
  std::int64_t q = 2;

  double sigma() const { return static_cast<double>(p) / static_cast<double>(q); }
};

// Validates gcd(p, q) = 1 and 0 < p < q.
RationalFlux make_flux(std::int64_t p, std::int64_t q);

// F_0 = 0, F_1 = 1. Throws std::overflow_error past n = 90.
std::int64_t fibonacci(int n);

// F_{n-1}/F_n, n >= 3.
RationalFlux golden_approximant(int n);

// Index m with F_m = q, or -1.
int fibonacci_index(std::int64_t q);

// Unique C with p*C = r (mod q) and |C| < q/2.
// Even q where only |C| = q/2 solves it: std::domain_error("ambiguous label").
std::int64_t mod_solve(std::int64_t p, std::int64_t q, std::int64_t r);

// Inverse of p modulo q.
std::int64_t mod_inverse(std::int64_t p, std::int64_t q);

inline std::int64_t wrap_mod(std::int64_t a, std::int64_t q) {
  std::int64_t m = a % q;
  return m < 0 ? m + q : m;
}

}  // namespace quasitop
