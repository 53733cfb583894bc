#include "quasitop/approximant.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace quasitop {

RationalFlux make_flux(std::int64_t p, std::int64_t q) {
  if (q < 2 || p <= 0 || p >= q)
    throw std::invalid_argument("flux needs 0 < p < q, got " + std::to_string(p) + "/" + std::to_string(q));
  if (std::gcd(p, q) != 1)
    throw std::invalid_argument("flux " + std::to_string(p) + "/" + std::to_string(q) + " is not reduced");
  return {p, q};
}

std::int64_t fibonacci(int n) {
  if (n < 0) throw std::invalid_argument("fibonacci: negative index");
  if (n > 90) throw std::overflow_error("fibonacci: n > 90 overflows 64-bit");
  std::int64_t a = 0, b = 1;
  for (int i = 0; i < n; ++i) {
    std::int64_t c = a + b;
    a = b;
    b = c;
  }
  return a;
}

RationalFlux golden_approximant(int n) {
  if (n < 3) throw std::invalid_argument("golden_approximant: n must be >= 3");
  return make_flux(fibonacci(n - 1), fibonacci(n));
}

int fibonacci_index(std::int64_t q) {
  for (int m = 2; m <= 90; ++m) {
    std::int64_t f = fibonacci(m);
    if (f == q) return m;
    if (f > q) break;
  }
  return -1;
}

std::int64_t mod_inverse(std::int64_t p, std::int64_t q) {
  // extended Euclid
  std::int64_t r0 = wrap_mod(p, q), r1 = q, s0 = 1, s1 = 0;
  while (r1 != 0) {
    std::int64_t t = r0 / r1;
    std::int64_t r2 = r0 - t * r1;
    std::int64_t s2 = s0 - t * s1;
    r0 = r1; r1 = r2;
    s0 = s1; s1 = s2;
  }
  if (r0 != 1) throw std::invalid_argument("mod_inverse: gcd(p, q) != 1");
  return wrap_mod(s0, q);
}

std::int64_t mod_solve(std::int64_t p, std::int64_t q, std::int64_t r) {
  if (q < 2) throw std::invalid_argument("mod_solve: q < 2");
  if (std::gcd(p, q) != 1) throw std::invalid_argument("mod_solve: gcd(p, q) != 1");
  if (r < 1 || r > q - 1) throw std::invalid_argument("mod_solve: r outside 1..q-1");
  auto prod = static_cast<__int128>(mod_inverse(p, q)) * wrap_mod(r, q);
  auto c = static_cast<std::int64_t>(prod % q);
  if (2 * c == q) throw std::domain_error("ambiguous label");
  return 2 * c > q ? c - q : c;
}

}  // namespace quasitop
