#include "quasitop/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace quasitop {

using cd = std::complex<double>;

namespace {

int reduced_distance(int a, int b, int q) {
  int d = std::abs(a - b) % q;
  return std::min(d, q - d);
}

// signed x in (-q/2, q/2]
double signed_offset(double x, int q) {
  double y = std::fmod(x, static_cast<double>(q));
  if (y < 0) y += q;
  if (y > 0.5 * q) y -= q;
  return y;
}

bool is_fibonacci(long v) {
  if (v < 0) return false;
  for (int m = 0; m <= 90; ++m) {
    std::int64_t f = fibonacci(m);
    if (f == v) return true;
    if (f > v) break;
  }
  return false;
}

// reflection about c in {0, q}; R psi_n = psi_{(c - n) mod q} times the Bloch twist
Eigen::VectorXcd reflect(const Eigen::VectorXcd& psi, double theta, bool half) {
  const int q = static_cast<int>(psi.size());
  Eigen::VectorXcd out(q);
  cd tw = std::polar(1.0, theta);
  for (int n = 0; n < q; ++n) {
    int m = static_cast<int>(wrap_mod(-n, q));
    if (!half) out(n) = n == 0 ? psi(0) : tw * psi(m);  // psi_{-n} = e^{i theta} psi_{q-n}
    else out(n) = n == 0 ? std::conj(tw) * psi(0) : psi(m);  // psi_q = e^{-i theta} psi_0
  }
  return out;
}

}  // namespace

const char* to_string(ParityCenter c) {
  switch (c) {
    case ParityCenter::Zero: return "zero";
    case ParityCenter::HalfQ: return "half_q";
    default: return "none";
  }
}

const char* to_string(OffsetClass c) {
  switch (c) {
    case OffsetClass::Central: return "central";
    case OffsetClass::Fibonacci: return "fibonacci";
    case OffsetClass::FibonacciShifted: return "fibonacci_pm_c";
    default: return "other";
  }
}

ParityResult parity_check(const StateProfile& state, double accept) {
  const Eigen::VectorXcd& psi = state.amplitudes;
  const int q = static_cast<int>(psi.size());
  const double theta = state.params.boundary == Boundary::Bloch ? state.params.theta : 0.0;

  double best_res[2];
  int best_s[2];
  for (int h = 0; h < 2; ++h) {
    Eigen::VectorXcd r = reflect(psi, theta, h == 1);
    double plus = (psi - r).squaredNorm(), minus = (psi + r).squaredNorm();
    best_s[h] = plus <= minus ? 1 : -1;
    best_res[h] = std::min(plus, minus);
  }
  Eigen::Index peak = 0;
  psi.cwiseAbs().maxCoeff(&peak);
  int h = best_res[0] <= best_res[1] ? 0 : 1;
  if (std::abs(best_res[0] - best_res[1]) <= 1e-12) {
    double d0 = std::min<double>(static_cast<double>(peak), static_cast<double>(q - peak));
    double dh = std::abs(static_cast<double>(peak) - 0.5 * q);
    h = d0 <= dh ? 0 : 1;
  }

  ParityResult out;
  out.residual = best_res[h];
  out.parity = best_s[h];
  out.center = out.residual < accept ? (h == 0 ? ParityCenter::Zero : ParityCenter::HalfQ) : ParityCenter::None;

  // dominant mirror pair under the chosen reflection
  const int c = h == 0 ? 0 : q;
  double amax = -1;
  for (int n = 0; n < q; ++n) {
    int m = static_cast<int>(wrap_mod(c - n, q));
    if (m == n) continue;
    if (std::abs(psi(n)) > amax) {
      amax = std::abs(psi(n));
      out.n1 = std::min(n, m);
      out.n2 = std::max(n, m);
    }
  }
  if (out.n1 >= 0)
    out.pair_mismatch = std::min(std::abs(psi(out.n1) - psi(out.n2)), std::abs(psi(out.n1) + psi(out.n2)));
  return out;
}

std::vector<int> local_maxima(const Eigen::VectorXd& a) {
  const int q = static_cast<int>(a.size());
  const double floor = 1e-12 * a.maxCoeff();
  std::vector<int> out;
  for (int n = 0; n < q; ++n) {
    double l = a((n - 1 + q) % q), r = a((n + 1) % q);
    if (a(n) >= l && a(n) >= r && a(n) > floor) out.push_back(n);
  }
  return out;
}

std::vector<int> peak_candidates(const Eigen::VectorXd& a, double pair_ratio) {
  const int q = static_cast<int>(a.size());
  std::vector<int> mx = local_maxima(a);
  std::vector<bool> take(q, false);
  for (int m : mx) {
    take[m] = true;
    for (int dir : {-1, 1}) {
      int n = static_cast<int>(wrap_mod(m + dir, q));
      int other = static_cast<int>(wrap_mod(n + dir, q));
      if (a(n) >= pair_ratio * a(m) && a(n) >= a(other)) take[n] = true;
    }
  }
  std::vector<int> out;
  for (int n = 0; n < q; ++n)
    if (take[n]) out.push_back(n);
  return out;
}

PeakHierarchy detect_peaks(const Eigen::VectorXcd& psi, const PeakOptions& opt) {
  const Eigen::VectorXd a = psi.cwiseAbs();
  const int q = static_cast<int>(a.size());
  const double amax = a.maxCoeff();

  std::vector<Peak> peaks;
  for (int n : peak_candidates(a, opt.pair_ratio))
    if (a(n) >= opt.threshold * amax) peaks.push_back({n, a(n)});
  std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& x, const Peak& y) { return x.amplitude > y.amplitude; });

  // larger detected peak strictly inside the short arc between x and y
  auto blocked = [&](const Peak& x, const Peak& y) {
    double lim = std::min(x.amplitude, y.amplitude);
    int d = static_cast<int>(wrap_mod(y.site - x.site, q));
    int from = x.site, len = d;
    if (d > q - d) { from = y.site; len = q - d; }
    for (const Peak& z : peaks) {
      int off = static_cast<int>(wrap_mod(z.site - from, q));
      if (off > 0 && off < len && z.amplitude > lim) return true;
    }
    return false;
  };

  std::vector<bool> used(peaks.size(), false);
  PeakHierarchy ph;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    PeakGroup g;
    g.members.push_back(peaks[i]);
    int best = -1;
    for (std::size_t j = 0; j < peaks.size(); ++j) {
      if (used[j]) continue;
      if (peaks[j].amplitude < opt.pair_ratio * peaks[i].amplitude) continue;
      if (reduced_distance(peaks[i].site, peaks[j].site, q) > q / 4) continue;
      if (blocked(peaks[i], peaks[j])) continue;
      if (best < 0) { best = static_cast<int>(j); continue; }
      const Peak& b = peaks[best];
      if (peaks[j].amplitude > b.amplitude ||
          (peaks[j].amplitude == b.amplitude && reduced_distance(peaks[i].site, peaks[j].site, q) <
                                                    reduced_distance(peaks[i].site, b.site, q)))
        best = static_cast<int>(j);
    }
    if (best >= 0) {
      used[best] = true;
      g.members.push_back(peaks[best]);
      std::sort(g.members.begin(), g.members.end(), [](const Peak& x, const Peak& y) { return x.site < y.site; });
    }
    if (g.members.size() == 1) {
      g.midpoint = g.members[0].site;
    } else {
      int x = g.members[0].site, y = g.members[1].site;
      int d = y - x;
      g.separation = std::min(d, q - d);
      g.midpoint = d <= q - d ? x + 0.5 * d : y + 0.5 * (q - d);
      if (g.midpoint >= q) g.midpoint -= q;
      double lo = std::min(g.members[0].amplitude, g.members[1].amplitude);
      double hi = std::max(g.members[0].amplitude, g.members[1].amplitude);
      g.dimer = g.separation == 1 && lo >= 0.9 * hi;
    }
    g.intensity = 0;
    for (const Peak& p : g.members) g.intensity = std::max(g.intensity, p.amplitude);
    ph.groups.push_back(g);
  }
  if (ph.groups.empty()) return ph;

  // groups[0] holds the global maximum
  const PeakGroup centre = ph.groups[0];
  for (PeakGroup& g : ph.groups) {
    g.offset = signed_offset(g.midpoint - centre.midpoint, q);
    g.ratio = g.intensity / centre.intensity;
    double ao = std::abs(g.offset);
    long io = std::lround(ao);
    bool integral = std::abs(ao - static_cast<double>(io)) < 1e-9;
    int c = std::abs(opt.chern);
    if (&g == &ph.groups[0]) g.cls = OffsetClass::Central;
    else if (integral && is_fibonacci(io)) g.cls = OffsetClass::Fibonacci;
    else if (integral && c > 0 && (is_fibonacci(io + c) || is_fibonacci(io - c))) g.cls = OffsetClass::FibonacciShifted;
    else g.cls = OffsetClass::Other;
  }
  std::stable_sort(ph.groups.begin() + 1, ph.groups.end(), [](const PeakGroup& x, const PeakGroup& y) {
    if (std::abs(x.offset) != std::abs(y.offset)) return std::abs(x.offset) < std::abs(y.offset);
    return x.offset < y.offset;
  });
  ph.central = 0;
  return ph;
}

DoubletResult doublet_separation(const Eigen::VectorXcd& psi, double pair_ratio) {
  const Eigen::VectorXd a = psi.cwiseAbs();
  const int q = static_cast<int>(a.size());
  std::vector<int> mx = peak_candidates(a, pair_ratio);
  DoubletResult out;
  if (mx.size() < 2) return out;
  std::stable_sort(mx.begin(), mx.end(), [&](int x, int y) { return a(x) > a(y); });
  int x = mx[0], y = mx[1];
  if (a(y) < pair_ratio * a(x)) return out;
  int d = reduced_distance(x, y, q);
  if (d > q / 4) return out;
  out.found = true;
  out.separation = d;
  out.n1 = std::min(x, y);
  out.n2 = std::max(x, y);
  return out;
}

InvarianceResult peak_lambda_invariance(const RationalFlux& flux, int r, Side side, const std::vector<double>& lambdas,
                                        double phi) {
  InvarianceResult out;
  for (double lam : lambdas) {
    StateProfile s = band_edge_state(flux, lam, phi, r, side);
    Eigen::VectorXd a = s.amplitudes.cwiseAbs();
    std::vector<int> idx(a.size());
    for (int i = 0; i < static_cast<int>(idx.size()); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](int x, int y) { return a(x) > a(y); });
    out.sites.emplace_back(std::min(idx[0], idx[1]), std::max(idx[0], idx[1]));
  }
  out.invariant = !out.sites.empty();
  for (const auto& s : out.sites) out.invariant = out.invariant && s == out.sites.front();
  return out;
}

std::vector<Window> smooth_windows(const Eigen::VectorXcd& psi, int chern, double min_peak) {
  const Eigen::VectorXd a = psi.cwiseAbs();
  const int q = static_cast<int>(a.size());
  const double amax = a.maxCoeff();
  const int c = std::abs(chern);
  auto tag = [&](Window w) {
    w.fib_minus_c = c > 0 && is_fibonacci(w.length + c);
    return w;
  };
  std::vector<Window> out;
  if (amax - a.minCoeff() <= 1e-9 * amax) {
    out.push_back(tag({0, q, false}));
    return out;
  }
  std::vector<int> mx = local_maxima(a);
  if (mx.size() == 1) {
    out.push_back(tag({mx[0], q, false}));
    return out;
  }
  for (std::size_t k = 0; k < mx.size(); ++k) {
    int s = mx[k];
    int e = k + 1 < mx.size() ? mx[k + 1] : mx[0] + q;
    if (a(s) > min_peak * amax && a(e % q) > min_peak * amax) out.push_back(tag({s, e - s, false}));
  }
  return out;
}

std::vector<Window> smooth_windows_curvature(const Eigen::VectorXcd& psi, int chern, double rel) {
  const Eigen::VectorXd a = psi.cwiseAbs();
  const int q = static_cast<int>(a.size());
  Eigen::VectorXd d2(q);
  for (int n = 0; n < q; ++n) d2(n) = a((n + 1) % q) - 2 * a(n) + a((n - 1 + q) % q);
  double rms = std::sqrt(d2.squaredNorm() / q);
  std::vector<bool> smooth(q);
  for (int n = 0; n < q; ++n) smooth[n] = std::abs(d2(n)) <= rel * rms;
  const int c = std::abs(chern);
  std::vector<Window> out;
  if (std::all_of(smooth.begin(), smooth.end(), [](bool b) { return b; })) {
    out.push_back({0, q, c > 0 && is_fibonacci(q + c)});
    return out;
  }
  // start scanning just after a rough site so runs do not wrap
  int start = 0;
  while (smooth[start]) ++start;
  for (int k = 1; k <= q; ++k) {
    int n = (start + k) % q;
    if (!smooth[n]) continue;
    int len = 0;
    while (k <= q && smooth[(start + k) % q]) { ++len; ++k; }
    out.push_back({n, len, c > 0 && is_fibonacci(len + c)});
  }
  return out;
}

std::vector<ZetaEntry> subpeak_ratio_zeta(const Eigen::VectorXcd& psi, const RationalFlux& flux) {
  const Eigen::VectorXd a = psi.cwiseAbs();
  const int q = static_cast<int>(a.size());
  (void)flux;
  std::vector<int> centre;
  DoubletResult d = doublet_separation(psi);
  if (d.found) centre = {d.n1, d.n2};
  else {
    Eigen::Index c = 0;
    a.maxCoeff(&c);
    centre = {static_cast<int>(c)};
  }
  auto at = [&](int shift) {
    double v = 0;
    for (int c : centre) v = std::max(v, a(static_cast<int>(wrap_mod(c + shift, q))));
    return v;
  };
  const double base = at(0);
  std::vector<ZetaEntry> out;
  std::set<std::int64_t> seen;
  for (int m = 1; m <= 90; ++m) {
    std::int64_t f = fibonacci(m);
    if (2 * f > q) break;
    if (!seen.insert(f).second) continue;
    int off = static_cast<int>(f);
    out.push_back({off, 0.5 * (at(off) + at(-off)) / base});
  }
  return out;
}

double chern_beat_overlap(const Eigen::VectorXcd& state, const Eigen::VectorXcd& ground, const RationalFlux& flux,
                          int m) {
  const int q = static_cast<int>(ground.size());
  if (state.size() != ground.size()) throw std::invalid_argument("chern_beat_overlap: size mismatch");
  Eigen::Index c = 0;
  ground.cwiseAbs().maxCoeff(&c);
  Eigen::MatrixXcd trial(q, 4);
  for (int j = 0; j < 2; ++j) {
    double k = std::numbers::pi * static_cast<double>(flux.p * m + j * flux.q) / static_cast<double>(flux.q);
    for (int n = 0; n < q; ++n) {
      double x = k * static_cast<double>(n - c);
      trial(n, 2 * j) = std::cos(x) * ground(n);
      trial(n, 2 * j + 1) = std::sin(x) * ground(n);
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(trial);
  qr.setThreshold(1e-8);
  const Eigen::Index rank = qr.rank();
  if (rank == 0) throw std::domain_error("chern_beat_overlap: trial space vanishes");
  Eigen::MatrixXcd qfull = qr.householderQ();
  Eigen::VectorXcd proj = qfull.leftCols(rank).adjoint() * state;
  return proj.squaredNorm() / state.squaredNorm();
}

double chern_beat_overlap_literal(const Eigen::VectorXcd& state, const Eigen::VectorXcd& ground,
                                  const RationalFlux& flux, int m) {
  const int q = static_cast<int>(ground.size());
  Eigen::Index c = 0;
  ground.cwiseAbs().maxCoeff(&c);
  Eigen::VectorXcd t(q);
  for (int n = 0; n < q; ++n) {
    double off = signed_offset(static_cast<double>(n - c), q);
    t(n) = std::cos(std::numbers::pi * m * off / static_cast<double>(flux.q)) * ground(n);
  }
  double nt = t.norm();
  if (nt < 1e-12) throw std::domain_error("chern_beat_overlap_literal: trial vanishes on the support");
  return std::norm(t.dot(state) / nt) / state.squaredNorm();
}

}  // namespace quasitop
