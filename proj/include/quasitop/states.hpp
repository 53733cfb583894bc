/// Structure of band-edge wavefunctions: parity, peaks, doublets, windows, zeta, Chern beats.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasitop/spectra.hpp"

namespace quasitop {

enum class ParityCenter { Zero, HalfQ, None };

struct ParityResult {
  ParityCenter center = ParityCenter::None;
  int parity = 0;  // +1 / -1, 0 with None
  double residual = 0;
  // dominant mirror pair under the chosen reflection
  int n1 = -1, n2 = -1;
  double pair_mismatch = 0;  // min(|psi_n1 - psi_n2|, |psi_n1 + psi_n2|)
};

// Reflection n -> c - n on the Bloch ring (uses psi_{n+q} = e^{-i theta} psi_n),
// c in {0, q}; residual = min_s sum |psi - s R psi|^2.
ParityResult parity_check(const StateProfile& state, double accept = 1e-8);

const char* to_string(ParityCenter c);

struct Peak {
  int site = 0;
  double amplitude = 0;  // |psi|
};

enum class OffsetClass { Central, Fibonacci, FibonacciShifted, Other };
const char* to_string(OffsetClass c);

struct PeakGroup {
  std::vector<Peak> members;  // one or two
  double midpoint = 0;        // site, may be half-integer, in [0, q)
  double intensity = 0;       // largest member |psi|
  int separation = 0;         // 0 for single peaks
  double offset = 0;          // signed, midpoint to central midpoint
  double ratio = 0;           // intensity / central intensity
  bool dimer = false;         // separation 1, member ratio >= 0.9
  OffsetClass cls = OffsetClass::Other;
};

struct PeakHierarchy {
  int central = 0;  // index into groups
  std::vector<PeakGroup> groups;  // central first, then by |offset|
};

struct PeakOptions {
  double threshold = 0.2;   // relative to max |psi|
  double pair_ratio = 0.5;  // doublet members
  int chern = 0;            // for Fibonacci +- |C| classification
};

// Periodic local maxima of |psi| (>= both neighbours, nonzero).
std::vector<int> local_maxima(const Eigen::VectorXd& a);

// Local maxima plus dimer partners: a neighbour n of a maximum m with
// |psi_n| >= pair_ratio |psi_m| that is >= its other neighbour.
std::vector<int> peak_candidates(const Eigen::VectorXd& a, double pair_ratio);

PeakHierarchy detect_peaks(const Eigen::VectorXcd& psi, const PeakOptions& opt = {});

struct DoubletResult {
  int separation = 0;
  bool found = false;
  int n1 = -1, n2 = -1;
};

// Two largest maxima with ratio >= pair_ratio and no larger maximum between them.
DoubletResult doublet_separation(const Eigen::VectorXcd& psi, double pair_ratio = 0.5);

struct InvarianceResult {
  bool invariant = false;
  std::vector<std::pair<int, int>> sites;  // per lambda, sorted
};

// Dominant two sites of the band-edge state (at phi) for each lambda.
InvarianceResult peak_lambda_invariance(const RationalFlux& flux, int r, Side side, const std::vector<double>& lambdas,
                                        double phi);

struct Window {
  int start = 0;   // left bounding peak
  int length = 0;  // distance to the right bounding peak
  bool fib_minus_c = false;  // length = F_m - |C| for some m
};

// Valleys between consecutive maxima of |psi| whose bounding peaks exceed
// min_peak * max |psi|. A flat |psi| is one window over the whole chain.
std::vector<Window> smooth_windows(const Eigen::VectorXcd& psi, int chern, double min_peak = 0.2);

// Runs where |second difference of |psi|| < rel * RMS second difference.
std::vector<Window> smooth_windows_curvature(const Eigen::VectorXcd& psi, int chern, double rel = 0.1);

struct ZetaEntry {
  int offset = 0;
  double ratio = 0;
};

// Subpeak to central intensity at Fibonacci offsets up to q/2, from the central
// peak (or both doublet members), averaged over +- offset.
std::vector<ZetaEntry> subpeak_ratio_zeta(const Eigen::VectorXcd& psi, const RationalFlux& flux);

// Projection of state onto span{cos(k n) G, sin(k n) G}, k = pi (p m + j q)/q,
// j in {0, 1}, with n the unwrapped site index measured from the ground-state peak.
double chern_beat_overlap(const Eigen::VectorXcd& state, const Eigen::VectorXcd& ground, const RationalFlux& flux,
                          int m);

// |<state, normalized cos(pi m n / q) G>|^2 with n the reduced offset from the ground peak.
// Throws std::domain_error when the trial vanishes.
double chern_beat_overlap_literal(const Eigen::VectorXcd& state, const Eigen::VectorXcd& ground,
                                  const RationalFlux& flux, int m);

}  // namespace quasitop
