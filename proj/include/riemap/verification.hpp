#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riemap/coefficients.hpp"
#include "riemap/conformal_map.hpp"
#include "riemap/potential.hpp"
#include "riemap/quadrature.hpp"
#include "riemap/report.hpp"

namespace riemap {

/// Residual of one coefficient of z^-a xi^-b (or u^a v^b) in a Toda
/// constraint. Gated terms are those whose t-degree is at most deg_max - 2
/// and whose t0 power is at most t0_max - 2; only they must vanish.
struct ResidualEntry {
  int a = 0;
  int b = 0;
  std::size_t gated_nonzero = 0;
  std::size_t ungated_nonzero = 0;
  /// Nonzero terms with a + b + degree <= deg_max, whatever their gating.
  std::size_t additive_cone_nonzero = 0;
  Rational max_abs_gated = 0;
  Rational max_abs_ungated = 0;
};

struct ResidualReport {
  std::string constraint;  // "holomorphic", "antiholomorphic" or "mixed"
  int order = 0;
  int deg_max = 0;
  std::vector<ResidualEntry> entries;
  /// Only meaningful for "antiholomorphic": the regular part equals its bar swap.
  bool bar_symmetric = true;

  bool passed() const;
  Rational max_abs_gated() const;
};

/// (z - xi) exp(D(z)D(xi)F) = z exp(-d0 D(z)F) - xi exp(-d0 D(xi)F),
/// D(z) = sum_k z^-k/k d_k, for bidegrees 0 <= a, b < order.
ResidualReport toda_residual_a(const PotentialSeries& f, int order);
/// The barred twin of toda_residual_a, run on the bar-swapped potential;
/// also fails if the regular part is not bar-symmetric.
ResidualReport toda_residual_b(const PotentialSeries& f, int order);
/// 1 - exp(-D(z)Dbar(xi)F) = (z xi)^-1 exp(d0 (d0 + D(z) + Dbar(xi)) F),
/// for bidegrees 1 <= a, b <= order.
ResidualReport toda_residual_c(const PotentialSeries& f, int order);

/// For barred side tbar_1^i, i <= i_max, and every unbarred shape of weight
/// i: N2 = (i-1)! for the single-entry shape t_i, 0 otherwise.
CheckReport factorial_pattern_check(CoefficientEngine& engine, int i_max);

/// Exact N2(unbarred | barred) = N2(barred | unbarred) over every key the
/// policy admits.
CheckReport bar_symmetry_check(CoefficientEngine& engine, const TruncationPolicy& policy);

struct ConvergenceVerdict {
  bool admissible = false;
  int n = 0;
  double bound = 0.0;        // 1/(4 n^3 2^n e^n)
  std::vector<int> offending;  // 0 stands for t0
};

ConvergenceVerdict convergence_gate(const MomentVector& m, int n);

/// Sum over the terms of F_regular of total factor degree K of
/// |coefficient * monomial(m)|, indexed by K (entries 0 and 1 are zero).
std::vector<double> degree_partial_sums(const PotentialSeries& f, const MomentVector& m);

/// Gate verdicts on fixed fixtures (interior, boundary, t0 out of range,
/// moment over the bound, nonzero moment past n) and, at an admissible point
/// with every |t_k| near the bound, degree_partial_sums(f) <= 2^-K.
CheckReport convergence_gate_check(const PotentialSeries& f);

struct RoundtripReport {
  MomentVector moments;
  ExteriorMapSeries map;
  ConvergenceVerdict verdict;
  double sup_error = 0.0;
};

/// sup over sampled |u| = radius of |w(z(u)) - u| with the moments from
/// quadrature of c and F built under `policy`.
RoundtripReport roundtrip(const BoundaryCurve& c, const TruncationPolicy& policy, int order, double radius,
                          int probe_points = 256);

/// Same, reusing an already built potential.
RoundtripReport roundtrip(const BoundaryCurve& c, const PotentialSeries& f, int order, double radius,
                          int probe_points = 256);

/// Randomized, seeded checks of the coefficient estimates:
/// P <= min(C(i-1,m-1), C(j-1,m-1)), T1 <= min(i,j)^(m-1)/m!,
/// T2 <= I^(m-1)(k-1)^m(k-2)!/m!, S~ <= m(kb-1)! C(Ib kb - kb, k-2) C(Ib kb, kb-m),
/// |N1| <= (k-1)!(kb-1)! e^(I(k-1)) 2^(Ib kb - kb) 2^(Ib kb).
/// All comparisons are exact; e^x is replaced by a rational lower bound.
/// T2 is taken in the linear normalization, which the T2 estimate refers to.
std::vector<CheckReport> coefficient_bound_checks(std::uint64_t seed, std::size_t samples);

struct VerificationConfig {
  TruncationPolicy policy = TruncationPolicy::saturated(4, 6);
  int toda_order = 4;
  int toda_deg_max = 4;
  int map_order = 8;
  double probe_radius = 1.25;
  double roundtrip_tolerance = 1e-5;
  double dual_moment_tolerance = 1e-6;
  BoundaryCurve curve{1.0, {0.0, 0.05}, 256};
  std::uint64_t seed = 1;
  std::size_t bound_samples = 10000;
};

struct VerificationItem {
  std::string name;
  bool passed = false;
  std::size_t checked = 0;
  std::string detail;
};

/// Runs every check above on one configuration, in a fixed order.
std::vector<VerificationItem> run_verification(const VerificationConfig& config);

}  // namespace riemap
