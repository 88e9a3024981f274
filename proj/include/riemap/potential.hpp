#pragma once

// Assembly of the truncated potential
//
//   F = 1/2 t0^2 log t0 - 3/4 t0^2 + sum_keys prefactor(key) N2(key) monomial(key)
//
// from the coefficient engine, plus the extra holomorphic gradients the map
// reconstruction needs beyond n_max.

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "riemap/coefficients.hpp"
#include "riemap/report.hpp"
#include "riemap/series.hpp"

namespace riemap {

struct PotentialSeries {
  Rational singular_log_coeff{1, 2};
  Rational singular_quad_coeff{-3, 4};
  TruncatedSeries regular;
  /// d F / d t_k restricted to t_j = 0 for j > n_max, for n_max < k; same
  /// policy as `regular`. Absent k means the gradient was not built.
  std::map<int, TruncatedSeries> gradient_extension;

  const TruncationPolicy& policy() const { return regular.policy(); }
};

struct BuildOptions {
  /// Largest k for which d F / d t_k is available; -1 picks n_max + deg_max + 1.
  int gradient_order = -1;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;
  Normalization normalization = kDefaultNormalization;
};

struct BuildReport {
  TruncationPolicy policy;
  std::size_t keys_evaluated = 0;
  std::size_t nonzero_terms = 0;
  double elapsed = 0.0;  // seconds
};

/// Balanced keys admitted by `policy` with both sides non-empty, ordered by
/// weight, then total degree, then key.
std::vector<NKey> enumerate_keys(const TruncationPolicy& policy);

std::pair<PotentialSeries, BuildReport> build_potential(const TruncationPolicy& policy,
                                                        const BuildOptions& options = {});

/// d F_regular / d t_k, or d F_regular / d tbar_k when `barred`. For k beyond
/// n_max the unbarred gradient comes from the extension (zero if absent);
/// barred gradients beyond n_max are always zero-extended.
TruncatedSeries holomorphic_gradient(const PotentialSeries& f, int k, bool barred = false);

/// Every mixed derivative d_i dbar_J F (and its bar mirror) with i <= i_max
/// and 1 + |J| <= deg_max, restricted to the t0-line, against
/// prod J * i!/(i-|J|+1)! t0^(i-|J|+1) when sum J = i and 0 otherwise; also
/// checks that the singular part yields d0 F = t0 log t0 - t0 on that line.
CheckReport cauchy_data_check(const PotentialSeries& f, int i_max);

/// Closed-form potential of an ellipse expanded under f's policy (regular
/// part only; indices <= 2).
TruncatedSeries ellipse_potential_series(const TruncationPolicy& policy);

/// Compares every coefficient of f with indices <= 2 against
/// ellipse_potential_series.
CheckReport ellipse_oracle_check(const PotentialSeries& f);

}  // namespace riemap
