#pragma once

// Hand-rolled random generators for property tests.

#include <random>
#include <vector>

#include "riemap/series.hpp"

namespace gen {

using riemap::Factor;
using riemap::Monomial;
using riemap::Rational;
using riemap::TruncatedSeries;
using riemap::TruncationPolicy;

inline int uniform(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Rational rational(std::mt19937_64& rng) {
  Rational q(uniform(rng, -9, 9), uniform(rng, 1, 7));
  q.canonicalize();
  return q;
}

/// Monomial with factor degree <= max_degree, t0 power <= max_t0 and indices
/// <= n_max.
inline Monomial monomial(std::mt19937_64& rng, int n_max, int max_degree, int max_t0) {
  std::vector<Factor> factors;
  const int degree = uniform(rng, 0, max_degree);
  for (int d = 0; d < degree; ++d) factors.push_back({uniform(rng, 1, n_max), uniform(rng, 0, 1) == 1, 1});
  return Monomial(uniform(rng, 0, max_t0), factors);
}

/// Series with up to `terms` terms whose monomials are bounded as in
/// monomial(); the constant term is dropped when `no_constant`.
inline TruncatedSeries series(std::mt19937_64& rng, const TruncationPolicy& policy, int terms, int max_degree,
                              int max_t0, bool no_constant = false) {
  TruncatedSeries s(policy);
  const int count = uniform(rng, 0, terms);
  for (int t = 0; t < count; ++t) {
    const Monomial m = monomial(rng, policy.n_max, max_degree, max_t0);
    if (no_constant && m.is_constant()) continue;
    s.add_term(m, rational(rng));
  }
  return s;
}

}  // namespace gen
