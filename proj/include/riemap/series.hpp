#pragma once

// Exact multivariate truncated power series in t0, t_k and tbar_k.
//
// The barred variables are independent formal symbols; the relation
// tbar_k = conj(t_k) is only imposed by evaluate(). Coefficients are GMP
// rationals, so nothing in this layer rounds.

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "riemap/moment_vector.hpp"

namespace riemap {

using Rational = mpq_class;

/// A formal variable: t0, t_k (k >= 1) or tbar_k (k >= 1).
struct Variable {
  enum class Kind : std::uint8_t { t0, unbarred, barred };

  Kind kind = Kind::t0;
  int index = 0;

  static Variable time() { return {Kind::t0, 0}; }
  static Variable t(int k) { return {Kind::unbarred, k}; }
  static Variable tbar(int k) { return {Kind::barred, k}; }

  friend bool operator==(const Variable&, const Variable&) = default;
};

struct Factor {
  int index = 1;
  bool barred = false;
  int exponent = 1;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// t0^a * prod t_k^e * prod tbar_k^e with factors strictly ordered by
/// (barred, index): every unbarred factor precedes every barred one.
class Monomial {
 public:
  Monomial() = default;
  /// Sorts and merges `factors`; exponents <= 0 and indices < 1 are rejected.
  Monomial(int t0_power, std::vector<Factor> factors);

  int t0_power() const { return t0_power_; }
  std::span<const Factor> factors() const { return factors_; }
  /// Total factor degree, t0 excluded.
  int degree() const { return degree_; }
  int max_index() const;
  int unbarred_degree() const;
  int barred_degree() const;
  /// Sum of index * exponent over the unbarred (resp. barred) factors.
  int unbarred_weight() const;
  int barred_weight() const;
  int exponent_of(Variable v) const;
  bool is_constant() const { return t0_power_ == 0 && factors_.empty(); }

  Monomial operator*(const Monomial& other) const;
  /// Lowers the exponent of `v` by one; requires exponent_of(v) > 0.
  Monomial lowered(Variable v) const;
  Monomial bar_swapped() const;

  // Graded order: degree, then t0 power, then factors.
  friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.t0_power_ == b.t0_power_ && a.factors_ == b.factors_;
  }

 private:
  int t0_power_ = 0;
  int degree_ = 0;
  std::vector<Factor> factors_;
};

/// Admissibility filter applied after every series operation.
struct TruncationPolicy {
  int n_max = 0;    // largest moment index allowed
  int deg_max = 0;  // largest total factor degree (barred + unbarred)
  int t0_max = 0;   // largest power of t0

  /// Policy whose t0_max is large enough that no term of the potential (or
  /// of its holomorphic gradients) is dropped by the t0 bound alone.
  static TruncationPolicy saturated(int n_max, int deg_max);

  bool admits(const Monomial& m) const;
  void validate() const;
  friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;
};

class TruncatedSeries {
 public:
  using TermMap = std::map<Monomial, Rational>;

  TruncatedSeries() = default;
  explicit TruncatedSeries(TruncationPolicy policy);

  static TruncatedSeries constant(TruncationPolicy policy, const Rational& c);
  static TruncatedSeries variable(TruncationPolicy policy, Variable v);
  static TruncatedSeries term(TruncationPolicy policy, const Monomial& m, const Rational& c);

  const TruncationPolicy& policy() const { return policy_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(const Monomial& m) const;
  Rational constant_term() const;

  /// Adds c*m; dropped silently if m is inadmissible, erased if the sum is 0.
  void add_term(const Monomial& m, const Rational& c);

  /// Re-hosts the terms under another policy, dropping what it rejects.
  TruncatedSeries with_policy(TruncationPolicy policy) const;
  TruncatedSeries bar_swapped() const;

  TruncatedSeries& operator+=(const TruncatedSeries& other);
  TruncatedSeries& operator-=(const TruncatedSeries& other);
  TruncatedSeries& operator*=(const Rational& c);
  TruncatedSeries operator-() const;

  friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries& b) { return a += b; }
  friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries& b) { return a -= b; }
  friend TruncatedSeries operator*(TruncatedSeries a, const Rational& c) { return a *= c; }
  friend TruncatedSeries operator*(const Rational& c, TruncatedSeries a) { return a *= c; }
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
    return a.policy_ == b.policy_ && a.terms_ == b.terms_;
  }

 private:
  void require_same_policy(const TruncatedSeries& other) const;

  TruncationPolicy policy_;
  TermMap terms_;
};

/// Truncated product. Throws policy_mismatch when policies differ.
TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b);
inline TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) { return mul(a, b); }

/// exp(a) for a with zero constant term (nilpotent under truncation).
/// Throws nonzero_constant otherwise.
TruncatedSeries exp_no_constant(const TruncatedSeries& a);

/// Formal partial derivative with respect to `v`.
TruncatedSeries derive(const TruncatedSeries& a, Variable v);

/// Numeric value at `m`, barred variables taking conj(t_k). Throws
/// index_out_of_range when a variable index exceeds m.t.size().
std::complex<double> evaluate(const TruncatedSeries& a, const MomentVector& m);

/// binary64 value of q, truncated toward zero as GMP does.
double to_double(const Rational& q);

}  // namespace riemap
