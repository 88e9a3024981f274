#pragma once

// Combinatorial coefficients of the potential's Taylor series.
//
// Families (all exact rationals):
//   P   - bounded composition counts
//   T1  - grouped sums of P over block aggregations of an s-vector
//   T2  - window recursion over (s, l) matrices seeded by T1
//   S   - labelled set partitions of the barred indices
//   N1  - signed S*T2 sum over all (s, l) matrices, with closed forms when
//         either side has a single entry
//   N2  - N1 on multiplicity-expanded index lists
//
// T2 and S come in two normalizations that give identical N1 values. The
// `linear` form weights each contraction by l and divides S by (l_r - 1)!;
// the `factorial` form weights it by l!/prod (l_r - 1)! and leaves S
// undivided. The two T2 families differ by the factor prod (l_r - 1)!.

#include <cstdint>
#include <map>
#include <memory>
#include <shared_mutex>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "riemap/series.hpp"

namespace riemap {

enum class Normalization { linear, factorial };

#ifdef RIEMAP_FACTORIAL_NORMALIZATION
inline constexpr Normalization kDefaultNormalization = Normalization::factorial;
#else
inline constexpr Normalization kDefaultNormalization = Normalization::linear;
#endif

/// Column data (s_1..s_m ; l_1..l_m) with every entry >= 1.
struct SLMatrix {
  std::vector<int> s;
  std::vector<int> l;

  std::size_t columns() const { return s.size(); }
  /// Throws invalid_argument on unequal lengths or entries < 1.
  void validate() const;
  friend bool operator==(const SLMatrix&, const SLMatrix&) = default;
};

struct IndexMultiplicity {
  int index = 1;
  int multiplicity = 1;
  friend bool operator==(const IndexMultiplicity&, const IndexMultiplicity&) = default;
  friend auto operator<=>(const IndexMultiplicity&, const IndexMultiplicity&) = default;
};

/// Canonical key of an N2 coefficient: both sides sorted by index with
/// repeats folded into multiplicities.
class NKey {
 public:
  NKey() = default;
  NKey(std::vector<IndexMultiplicity> unbarred, std::vector<IndexMultiplicity> barred);
  /// Folds plain (possibly repeated, unsorted) index lists.
  static NKey from_lists(std::span<const int> unbarred, std::span<const int> barred);

  const std::vector<IndexMultiplicity>& unbarred() const { return unbarred_; }
  const std::vector<IndexMultiplicity>& barred() const { return barred_; }

  /// Common weight i (the unbarred weight; see balanced()).
  int weight() const { return unbarred_weight_; }
  bool balanced() const { return unbarred_weight_ == barred_weight_; }
  int unbarred_degree() const;
  int barred_degree() const;
  int degree() const { return unbarred_degree() + barred_degree(); }
  /// Power of t0 carried by this key's monomial: i - degree + 2.
  int t0_exponent() const { return weight() - degree() + 2; }
  int max_index() const;

  std::vector<int> expanded_unbarred() const;
  std::vector<int> expanded_barred() const;
  NKey swapped() const { return NKey(barred_, unbarred_); }

  /// t0^{t0_exponent} prod t_i^n prod tbar_j^m.
  Monomial monomial() const;
  /// prod i^n/n! over both sides: the factor relating N2 to the Taylor
  /// coefficient of monomial().
  Rational prefactor() const;

  friend bool operator==(const NKey& a, const NKey& b) {
    return a.unbarred_ == b.unbarred_ && a.barred_ == b.barred_;
  }
  friend auto operator<=>(const NKey& a, const NKey& b) {
    if (auto c = a.unbarred_ <=> b.unbarred_; c != 0) return c;
    return a.barred_ <=> b.barred_;
  }

 private:
  std::vector<IndexMultiplicity> unbarred_;
  std::vector<IndexMultiplicity> barred_;
  int unbarred_weight_ = 0;
  int barred_weight_ = 0;
};

/// P_{i,j}(s): number of (i_1..i_m) with sum i and 1 <= i_r <= s_r - 1.
/// Dynamic programming over prefix sums.
mpz_class bounded_compositions_count(int i, std::span<const int> s);

mpz_class factorial(int n);
mpz_class binomial(int n, int k);

/// All compositions of n into exactly m parts >= 1, lexicographic.
std::vector<std::vector<int>> compositions(int n, int m);

/// Partitions of n into at most max_count parts, each <= max_part, as
/// multiplicity lists sorted by index. n = 0 yields one empty partition.
std::vector<std::vector<IndexMultiplicity>> partitions(int n, int max_part, int max_count);

struct CacheStats {
  std::size_t t1 = 0;
  std::size_t t2 = 0;
  std::size_t s = 0;
  std::size_t n1 = 0;
};

/// Memoizing evaluator. Safe for concurrent use: each family has its own
/// reader/writer lock, values are pure functions of their keys, and no lock
/// is held while a value is being computed.
class CoefficientEngine {
 public:
  explicit CoefficientEngine(Normalization normalization = kDefaultNormalization);
  ~CoefficientEngine();
  CoefficientEngine(const CoefficientEngine&) = delete;
  CoefficientEngine& operator=(const CoefficientEngine&) = delete;

  Normalization normalization() const { return normalization_; }

  /// T1_{i,j}(s). The count inside uses i; j only labels the key.
  Rational t1(int i, int j, std::span<const int> s);
  /// T2 for k = i_list.size() >= 2, peeling the last index first.
  Rational t2(std::span<const int> i_list, const SLMatrix& sl);
  /// S over positions of `barred` (repeats are distinguishable elements).
  Rational s(std::span<const int> barred, const SLMatrix& sl);
  Rational n1(int i, std::span<const int> unbarred, std::span<const int> barred);
  Rational n2(const NKey& key);

  /// Sum of S (linear normalization) over all matrices with m columns whose
  /// l-entries satisfy sum (l_r - 1) = k - 2.
  Rational s_tilde(std::span<const int> barred, int m, int k);

  CacheStats stats() const;

  /// Partition profiles of `barred` into m labelled non-empty blocks:
  /// block sums -> (block sizes -> number of position assignments).
  using Profile = std::map<std::vector<int>, std::map<std::vector<int>, std::uint64_t>>;
  std::shared_ptr<const Profile> profile(std::span<const int> barred, int m);

 private:
  template <class Key>
  struct Memo;

  static Rational s_from_profile(const std::map<std::vector<int>, std::uint64_t>& sizes,
                                 std::span<const int> block_sums, std::span<const int> l,
                                 Normalization normalization);
  Rational compute_t1(int i, std::span<const int> s);
  Rational compute_t2(std::span<const int> i_list, const SLMatrix& sl);
  Rational compute_n1(int i, std::span<const int> unbarred, std::span<const int> barred);

  Normalization normalization_;
  std::unique_ptr<Memo<std::vector<int>>> t1_memo_;
  std::unique_ptr<Memo<std::vector<int>>> t2_memo_;
  std::unique_ptr<Memo<std::vector<int>>> s_memo_;
  std::unique_ptr<Memo<std::vector<int>>> n1_memo_;

  mutable std::shared_mutex profile_mutex_;
  std::map<std::vector<int>, std::shared_ptr<const Profile>> profiles_;
};

/// Per-block factor of S: (s-1)!/((s-n-l+1)! (l-1)!) in the linear
/// normalization, (s-1)!/(s-n-l+1)! in the factorial one; zero when
/// s-n-l+1 < 0.
Rational block_factor(int s, int n, int l, Normalization normalization);

}  // namespace riemap
