#include "riemap/coefficients.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

#include "riemap/error.hpp"

namespace riemap {

template <class Key>
struct CoefficientEngine::Memo {
  mutable std::shared_mutex mutex;
  std::map<Key, Rational> values;

  template <class Compute>
  Rational get_or_compute(const Key& key, Compute&& compute) {
    {
      std::shared_lock lock(mutex);
      if (auto it = values.find(key); it != values.end()) return it->second;
    }
    Rational value = compute();
    std::unique_lock lock(mutex);
    // A racing thread may have inserted the same (identical) value first.
    return values.try_emplace(key, std::move(value)).first->second;
  }

  std::size_t size() const {
    std::shared_lock lock(mutex);
    return values.size();
  }
};

void SLMatrix::validate() const {
  if (s.size() != l.size()) throw Error(ErrorCode::invalid_argument, "SLMatrix rows differ in length");
  for (std::size_t r = 0; r < s.size(); ++r) {
    if (s[r] < 1 || l[r] < 1) throw Error(ErrorCode::invalid_argument, "SLMatrix entries must be >= 1");
  }
}

namespace {

std::vector<IndexMultiplicity> fold(std::vector<IndexMultiplicity> side) {
  for (const auto& e : side) {
    if (e.index < 1 || e.multiplicity < 1) {
      throw Error(ErrorCode::invalid_argument, "NKey entries need index >= 1 and multiplicity >= 1");
    }
  }
  std::sort(side.begin(), side.end());
  std::vector<IndexMultiplicity> out;
  for (const auto& e : side) {
    if (!out.empty() && out.back().index == e.index) {
      out.back().multiplicity += e.multiplicity;
    } else {
      out.push_back(e);
    }
  }
  return out;
}

int weight_of(const std::vector<IndexMultiplicity>& side) {
  int w = 0;
  for (const auto& e : side) w += e.index * e.multiplicity;
  return w;
}

int degree_of(const std::vector<IndexMultiplicity>& side) {
  int d = 0;
  for (const auto& e : side) d += e.multiplicity;
  return d;
}

std::vector<int> expand(const std::vector<IndexMultiplicity>& side) {
  std::vector<int> out;
  for (const auto& e : side) out.insert(out.end(), e.multiplicity, e.index);
  return out;
}

std::vector<IndexMultiplicity> fold_list(std::span<const int> list) {
  std::vector<IndexMultiplicity> side;
  for (int i : list) side.push_back({i, 1});
  return fold(std::move(side));
}

int sum_of(std::span<const int> v) { return std::accumulate(v.begin(), v.end(), 0); }

}  // namespace

NKey::NKey(std::vector<IndexMultiplicity> unbarred, std::vector<IndexMultiplicity> barred)
    : unbarred_(fold(std::move(unbarred))), barred_(fold(std::move(barred))) {
  unbarred_weight_ = weight_of(unbarred_);
  barred_weight_ = weight_of(barred_);
}

NKey NKey::from_lists(std::span<const int> unbarred, std::span<const int> barred) {
  return NKey(fold_list(unbarred), fold_list(barred));
}

int NKey::unbarred_degree() const { return degree_of(unbarred_); }
int NKey::barred_degree() const { return degree_of(barred_); }

int NKey::max_index() const {
  int m = 0;
  for (const auto& e : unbarred_) m = std::max(m, e.index);
  for (const auto& e : barred_) m = std::max(m, e.index);
  return m;
}

std::vector<int> NKey::expanded_unbarred() const { return expand(unbarred_); }
std::vector<int> NKey::expanded_barred() const { return expand(barred_); }

Monomial NKey::monomial() const {
  std::vector<Factor> factors;
  for (const auto& e : unbarred_) factors.push_back({e.index, false, e.multiplicity});
  for (const auto& e : barred_) factors.push_back({e.index, true, e.multiplicity});
  return Monomial(std::max(0, t0_exponent()), std::move(factors));
}

Rational NKey::prefactor() const {
  mpz_class num = 1;
  mpz_class den = 1;
  for (const auto* side : {&unbarred_, &barred_}) {
    for (const auto& e : *side) {
      mpz_class p;
      mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(e.index),
                    static_cast<unsigned long>(e.multiplicity));
      num *= p;
      den *= factorial(e.multiplicity);
    }
  }
  Rational q(num, den);
  q.canonicalize();
  return q;
}

mpz_class factorial(int n) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "factorial of a negative number");
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
  return f;
}

mpz_class binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return b;
}

std::vector<std::vector<int>> compositions(int n, int m) {
  std::vector<std::vector<int>> out;
  if (m < 1 || n < m) {
    if (m == 0 && n == 0) out.emplace_back();
    return out;
  }
  std::vector<int> parts(m, 1);
  auto rec = [&](auto& self, int pos, int remaining) -> void {
    if (pos == m - 1) {
      parts[pos] = remaining;
      out.push_back(parts);
      return;
    }
    for (int a = 1; a <= remaining - (m - 1 - pos); ++a) {
      parts[pos] = a;
      self(self, pos + 1, remaining - a);
    }
  };
  rec(rec, 0, n);
  return out;
}

std::vector<std::vector<IndexMultiplicity>> partitions(int n, int max_part, int max_count) {
  std::vector<std::vector<IndexMultiplicity>> out;
  if (n == 0) {
    out.emplace_back();
    return out;
  }
  std::vector<IndexMultiplicity> current;
  auto rec = [&](auto& self, int remaining, int largest, int count_left) -> void {
    if (remaining == 0) {
      out.emplace_back(current.rbegin(), current.rend());
      return;
    }
    if (count_left == 0) return;
    for (int part = std::min(largest, remaining); part >= 1; --part) {
      for (int mult = std::min(remaining / part, count_left); mult >= 1; --mult) {
        current.push_back({part, mult});
        self(self, remaining - part * mult, part - 1, count_left - mult);
        current.pop_back();
      }
    }
  };
  rec(rec, n, max_part, max_count);
  return out;
}

mpz_class bounded_compositions_count(int i, std::span<const int> s) {
  if (i < 0) return 0;
  // ways[t] = number of ways to reach prefix sum t.
  std::vector<mpz_class> ways(static_cast<std::size_t>(i) + 1, 0);
  ways[0] = 1;
  for (int cap : s) {
    std::vector<mpz_class> next(ways.size(), 0);
    for (int t = 0; t <= i; ++t) {
      if (sgn(ways[t]) == 0) continue;
      for (int x = 1; x <= cap - 1 && t + x <= i; ++x) next[t + x] += ways[t];
    }
    ways = std::move(next);
  }
  return ways[i];
}

Rational block_factor(int s, int n, int l, Normalization normalization) {
  const int rest = s - n - l + 1;
  if (rest < 0 || s < 1 || l < 1) return 0;
  mpz_class den = factorial(rest);
  if (normalization == Normalization::linear) den *= factorial(l - 1);
  Rational q(factorial(s - 1), den);
  q.canonicalize();
  return q;
}

CoefficientEngine::CoefficientEngine(Normalization normalization)
    : normalization_(normalization),
      t1_memo_(std::make_unique<Memo<std::vector<int>>>()),
      t2_memo_(std::make_unique<Memo<std::vector<int>>>()),
      s_memo_(std::make_unique<Memo<std::vector<int>>>()),
      n1_memo_(std::make_unique<Memo<std::vector<int>>>()) {}

CoefficientEngine::~CoefficientEngine() = default;

CacheStats CoefficientEngine::stats() const {
  return {t1_memo_->size(), t2_memo_->size(), s_memo_->size(), n1_memo_->size()};
}

Rational CoefficientEngine::t1(int i, int j, std::span<const int> s) {
  std::vector<int> key{i, j};
  key.insert(key.end(), s.begin(), s.end());
  return t1_memo_->get_or_compute(key, [&] { return compute_t1(i, s); });
}

Rational CoefficientEngine::compute_t1(int i, std::span<const int> s) {
  const int m = static_cast<int>(s.size());
  if (m == 0) return 0;
  Rational total = 0;
  // Each subset of the m-1 gaps is a cut pattern, i.e. a composition of m.
  const unsigned patterns = 1u << (m - 1);
  std::vector<int> blocks;
  for (unsigned cuts = 0; cuts < patterns; ++cuts) {
    blocks.clear();
    mpz_class den = 1;
    int run = 0;
    int block_sum = 0;
    for (int r = 0; r < m; ++r) {
      block_sum += s[r];
      ++run;
      const bool cut_after = r == m - 1 || (cuts >> r) & 1u;
      if (cut_after) {
        blocks.push_back(block_sum);
        den *= factorial(run);
        block_sum = 0;
        run = 0;
      }
    }
    den *= static_cast<long>(blocks.size());
    const mpz_class count = bounded_compositions_count(i, blocks);
    if (sgn(count) != 0) total += Rational(count, den);
  }
  total.canonicalize();
  return total;
}

Rational CoefficientEngine::t2(std::span<const int> i_list, const SLMatrix& sl) {
  sl.validate();
  if (i_list.size() < 2) throw Error(ErrorCode::invalid_argument, "T2 needs at least two indices");
  std::vector<int> key{static_cast<int>(i_list.size())};
  key.insert(key.end(), i_list.begin(), i_list.end());
  key.insert(key.end(), sl.s.begin(), sl.s.end());
  key.insert(key.end(), sl.l.begin(), sl.l.end());
  return t2_memo_->get_or_compute(key, [&] { return compute_t2(i_list, sl); });
}

Rational CoefficientEngine::compute_t2(std::span<const int> i_list, const SLMatrix& sl) {
  const int k = static_cast<int>(i_list.size());
  const int m = static_cast<int>(sl.columns());
  // Every contraction preserves sum(l) - m - k, and the base case needs it
  // to equal -2, so other matrices vanish identically.
  if (sum_of(sl.l) != m + k - 2) return 0;
  if (k == 2) {
    return std::all_of(sl.l.begin(), sl.l.end(), [](int l) { return l == 1; })
               ? t1(i_list[0], i_list[1], sl.s)
               : Rational(0);
  }
  const int last = i_list[k - 1];
  const auto head = i_list.first(k - 1);
  Rational total = 0;
  for (int a = 0; a < m; ++a) {
    int window_s = 0;
    int window_l = 0;
    for (int b = a; b < m; ++b) {
      window_s += sl.s[b];
      window_l += sl.l[b] - 1;
      const int contracted_s = window_s - last;
      if (contracted_s < 1 || window_l < 1) continue;

      const std::span<const int> window(sl.s.data() + a, static_cast<std::size_t>(b - a + 1));
      const Rational link = t1(contracted_s, last, window);
      if (sgn(link) == 0) continue;

      Rational weight;
      if (normalization_ == Normalization::linear) {
        weight = window_l;
      } else {
        mpz_class den = 1;
        for (int r = a; r <= b; ++r) den *= factorial(sl.l[r] - 1);
        weight = Rational(factorial(window_l), den);
        weight.canonicalize();
      }

      SLMatrix contracted;
      contracted.s.assign(sl.s.begin(), sl.s.begin() + a);
      contracted.l.assign(sl.l.begin(), sl.l.begin() + a);
      contracted.s.push_back(contracted_s);
      contracted.l.push_back(window_l);
      contracted.s.insert(contracted.s.end(), sl.s.begin() + b + 1, sl.s.end());
      contracted.l.insert(contracted.l.end(), sl.l.begin() + b + 1, sl.l.end());

      const Rational rest = t2(head, contracted);
      if (sgn(rest) != 0) total += weight * link * rest;
    }
  }
  return total;
}

std::shared_ptr<const CoefficientEngine::Profile> CoefficientEngine::profile(std::span<const int> barred,
                                                                             int m) {
  std::vector<int> key{m};
  key.insert(key.end(), barred.begin(), barred.end());
  {
    std::shared_lock lock(profile_mutex_);
    if (auto it = profiles_.find(key); it != profiles_.end()) return it->second;
  }
  auto prof = std::make_shared<Profile>();
  const int kb = static_cast<int>(barred.size());
  if (m >= 1 && m <= kb) {
    std::vector<int> sums(m, 0);
    std::vector<int> sizes(m, 0);
    int empty = m;
    auto rec = [&](auto& self, int pos) -> void {
      if (kb - pos < empty) return;
      if (pos == kb) {
        ++(*prof)[sums][sizes];
        return;
      }
      for (int r = 0; r < m; ++r) {
        if (sizes[r] == 0) --empty;
        sums[r] += barred[pos];
        ++sizes[r];
        self(self, pos + 1);
        --sizes[r];
        sums[r] -= barred[pos];
        if (sizes[r] == 0) ++empty;
      }
    };
    rec(rec, 0);
  }
  std::unique_lock lock(profile_mutex_);
  return profiles_.try_emplace(key, std::move(prof)).first->second;
}

Rational CoefficientEngine::s_from_profile(const std::map<std::vector<int>, std::uint64_t>& sizes,
                                           std::span<const int> block_sums, std::span<const int> l,
                                           Normalization normalization) {
  Rational total = 0;
  for (const auto& [n, count] : sizes) {
    Rational term = static_cast<unsigned long>(count);
    for (std::size_t r = 0; r < n.size() && sgn(term) != 0; ++r) {
      term *= block_factor(block_sums[r], n[r], l[r], normalization);
    }
    total += term;
  }
  return total;
}

Rational CoefficientEngine::s(std::span<const int> barred, const SLMatrix& sl) {
  sl.validate();
  std::vector<int> key{static_cast<int>(barred.size())};
  key.insert(key.end(), barred.begin(), barred.end());
  key.insert(key.end(), sl.s.begin(), sl.s.end());
  key.insert(key.end(), sl.l.begin(), sl.l.end());
  return s_memo_->get_or_compute(key, [&]() -> Rational {
    const auto prof = profile(barred, static_cast<int>(sl.columns()));
    auto it = prof->find(sl.s);
    if (it == prof->end()) return 0;
    return s_from_profile(it->second, sl.s, sl.l, normalization_);
  });
}

Rational CoefficientEngine::s_tilde(std::span<const int> barred, int m, int k) {
  if (m < 1 || k < 2) return 0;
  const auto prof = profile(barred, m);
  const auto ls = compositions(m + k - 2, m);
  Rational total = 0;
  for (const auto& [sums, sizes] : *prof) {
    for (const auto& l : ls) total += s_from_profile(sizes, sums, l, Normalization::linear);
  }
  return total;
}

Rational CoefficientEngine::n1(int i, std::span<const int> unbarred, std::span<const int> barred) {
  std::vector<int> key{i, static_cast<int>(unbarred.size())};
  key.insert(key.end(), unbarred.begin(), unbarred.end());
  key.insert(key.end(), barred.begin(), barred.end());
  return n1_memo_->get_or_compute(key, [&] { return compute_n1(i, unbarred, barred); });
}

Rational CoefficientEngine::compute_n1(int i, std::span<const int> unbarred, std::span<const int> barred) {
  for (int x : unbarred) {
    if (x < 1) throw Error(ErrorCode::invalid_argument, "indices must be >= 1");
  }
  for (int x : barred) {
    if (x < 1) throw Error(ErrorCode::invalid_argument, "indices must be >= 1");
  }
  const int k = static_cast<int>(unbarred.size());
  const int kb = static_cast<int>(barred.size());
  if (k == 0 || kb == 0) return 0;
  if (sum_of(unbarred) != i || sum_of(barred) != i) return 0;

  // Single-entry sides have closed forms; kb <= i and k <= i keep the
  // factorial arguments non-negative.
  if (k == 1) {
    Rational q(factorial(i - 1), factorial(i - kb + 1));
    q.canonicalize();
    return q;
  }
  if (kb == 1) {
    Rational q(factorial(i - 1), factorial(i - k + 1));
    q.canonicalize();
    return q;
  }

  Rational total = 0;
  // Every S block is non-empty, so m <= kb; also m <= i since s_r >= 1.
  for (int m = 1; m <= std::min(i, kb); ++m) {
    const auto prof = profile(barred, m);
    if (prof->empty()) continue;
    const auto ls = compositions(m + k - 2, m);
    Rational partial = 0;
    for (const auto& [sums, sizes] : *prof) {
      for (const auto& l : ls) {
        const Rational s_value = s_from_profile(sizes, sums, l, normalization_);
        if (sgn(s_value) == 0) continue;
        const Rational t_value = t2(unbarred, SLMatrix{sums, l});
        if (sgn(t_value) != 0) partial += s_value * t_value;
      }
    }
    if (m % 2 == 1) {
      total += partial;
    } else {
      total -= partial;
    }
  }
  return total;
}

Rational CoefficientEngine::n2(const NKey& key) {
  if (!key.balanced()) return 0;
  const auto unbarred = key.expanded_unbarred();
  const auto barred = key.expanded_barred();
  return n1(key.weight(), unbarred, barred);
}

}  // namespace riemap
