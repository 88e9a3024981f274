#include "riemap/series.hpp"

#include <algorithm>
#include <tuple>

#include "riemap/error.hpp"

namespace riemap {

namespace {

bool factor_less(const Factor& a, const Factor& b) {
  return std::tie(a.barred, a.index) < std::tie(b.barred, b.index);
}

bool same_slot(const Factor& a, const Factor& b) { return a.barred == b.barred && a.index == b.index; }

}  // namespace

Monomial::Monomial(int t0_power, std::vector<Factor> factors) : t0_power_(t0_power) {
  if (t0_power < 0) throw Error(ErrorCode::invalid_argument, "negative t0 exponent");
  for (const auto& f : factors) {
    if (f.index < 1) throw Error(ErrorCode::invalid_argument, "moment index must be >= 1");
    if (f.exponent < 1) throw Error(ErrorCode::invalid_argument, "factor exponent must be >= 1");
  }
  std::sort(factors.begin(), factors.end(), factor_less);
  for (const auto& f : factors) {
    if (!factors_.empty() && same_slot(factors_.back(), f)) {
      factors_.back().exponent += f.exponent;
    } else {
      factors_.push_back(f);
    }
    degree_ += f.exponent;
  }
}

int Monomial::max_index() const {
  int m = 0;
  for (const auto& f : factors_) m = std::max(m, f.index);
  return m;
}

int Monomial::unbarred_degree() const {
  int d = 0;
  for (const auto& f : factors_) d += f.barred ? 0 : f.exponent;
  return d;
}

int Monomial::barred_degree() const { return degree_ - unbarred_degree(); }

int Monomial::unbarred_weight() const {
  int w = 0;
  for (const auto& f : factors_) w += f.barred ? 0 : f.index * f.exponent;
  return w;
}

int Monomial::barred_weight() const {
  int w = 0;
  for (const auto& f : factors_) w += f.barred ? f.index * f.exponent : 0;
  return w;
}

int Monomial::exponent_of(Variable v) const {
  if (v.kind == Variable::Kind::t0) return t0_power_;
  const bool barred = v.kind == Variable::Kind::barred;
  for (const auto& f : factors_) {
    if (f.barred == barred && f.index == v.index) return f.exponent;
  }
  return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.t0_power_ = t0_power_ + other.t0_power_;
  out.degree_ = degree_ + other.degree_;
  out.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && factor_less(*a, *b))) {
      out.factors_.push_back(*a++);
    } else if (a == factors_.end() || factor_less(*b, *a)) {
      out.factors_.push_back(*b++);
    } else {
      Factor f = *a++;
      f.exponent += (b++)->exponent;
      out.factors_.push_back(f);
    }
  }
  return out;
}

Monomial Monomial::lowered(Variable v) const {
  Monomial out = *this;
  if (v.kind == Variable::Kind::t0) {
    if (out.t0_power_ == 0) throw Error(ErrorCode::invalid_argument, "t0 exponent already zero");
    --out.t0_power_;
    return out;
  }
  const bool barred = v.kind == Variable::Kind::barred;
  for (auto it = out.factors_.begin(); it != out.factors_.end(); ++it) {
    if (it->barred == barred && it->index == v.index) {
      if (--it->exponent == 0) out.factors_.erase(it);
      --out.degree_;
      return out;
    }
  }
  throw Error(ErrorCode::invalid_argument, "variable does not occur in monomial");
}

Monomial Monomial::bar_swapped() const {
  std::vector<Factor> swapped(factors_.begin(), factors_.end());
  for (auto& f : swapped) f.barred = !f.barred;
  return Monomial(t0_power_, std::move(swapped));
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
  if (auto c = a.degree_ <=> b.degree_; c != 0) return c;
  if (auto c = a.t0_power_ <=> b.t0_power_; c != 0) return c;
  const auto n = std::min(a.factors_.size(), b.factors_.size());
  for (std::size_t i = 0; i < n; ++i) {
    const auto& x = a.factors_[i];
    const auto& y = b.factors_[i];
    if (auto c = x.barred <=> y.barred; c != 0) return c;
    if (auto c = x.index <=> y.index; c != 0) return c;
    if (auto c = x.exponent <=> y.exponent; c != 0) return c;
  }
  return a.factors_.size() <=> b.factors_.size();
}

TruncationPolicy TruncationPolicy::saturated(int n_max, int deg_max) {
  // Potential terms have t0 exponent i - K + 2 with i bounded by n_max times
  // the barred degree, which is at most K - 1.
  int t0_max = 2;
  for (int k = 2; k <= deg_max; ++k) t0_max = std::max(t0_max, n_max * (k - 1) - k + 2);
  return {n_max, deg_max, t0_max};
}

bool TruncationPolicy::admits(const Monomial& m) const {
  return m.t0_power() <= t0_max && m.degree() <= deg_max && m.max_index() <= n_max;
}

void TruncationPolicy::validate() const {
  if (n_max < 0 || deg_max < 0 || t0_max < 0) {
    throw Error(ErrorCode::invalid_argument, "truncation policy fields must be >= 0");
  }
}

TruncatedSeries::TruncatedSeries(TruncationPolicy policy) : policy_(policy) { policy_.validate(); }

TruncatedSeries TruncatedSeries::constant(TruncationPolicy policy, const Rational& c) {
  return term(policy, Monomial{}, c);
}

TruncatedSeries TruncatedSeries::variable(TruncationPolicy policy, Variable v) {
  if (v.kind == Variable::Kind::t0) return term(policy, Monomial(1, {}), 1);
  return term(policy, Monomial(0, {{v.index, v.kind == Variable::Kind::barred, 1}}), 1);
}

TruncatedSeries TruncatedSeries::term(TruncationPolicy policy, const Monomial& m, const Rational& c) {
  TruncatedSeries s(policy);
  s.add_term(m, c);
  return s;
}

Rational TruncatedSeries::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational TruncatedSeries::constant_term() const { return coefficient(Monomial{}); }

void TruncatedSeries::add_term(const Monomial& m, const Rational& c) {
  if (sgn(c) == 0 || !policy_.admits(m)) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

TruncatedSeries TruncatedSeries::with_policy(TruncationPolicy policy) const {
  TruncatedSeries out(policy);
  for (const auto& [m, c] : terms_) out.add_term(m, c);
  return out;
}

TruncatedSeries TruncatedSeries::bar_swapped() const {
  TruncatedSeries out(policy_);
  for (const auto& [m, c] : terms_) out.add_term(m.bar_swapped(), c);
  return out;
}

void TruncatedSeries::require_same_policy(const TruncatedSeries& other) const {
  if (!(policy_ == other.policy_)) {
    throw Error(ErrorCode::policy_mismatch, "series have different truncation policies");
  }
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& other) {
  require_same_policy(other);
  for (const auto& [m, c] : other.terms_) add_term(m, c);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& other) {
  require_same_policy(other);
  for (const auto& [m, c] : other.terms_) add_term(m, -c);
  return *this;
}

TruncatedSeries& TruncatedSeries::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, v] : terms_) v *= c;
  return *this;
}

TruncatedSeries TruncatedSeries::operator-() const {
  TruncatedSeries out = *this;
  for (auto& [m, v] : out.terms_) v = -v;
  return out;
}

TruncatedSeries mul(const TruncatedSeries& a, const TruncatedSeries& b) {
  if (!(a.policy() == b.policy())) {
    throw Error(ErrorCode::policy_mismatch, "series have different truncation policies");
  }
  const auto& p = a.policy();
  TruncatedSeries out(p);
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      if (ma.degree() + mb.degree() > p.deg_max || ma.t0_power() + mb.t0_power() > p.t0_max) continue;
      out.add_term(ma * mb, ca * cb);
    }
  }
  return out;
}

TruncatedSeries exp_no_constant(const TruncatedSeries& a) {
  if (sgn(a.constant_term()) != 0) {
    throw Error(ErrorCode::nonzero_constant, "exp_no_constant: argument has a nonzero constant term");
  }
  auto result = TruncatedSeries::constant(a.policy(), 1);
  auto power = result;
  for (int m = 1; !power.is_zero(); ++m) {
    power = mul(power, a);
    power *= Rational(1, m);
    result += power;
  }
  return result;
}

TruncatedSeries derive(const TruncatedSeries& a, Variable v) {
  TruncatedSeries out(a.policy());
  for (const auto& [m, c] : a.terms()) {
    const int e = m.exponent_of(v);
    if (e > 0) out.add_term(m.lowered(v), c * e);
  }
  return out;
}

double to_double(const Rational& q) { return q.get_d(); }

std::complex<double> evaluate(const TruncatedSeries& a, const MomentVector& m) {
  const int n = static_cast<int>(m.t.size());
  std::complex<double> total{};
  for (const auto& [mono, c] : a.terms()) {
    std::complex<double> value = to_double(c);
    for (int i = 0; i < mono.t0_power(); ++i) value *= m.t0;
    for (const auto& f : mono.factors()) {
      if (f.index > n) {
        throw Error(ErrorCode::index_out_of_range,
                    "series uses t" + std::to_string(f.index) + " but only " + std::to_string(n) +
                        " moments were supplied");
      }
      const auto t = f.barred ? std::conj(m.t[f.index - 1]) : m.t[f.index - 1];
      for (int i = 0; i < f.exponent; ++i) value *= t;
    }
    total += value;
  }
  return total;
}

}  // namespace riemap
