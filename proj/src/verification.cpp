#include "riemap/verification.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include "riemap/error.hpp"

namespace riemap {

namespace {

using Bidegree = std::pair<int, int>;

// Series in u, v with TruncatedSeries coefficients, bidegrees capped at
// (max_a, max_b).
class BiSeries {
 public:
  BiSeries(TruncationPolicy policy, int max_a, int max_b) : policy_(policy), max_a_(max_a), max_b_(max_b) {}

  static BiSeries one(TruncationPolicy policy, int max_a, int max_b) {
    BiSeries s(policy, max_a, max_b);
    s.terms_.emplace(Bidegree{0, 0}, TruncatedSeries::constant(policy, 1));
    return s;
  }

  void add(int a, int b, const TruncatedSeries& c) {
    if (a > max_a_ || b > max_b_ || c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace({a, b}, c);
    if (!inserted) it->second += c;
  }

  TruncatedSeries at(int a, int b) const {
    auto it = terms_.find({a, b});
    return it == terms_.end() ? TruncatedSeries(policy_) : it->second;
  }

  bool empty() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& kv) { return kv.second.is_zero(); });
  }

  BiSeries operator*(const BiSeries& o) const {
    BiSeries out(policy_, max_a_, max_b_);
    for (const auto& [da, sa] : terms_) {
      for (const auto& [db, sb] : o.terms_) {
        const int a = da.first + db.first;
        const int b = da.second + db.second;
        if (a <= max_a_ && b <= max_b_) out.add(a, b, mul(sa, sb));
      }
    }
    return out;
  }

  BiSeries scaled(const Rational& c) const {
    BiSeries out = *this;
    for (auto& kv : out.terms_) kv.second *= c;
    return out;
  }

  // exp of a series without a (0,0) term: the powers run out of bidegree.
  BiSeries exp() const {
    if (terms_.count({0, 0}) && !terms_.at({0, 0}).is_zero()) {
      throw Error(ErrorCode::nonzero_constant, "bivariate exp needs a vanishing (0,0) coefficient");
    }
    auto result = one(policy_, max_a_, max_b_);
    auto power = result;
    for (int m = 1;; ++m) {
      power = (power * *this).scaled(Rational(1, m));
      if (power.empty()) break;
      for (const auto& [d, s] : power.terms_) result.add(d.first, d.second, s);
    }
    return result;
  }

 private:
  TruncationPolicy policy_;
  int max_a_;
  int max_b_;
  std::map<Bidegree, TruncatedSeries> terms_;
};

struct Prepared {
  TruncatedSeries f;  // regular part under the widened policy
  TruncationPolicy original;
};

// Room in t0 for products of derivatives so the product itself never
// truncates; exactness is then decided by the gate alone.
Prepared prepare(const PotentialSeries& f, int order) {
  const auto& p = f.policy();
  if (order < 1 || order > p.n_max) throw Error(ErrorCode::invalid_argument, "order must lie in [1, n_max]");
  TruncationPolicy wide = p;
  wide.t0_max = p.t0_max + p.n_max * p.deg_max + 2;
  return {f.regular.with_policy(wide), p};
}

Rational abs_value(const Rational& q) { return sgn(q) < 0 ? Rational(-q) : q; }

ResidualEntry classify(int a, int b, const TruncatedSeries& r, const TruncationPolicy& original) {
  ResidualEntry e;
  e.a = a;
  e.b = b;
  for (const auto& [m, c] : r.terms()) {
    const Rational mag = abs_value(c);
    const bool gated = m.degree() <= original.deg_max - 2 && m.t0_power() <= original.t0_max - 2;
    if (gated) {
      ++e.gated_nonzero;
      e.max_abs_gated = std::max(e.max_abs_gated, mag);
    } else {
      ++e.ungated_nonzero;
      e.max_abs_ungated = std::max(e.max_abs_ungated, mag);
    }
    if (a + b + m.degree() <= original.deg_max) ++e.additive_cone_nonzero;
  }
  return e;
}

ResidualReport holomorphic_residual(const PotentialSeries& f, int order, std::string name) {
  const auto prep = prepare(f, order);
  const auto& policy = prep.f.policy();
  const auto t0 = Variable::time();

  BiSeries x(policy, order, order);
  BiSeries g(policy, order, 0);
  for (int a = 1; a <= order; ++a) {
    const auto da = derive(prep.f, Variable::t(a));
    for (int b = 1; b <= order; ++b) x.add(a, b, derive(da, Variable::t(b)) * Rational(1, a * b));
    g.add(a, 0, derive(da, t0) * Rational(-1, a));
  }
  const auto c = x.exp();
  const auto e = g.exp();

  ResidualReport report;
  report.constraint = std::move(name);
  report.order = order;
  report.deg_max = prep.original.deg_max;
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b) {
      auto r = c.at(a + 1, b) - c.at(a, b + 1);
      if (b == 0) r -= e.at(a + 1, 0);
      if (a == 0) r += e.at(b + 1, 0);
      report.entries.push_back(classify(a, b, r, prep.original));
    }
  }
  return report;
}

std::string key_text(const NKey& key) {
  std::ostringstream os;
  os << "(";
  for (const auto& e : key.unbarred()) os << " " << e.index << "^" << e.multiplicity;
  os << " |";
  for (const auto& e : key.barred()) os << " " << e.index << "^" << e.multiplicity;
  os << " )";
  return os.str();
}

}  // namespace

bool ResidualReport::passed() const {
  return bar_symmetric &&
         std::all_of(entries.begin(), entries.end(), [](const ResidualEntry& e) { return e.gated_nonzero == 0; });
}

Rational ResidualReport::max_abs_gated() const {
  Rational m = 0;
  for (const auto& e : entries) m = std::max(m, e.max_abs_gated);
  return m;
}

ResidualReport toda_residual_a(const PotentialSeries& f, int order) {
  return holomorphic_residual(f, order, "holomorphic");
}

ResidualReport toda_residual_b(const PotentialSeries& f, int order) {
  PotentialSeries swapped = f;
  swapped.regular = f.regular.bar_swapped();
  auto report = holomorphic_residual(swapped, order, "antiholomorphic");
  report.bar_symmetric = swapped.regular == f.regular;
  return report;
}

ResidualReport toda_residual_c(const PotentialSeries& f, int order) {
  const auto prep = prepare(f, order);
  const auto& policy = prep.f.policy();
  const auto t0 = Variable::time();

  BiSeries minus_y(policy, order, order);
  BiSeries z(policy, order, order);
  for (int a = 1; a <= order; ++a) {
    const auto da = derive(prep.f, Variable::t(a));
    for (int b = 1; b <= order; ++b) {
      minus_y.add(a, b, derive(da, Variable::tbar(b)) * Rational(-1, a * b));
    }
    z.add(a, 0, derive(da, t0) * Rational(1, a));
    z.add(0, a, derive(derive(prep.f, Variable::tbar(a)), t0) * Rational(1, a));
  }
  const auto lhs_exp = minus_y.exp();
  const auto rhs_exp = z.exp();
  const auto scale = TruncatedSeries::variable(policy, t0) * exp_no_constant(derive(derive(prep.f, t0), t0));

  ResidualReport report;
  report.constraint = "mixed";
  report.order = order;
  report.deg_max = prep.original.deg_max;
  for (int a = 1; a <= order; ++a) {
    for (int b = 1; b <= order; ++b) {
      // 1 - exp(-Y) has no (0,0) part, so only -exp(-Y) contributes here.
      auto r = -lhs_exp.at(a, b) - mul(scale, rhs_exp.at(a - 1, b - 1));
      report.entries.push_back(classify(a, b, r, prep.original));
    }
  }
  return report;
}

CheckReport factorial_pattern_check(CoefficientEngine& engine, int i_max) {
  CheckReport report;
  report.name = "factorial-pattern";
  for (int i = 1; i <= i_max; ++i) {
    const std::vector<IndexMultiplicity> barred{{1, i}};
    for (const auto& shape : partitions(i, i, i)) {
      const NKey key(shape, barred);
      const bool single = shape.size() == 1 && shape[0].multiplicity == 1;
      const Rational expected = single ? Rational(factorial(i - 1)) : Rational(0);
      const Rational got = engine.n2(key);
      ++report.checked;
      if (got != expected) {
        report.fail("N2" + key_text(key) + " = " + got.get_str() + ", expected " + expected.get_str());
      }
    }
  }
  return report;
}

CheckReport bar_symmetry_check(CoefficientEngine& engine, const TruncationPolicy& policy) {
  CheckReport report;
  report.name = "bar-symmetry";
  for (const auto& key : enumerate_keys(policy)) {
    ++report.checked;
    const Rational a = engine.n2(key);
    const Rational b = engine.n2(key.swapped());
    if (a != b) report.fail("N2" + key_text(key) + " = " + a.get_str() + " but swapped gives " + b.get_str());
  }
  return report;
}

ConvergenceVerdict convergence_gate(const MomentVector& m, int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "n must be >= 1");
  ConvergenceVerdict v;
  v.n = n;
  v.bound = 1.0 / (4.0 * n * n * n * std::pow(2.0, n) * std::exp(static_cast<double>(n)));
  // Boundary values typed in by hand land within a few ulps of the bound.
  const double allowed = v.bound * (1.0 + 1e-12);
  if (!(m.t0 > 0 && m.t0 < 1)) v.offending.push_back(0);
  for (std::size_t k = 0; k < m.t.size(); ++k) {
    const int index = static_cast<int>(k) + 1;
    const double mag = std::abs(m.t[k]);
    if (index <= n ? !(mag <= allowed) : mag != 0.0) v.offending.push_back(index);
  }
  v.admissible = v.offending.empty();
  return v;
}

std::vector<double> degree_partial_sums(const PotentialSeries& f, const MomentVector& m) {
  const auto point = fit_moments(f, m);
  std::vector<double> sums(static_cast<std::size_t>(f.policy().deg_max) + 1, 0.0);
  for (const auto& [mono, c] : f.regular.terms()) {
    double value = std::abs(to_double(c)) * std::pow(point.t0, mono.t0_power());
    for (const auto& fac : mono.factors()) value *= std::pow(std::abs(point.t[fac.index - 1]), fac.exponent);
    sums[mono.degree()] += value;
  }
  return sums;
}

CheckReport convergence_gate_check(const PotentialSeries& f) {
  CheckReport report{"convergence-gate", 0, {}};
  const int n = std::max(1, f.policy().n_max);
  const double bound = convergence_gate(MomentVector{0.5, {}}, n).bound;

  auto expect = [&](const std::string& label, const MomentVector& m, bool admissible, std::vector<int> offending) {
    ++report.checked;
    const auto v = convergence_gate(m, n);
    if (v.admissible != admissible || v.offending != offending) report.fail(label + ": unexpected verdict");
  };
  std::vector<std::complex<double>> at_bound(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) at_bound[k - 1] = std::polar(bound, 0.7 * k);
  auto over = at_bound;
  over[n - 1] *= 1.001;
  auto past = at_bound;
  past.push_back(bound / 2);

  expect("zero moments", {0.5, {}}, true, {});
  expect("moments on the bound", {0.999, at_bound}, true, {});
  expect("t0 above 1", {1.5, {}}, false, {0});
  expect("t0 zero", {0.0, at_bound}, false, {0});
  expect("t_n over the bound", {0.5, over}, false, {n});
  expect("moment past n", {0.5, past}, false, {n + 1});

  // Partial sums at an admissible point close to the bound.
  MomentVector m{0.999, at_bound};
  for (auto& t : m.t) t *= 0.999;
  const auto sums = degree_partial_sums(f, m);
  for (std::size_t k = 0; k < sums.size(); ++k) {
    ++report.checked;
    if (sums[k] > std::ldexp(1.0, -static_cast<int>(k))) {
      report.fail("degree " + std::to_string(k) + " partial sum exceeds 2^-K");
    }
  }
  return report;
}

RoundtripReport roundtrip(const BoundaryCurve& c, const TruncationPolicy& policy, int order, double radius,
                          int probe_points) {
  const auto f = build_potential(policy).first;
  return roundtrip(c, f, order, radius, probe_points);
}

RoundtripReport roundtrip(const BoundaryCurve& c, const PotentialSeries& f, int order, double radius,
                          int probe_points) {
  if (!(radius > 0) || probe_points < 1) throw Error(ErrorCode::invalid_argument, "bad probe circle");
  RoundtripReport out;
  out.moments = moments_from_curve(c, std::max(1, f.policy().n_max));
  out.verdict = convergence_gate(out.moments, std::max(1, f.policy().n_max));
  out.map = map_from_potential(f, out.moments, order);
  for (int s = 0; s < probe_points; ++s) {
    const auto u = std::polar(radius, 2.0 * std::numbers::pi * s / probe_points);
    out.sup_error = std::max(out.sup_error, std::abs(evaluate_map(out.map, c.point(u)) - u));
  }
  return out;
}

namespace {

class KeySampler {
 public:
  explicit KeySampler(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  // Uniformly random composition of n into m parts >= 1.
  std::vector<int> composition(int n, int m) {
    std::vector<int> cuts(static_cast<std::size_t>(n - 1));
    std::iota(cuts.begin(), cuts.end(), 1);
    std::shuffle(cuts.begin(), cuts.end(), rng_);
    cuts.resize(static_cast<std::size_t>(m - 1));
    std::sort(cuts.begin(), cuts.end());
    std::vector<int> parts;
    int prev = 0;
    for (int c : cuts) {
      parts.push_back(c - prev);
      prev = c;
    }
    parts.push_back(n - prev);
    return parts;
  }

  // m entries >= 1 whose excesses over 1 sum to extra.
  std::vector<int> excess_spread(int extra, int m) {
    std::vector<int> l(static_cast<std::size_t>(m), 1);
    for (int u = 0; u < extra; ++u) ++l[uniform(0, m - 1)];
    return l;
  }

  std::vector<int> list(int length, int lo, int hi) {
    std::vector<int> v(static_cast<std::size_t>(length));
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

Rational power(long base, int e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), static_cast<unsigned long>(base), static_cast<unsigned long>(std::max(0, e)));
  return Rational(p);
}

// Partial Taylor sum of e^x, x >= 0: a lower bound for e^x.
Rational exp_lower(int x) {
  Rational sum = 0;
  Rational term = 1;
  for (int j = 0; j <= 4 * x + 20; ++j) {
    sum += term;
    term *= Rational(x, j + 1);
  }
  return sum;
}

std::string list_text(const std::vector<int>& v) {
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

void compare(CheckReport& report, const Rational& value, const Rational& bound, const std::string& where) {
  ++report.checked;
  if (value > bound) report.fail(where + ": " + value.get_str() + " > " + bound.get_str());
}

}  // namespace

std::vector<CheckReport> coefficient_bound_checks(std::uint64_t seed, std::size_t samples) {
  CoefficientEngine engine(Normalization::linear);
  KeySampler rng(seed);
  std::vector<CheckReport> reports(5);
  reports[0].name = "bound-P";
  reports[1].name = "bound-T1";
  reports[2].name = "bound-T2";
  reports[3].name = "bound-S";
  reports[4].name = "bound-N1";

  for (std::size_t n = 0; n < samples; ++n) {
    // P and T1 on s with i + j = sum s.
    {
      int m = 0;
      int total = 0;
      std::vector<int> s;
      while (total < 2) {
        m = rng.uniform(1, 5);
        s = rng.list(m, 1, 8);
        total = std::accumulate(s.begin(), s.end(), 0);
      }
      const int i = rng.uniform(1, total - 1);
      const int j = total - i;
      const std::string where = "i=" + std::to_string(i) + " j=" + std::to_string(j) + " s=" + list_text(s);
      const Rational p(bounded_compositions_count(i, s));
      compare(reports[0], p, Rational(std::min(binomial(i - 1, m - 1), binomial(j - 1, m - 1))), where);
      Rational t1_bound = power(std::min(i, j), m - 1);
      t1_bound /= Rational(factorial(m));
      compare(reports[1], engine.t1(i, j, s), t1_bound, where);
    }
    // T2 on i_1 + .. + i_k = s_1 + .. + s_m with sum (l_r - 1) = k - 2.
    {
      const int k = rng.uniform(2, 4);
      const auto is = rng.list(k, 1, 4);
      const int total = std::accumulate(is.begin(), is.end(), 0);
      const int m = rng.uniform(1, std::min(total, 4));
      const SLMatrix sl{rng.composition(total, m), rng.excess_spread(k - 2, m)};
      const int big_i = *std::max_element(is.begin(), is.end());
      Rational bound = power(big_i, m - 1) * power(k - 1, m) * Rational(factorial(k - 2));
      bound /= Rational(factorial(m));
      compare(reports[2], engine.t2(is, sl), bound,
              "i=" + list_text(is) + " s=" + list_text(sl.s) + " l=" + list_text(sl.l));
    }
    // S~ over a random barred list.
    {
      const int kb = rng.uniform(1, 5);
      const auto barred = rng.list(kb, 1, 3);
      const int m = rng.uniform(1, kb);
      const int k = rng.uniform(2, 4);
      const int big_ib = *std::max_element(barred.begin(), barred.end());
      const Rational bound = Rational(m * factorial(kb - 1) * binomial(big_ib * kb - kb, k - 2) *
                                      binomial(big_ib * kb, kb - m));
      compare(reports[3], engine.s_tilde(barred, m, k), bound,
              "barred=" + list_text(barred) + " m=" + std::to_string(m) + " k=" + std::to_string(k));
    }
    // |N1| on a balanced random key.
    {
      const int k = rng.uniform(1, 3);
      const auto unbarred = rng.list(k, 1, 4);
      const int i = std::accumulate(unbarred.begin(), unbarred.end(), 0);
      const int kb = rng.uniform(1, std::min(i, 4));
      const auto barred = rng.composition(i, kb);
      const int big_i = *std::max_element(unbarred.begin(), unbarred.end());
      const int big_ib = *std::max_element(barred.begin(), barred.end());
      const Rational bound = Rational(factorial(k - 1) * factorial(kb - 1)) * exp_lower(big_i * (k - 1)) *
                             power(2, big_ib * kb - kb) * power(2, big_ib * kb);
      compare(reports[4], abs_value(engine.n1(i, unbarred, barred)), bound,
              "unbarred=" + list_text(unbarred) + " barred=" + list_text(barred));
    }
  }
  return reports;
}

namespace {

VerificationItem from_check(const CheckReport& r) {
  VerificationItem item{r.name, r.passed(), r.checked, {}};
  if (!r.passed()) item.detail = std::to_string(r.violations.size()) + " violations; first: " + r.violations.front();
  return item;
}

VerificationItem from_residual(const ResidualReport& r) {
  VerificationItem item{"toda-" + r.constraint, r.passed(), r.entries.size(), {}};
  std::size_t gated = 0;
  std::size_t ungated = 0;
  for (const auto& e : r.entries) {
    gated += e.gated_nonzero;
    ungated += e.ungated_nonzero;
  }
  item.detail = "nonzero residual terms: " + std::to_string(gated) + " gated, " + std::to_string(ungated) +
                " outside the reliable cone";
  if (!r.bar_symmetric) item.detail += "; regular part is not bar-symmetric";
  return item;
}

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

}  // namespace

std::vector<VerificationItem> run_verification(const VerificationConfig& config) {
  std::vector<VerificationItem> items;
  const auto& policy = config.policy;
  const auto f = build_potential(policy).first;

  items.push_back(from_check(cauchy_data_check(f, std::max(1, policy.n_max))));
  if (policy.n_max >= 2 && policy.deg_max >= 4) items.push_back(from_check(ellipse_oracle_check(f)));

  CoefficientEngine engine;
  items.push_back(from_check(factorial_pattern_check(engine, std::max(1, policy.n_max))));
  items.push_back(from_check(bar_symmetry_check(engine, policy)));

  const int order = std::min(config.toda_order, policy.n_max);
  const auto toda_policy = TruncationPolicy::saturated(std::max(order, 1), config.toda_deg_max);
  const auto toda_f = build_potential(toda_policy).first;
  items.push_back(from_residual(toda_residual_a(toda_f, order)));
  items.push_back(from_residual(toda_residual_b(toda_f, order)));
  items.push_back(from_residual(toda_residual_c(toda_f, order)));

  for (const auto& r : coefficient_bound_checks(config.seed, config.bound_samples)) items.push_back(from_check(r));

  const auto trip = roundtrip(config.curve, f, config.map_order, config.probe_radius);
  {
    auto item = from_check(convergence_gate_check(f));
    item.detail += std::string(item.detail.empty() ? "" : "; ") + "roundtrip fixture " +
                   (trip.verdict.admissible ? "admissible" : "outside the sufficient region") + ", bound " +
                   sci(trip.verdict.bound);
    items.push_back(item);
  }
  {
    VerificationItem item{"roundtrip", trip.sup_error <= config.roundtrip_tolerance, 1, {}};
    item.detail = "sup |w(z(u)) - u| = " + sci(trip.sup_error) + " at |u| = " + sci(config.probe_radius);
    items.push_back(item);
  }
  {
    const auto v = v_moments_from_curve(config.curve, policy.n_max);
    const auto grad = potential_gradient(f, trip.moments, policy.n_max);
    double worst = 0.0;
    for (std::size_t k = 1; k < v.size(); ++k) worst = std::max(worst, std::abs(v[k] - grad[k]));
    VerificationItem item{"dual-moments", worst <= config.dual_moment_tolerance, v.size() - 1, {}};
    item.detail = "max_k |dF/dt_k - v_k| = " + sci(worst);
    items.push_back(item);
  }
  return items;
}

}  // namespace riemap
