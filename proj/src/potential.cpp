#include "riemap/potential.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <numeric>
#include <sstream>
#include <thread>

#include "riemap/error.hpp"

namespace riemap {

namespace {

using Side = std::vector<IndexMultiplicity>;

int side_degree(const Side& side) {
  int d = 0;
  for (const auto& e : side) d += e.multiplicity;
  return d;
}

std::string describe(const Monomial& m) {
  std::ostringstream os;
  os << "t0^" << m.t0_power();
  for (const auto& f : m.factors()) os << (f.barred ? " tbar" : " t") << f.index << "^" << f.exponent;
  return os.str();
}

// Job for the worker pool: a key and where its value lands.
struct Job {
  NKey key;
  int gradient = 0;  // 0 for the potential itself, else the extension index
};

struct RestrictedTerm {
  int t0_power;
  Rational derivative;  // coefficient times the product of exponent factorials
};

}  // namespace

std::vector<NKey> enumerate_keys(const TruncationPolicy& policy) {
  std::vector<NKey> keys;
  if (policy.n_max < 1 || policy.deg_max < 2) return keys;
  const int max_weight = policy.n_max * (policy.deg_max - 1);
  for (int i = 1; i <= max_weight; ++i) {
    const auto sides = partitions(i, policy.n_max, policy.deg_max - 1);
    std::vector<NKey> layer;
    for (const auto& u : sides) {
      const int ku = side_degree(u);
      for (const auto& b : sides) {
        const int degree = ku + side_degree(b);
        const int t0_exp = i - degree + 2;
        if (degree > policy.deg_max || t0_exp < 0 || t0_exp > policy.t0_max) continue;
        layer.emplace_back(u, b);
      }
    }
    std::stable_sort(layer.begin(), layer.end(), [](const NKey& a, const NKey& b) {
      if (a.degree() != b.degree()) return a.degree() < b.degree();
      return a < b;
    });
    keys.insert(keys.end(), layer.begin(), layer.end());
  }
  return keys;
}

std::pair<PotentialSeries, BuildReport> build_potential(const TruncationPolicy& policy,
                                                        const BuildOptions& options) {
  policy.validate();
  const auto start = std::chrono::steady_clock::now();

  std::vector<Job> jobs;
  for (auto& key : enumerate_keys(policy)) jobs.push_back({std::move(key), 0});

  const int gradient_order =
      options.gradient_order < 0 ? policy.n_max + policy.deg_max + 1 : options.gradient_order;
  const int max_weight = policy.n_max * (policy.deg_max - 1);
  for (int k = policy.n_max + 1; k <= gradient_order && policy.deg_max >= 2; ++k) {
    for (int i = k; i <= max_weight; ++i) {
      for (const auto& b : partitions(i, policy.n_max, policy.deg_max - 1)) {
        const int kb = side_degree(b);
        for (auto rest : partitions(i - k, policy.n_max, policy.deg_max - 1 - kb)) {
          const int degree = kb + side_degree(rest) + 1;
          if (i - degree + 2 < 0) continue;
          rest.push_back({k, 1});
          jobs.push_back({NKey(std::move(rest), b), k});
        }
      }
    }
  }

  CoefficientEngine engine(options.normalization);
  std::vector<Rational> values(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) values[j] = engine.n2(jobs[j].key);
  };
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, jobs.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  PotentialSeries f;
  f.regular = TruncatedSeries(policy);
  for (int k = policy.n_max + 1; k <= gradient_order; ++k) f.gradient_extension.emplace(k, TruncatedSeries(policy));

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (sgn(values[j]) == 0) continue;
    const auto& job = jobs[j];
    const Rational c = job.key.prefactor() * values[j];
    if (job.gradient == 0) {
      f.regular.add_term(job.key.monomial(), c);
      continue;
    }
    // d/dt_k of t_k^1 * rest: drop the t_k factor, coefficient unchanged.
    std::vector<Factor> factors;
    for (const auto& e : job.key.unbarred()) {
      if (e.index != job.gradient) factors.push_back({e.index, false, e.multiplicity});
    }
    for (const auto& e : job.key.barred()) factors.push_back({e.index, true, e.multiplicity});
    f.gradient_extension.at(job.gradient).add_term(Monomial(job.key.t0_exponent(), std::move(factors)), c);
  }

  BuildReport report;
  report.policy = policy;
  report.keys_evaluated = jobs.size();
  report.nonzero_terms = f.regular.size();
  report.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(f), report};
}

TruncatedSeries holomorphic_gradient(const PotentialSeries& f, int k, bool barred) {
  if (k < 1) throw Error(ErrorCode::invalid_argument, "gradient index must be >= 1");
  if (k <= f.policy().n_max) return derive(f.regular, barred ? Variable::tbar(k) : Variable::t(k));
  if (!barred) {
    if (auto it = f.gradient_extension.find(k); it != f.gradient_extension.end()) return it->second;
  }
  return TruncatedSeries(f.policy());
}

CheckReport cauchy_data_check(const PotentialSeries& f, int i_max) {
  CheckReport report;
  report.name = "cauchy-data";
  const auto& policy = f.policy();
  if (i_max < 1 || i_max > policy.n_max) {
    throw Error(ErrorCode::invalid_argument, "i_max must lie in [1, n_max]");
  }

  ++report.checked;
  if (2 * f.singular_log_coeff != 1 || f.singular_log_coeff + 2 * f.singular_quad_coeff != -1) {
    report.fail("singular part does not give d0 F = t0 log t0 - t0");
  }
  for (const auto& [m, c] : f.regular.terms()) {
    if (m.degree() == 0) report.fail("regular part has a pure t0 term " + describe(m));
    if (m.unbarred_degree() == 0 || m.barred_degree() == 0) {
      report.fail("regular term without both barred and unbarred factors: " + describe(m));
    }
  }

  // Group the regular part by factor content, forgetting t0.
  std::map<Monomial, std::vector<RestrictedTerm>> by_factors;
  for (const auto& [m, c] : f.regular.terms()) {
    Rational d = c;
    for (const auto& fac : m.factors()) d *= Rational(factorial(fac.exponent));
    by_factors[Monomial(0, {m.factors().begin(), m.factors().end()})].push_back({m.t0_power(), d});
  }

  for (int i = 1; i <= i_max; ++i) {
    for (int k = 1; k + 1 <= policy.deg_max; ++k) {
      // Every multiset J of k indices <= n_max, as a weakly increasing list.
      std::vector<int> js(k, 1);
      while (true) {
        const int sum = std::accumulate(js.begin(), js.end(), 0);
        for (bool mirrored : {false, true}) {
          std::vector<Factor> factors{{i, mirrored, 1}};
          for (int j : js) factors.push_back({j, !mirrored, 1});
          const Monomial target(0, std::move(factors));
          Rational expected = 0;
          int expected_power = i - k + 1;
          if (sum == i) {
            mpz_class prod = 1;
            for (int j : js) prod *= j;
            expected = Rational(prod * factorial(i), factorial(i - k + 1));
            expected.canonicalize();
          }
          ++report.checked;
          auto it = by_factors.find(target);
          const std::vector<RestrictedTerm> none;
          const auto& found = it == by_factors.end() ? none : it->second;
          Rational at_expected = 0;
          for (const auto& term : found) {
            if (sum == i && term.t0_power == expected_power) {
              at_expected = term.derivative;
            } else {
              report.fail("unexpected term t0^" + std::to_string(term.t0_power) + " in derivative along " +
                          describe(target));
            }
          }
          if (at_expected != expected) {
            report.fail("derivative along " + describe(target) + " is " + at_expected.get_str() +
                        " t0^" + std::to_string(expected_power) + ", expected " + expected.get_str());
          }
        }
        int pos = k - 1;
        while (pos >= 0 && js[pos] == policy.n_max) --pos;
        if (pos < 0) break;
        ++js[pos];
        for (int r = pos + 1; r < k; ++r) js[r] = js[pos];
      }
    }
  }
  return report;
}

TruncatedSeries ellipse_potential_series(const TruncationPolicy& policy) {
  using V = Variable;
  const auto t0 = TruncatedSeries::variable(policy, V::time());
  const auto t1 = TruncatedSeries::variable(policy, V::t(1));
  const auto tb1 = TruncatedSeries::variable(policy, V::tbar(1));
  const auto t2 = TruncatedSeries::variable(policy, V::t(2));
  const auto tb2 = TruncatedSeries::variable(policy, V::tbar(2));

  const auto x = Rational(4) * (t2 * tb2);
  // geometric = sum_{n>=0} x^n, log_part = sum_{n>=1} x^n / n
  auto geometric = TruncatedSeries::constant(policy, 1);
  TruncatedSeries log_part(policy);
  auto power = geometric;
  for (int n = 1;; ++n) {
    power = power * x;
    if (power.is_zero()) break;
    geometric += power;
    log_part += power * Rational(1, n);
  }
  const auto quadratic = t1 * tb1 + t1 * t1 * tb2 + tb1 * tb1 * t2;
  return Rational(1, 2) * (t0 * t0 * log_part) + t0 * (quadratic * geometric);
}

CheckReport ellipse_oracle_check(const PotentialSeries& f) {
  CheckReport report;
  report.name = "ellipse";
  const auto& policy = f.policy();
  if (policy.n_max < 2 || policy.deg_max < 4 || policy.t0_max < 2) {
    report.fail("policy must cover n_max >= 2, deg_max >= 4, t0_max >= 2");
    return report;
  }
  const auto expected = ellipse_potential_series(policy);
  std::map<Monomial, std::pair<Rational, Rational>> both;
  for (const auto& [m, c] : expected.terms()) both[m].first = c;
  for (const auto& [m, c] : f.regular.terms()) {
    if (m.max_index() <= 2) both[m].second = c;
  }
  for (const auto& [m, pair] : both) {
    ++report.checked;
    if (pair.first != pair.second) {
      report.fail(describe(m) + ": built " + pair.second.get_str() + ", closed form " + pair.first.get_str());
    }
  }
  return report;
}

}  // namespace riemap
