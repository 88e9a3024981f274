#include <doctest.h>

#include <algorithm>
#include <random>
#include <thread>

#include "oracles.hpp"
#include "riemap/coefficients.hpp"
#include "riemap/error.hpp"

using namespace riemap;

namespace {

// Multisets of positive integers summing to n with at most max_count parts,
// as ascending lists.
std::vector<std::vector<int>> multisets(int n, int max_count) {
  std::vector<std::vector<int>> out;
  for (const auto& p : partitions(n, n, max_count)) {
    std::vector<int> list;
    for (const auto& [index, mult] : p) list.insert(list.end(), mult, index);
    out.push_back(list);
  }
  return out;
}

std::vector<int> random_list(std::mt19937_64& rng, int len, int lo, int hi) {
  std::vector<int> v(len);
  for (int& x : v) x = std::uniform_int_distribution<int>(lo, hi)(rng);
  return v;
}

}  // namespace

TEST_CASE("bounded composition count examples") {
  const std::vector<int> s22{2, 2}, s3{3}, s131{1, 3, 1};
  CHECK(bounded_compositions_count(2, s22) == 1);
  CHECK(bounded_compositions_count(1, s3) == 1);
  CHECK(bounded_compositions_count(2, s131) == 0);
  CHECK(bounded_compositions_count(5, s22) == 0);
}

TEST_CASE("bounded composition count matches enumeration") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const auto s = random_list(rng, std::uniform_int_distribution<int>(1, 4)(rng), 1, 6);
    const int i = std::uniform_int_distribution<int>(1, 14)(rng);
    CHECK(bounded_compositions_count(i, s) == oracle::count_tuples(i, s));
  }
}

TEST_CASE("combinatorial helpers") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(6) == 720);
  CHECK(binomial(6, 2) == 15);
  CHECK(binomial(3, 5) == 0);
  CHECK(compositions(4, 2) == std::vector<std::vector<int>>{{1, 3}, {2, 2}, {3, 1}});
  CHECK(compositions(2, 3).empty());
  CHECK(partitions(4, 4, 4).size() == 5);
  CHECK(partitions(4, 2, 4).size() == 3);
  CHECK(partitions(0, 3, 3).size() == 1);
}

TEST_CASE("T1 examples and oracle") {
  CoefficientEngine engine;
  const std::vector<int> s2{2};
  CHECK(engine.t1(1, 1, s2) == 1);
  // Blocks of ones contribute only after aggregation: (1,1,1) -> (3) gives 1/3!.
  const std::vector<int> ones2{1, 1}, ones3{1, 1, 1};
  CHECK(engine.t1(2, 2, ones2) == 0);
  CHECK(engine.t1(2, 2, ones3) == Rational(1, 6));

  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 300; ++trial) {
    const auto s = random_list(rng, std::uniform_int_distribution<int>(1, 5)(rng), 1, 5);
    const int i = std::uniform_int_distribution<int>(1, 10)(rng);
    CHECK(engine.t1(i, i, s) == oracle::t1(i, s));
  }
}

TEST_CASE("T2 examples") {
  CoefficientEngine engine(Normalization::linear);
  const std::vector<int> i11{1, 1};
  CHECK(engine.t2(i11, SLMatrix{{2}, {2}}) == 0);
  CHECK(engine.t2(i11, SLMatrix{{2}, {1}}) == 1);
  CHECK_THROWS_AS(engine.t2(i11, SLMatrix{{2, 1}, {1}}), Error);
}

TEST_CASE("T2 matches the window recursion oracle") {
  CoefficientEngine engine(Normalization::linear);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = std::uniform_int_distribution<int>(2, 4)(rng);
    const int m = std::uniform_int_distribution<int>(1, 4)(rng);
    const auto is = random_list(rng, k, 1, 4);
    const auto s = random_list(rng, m, 1, 6);
    const auto l = random_list(rng, m, 1, 3);
    CHECK(engine.t2(is, SLMatrix{s, l}) == oracle::t2(is, s, l));
  }
}

TEST_CASE("T2 normalizations differ by prod (l_r - 1)!") {
  CoefficientEngine lin(Normalization::linear), fac(Normalization::factorial);
  std::mt19937_64 rng(24);
  for (int trial = 0; trial < 300; ++trial) {
    const int k = std::uniform_int_distribution<int>(2, 4)(rng);
    const int m = std::uniform_int_distribution<int>(1, 4)(rng);
    const auto is = random_list(rng, k, 1, 4);
    const SLMatrix sl{random_list(rng, m, 1, 6), random_list(rng, m, 1, 3)};
    Rational weight = 1;
    for (int x : sl.l) weight *= Rational(factorial(x - 1));
    CHECK(lin.t2(is, sl) == fac.t2(is, sl) * weight);
    CHECK(lin.s(is, sl) * weight == fac.s(is, sl));
  }
}

TEST_CASE("S examples") {
  CoefficientEngine engine(Normalization::linear);
  const std::vector<int> two{2};
  CHECK(engine.s(two, SLMatrix{{2}, {1}}) == 1);
  CHECK(engine.s(two, SLMatrix{{3}, {1}}) == 0);

  // All-ones barred side: prod delta(l_r, 1) * kb! / (s_1 ... s_m).
  for (int kb = 1; kb <= 5; ++kb) {
    const std::vector<int> ones(kb, 1);
    for (int m = 1; m <= kb; ++m) {
      for (const auto& s : compositions(kb, m)) {
        Rational expected(factorial(kb));
        for (int x : s) expected /= x;
        CHECK(engine.s(ones, SLMatrix{s, std::vector<int>(m, 1)}) == expected);
        std::vector<int> l(m, 1);
        l[0] = 2;
        CHECK(engine.s(ones, SLMatrix{s, l}) == 0);
      }
    }
  }
}

TEST_CASE("S matches set-partition enumeration") {
  CoefficientEngine engine(Normalization::linear);
  std::mt19937_64 rng(25);
  for (int trial = 0; trial < 400; ++trial) {
    const int kb = std::uniform_int_distribution<int>(1, 5)(rng);
    const int m = std::uniform_int_distribution<int>(1, kb)(rng);
    const auto barred = random_list(rng, kb, 1, 4);
    // Block sums taken from a random labelling so that most cases are nonzero.
    std::vector<int> s(m, 0);
    for (int p = 0; p < kb; ++p) s[p < m ? p : std::uniform_int_distribution<int>(0, m - 1)(rng)] += barred[p];
    if (trial % 5 == 0) s[0] += 1;
    const auto l = random_list(rng, m, 1, 3);
    CHECK(engine.s(barred, SLMatrix{s, l}) == oracle::s_value(barred, s, l));
  }
}

TEST_CASE("S-tilde is the S sum over matrices") {
  CoefficientEngine engine(Normalization::linear);
  std::mt19937_64 rng(26);
  for (int trial = 0; trial < 60; ++trial) {
    const int kb = std::uniform_int_distribution<int>(1, 4)(rng);
    const auto barred = random_list(rng, kb, 1, 3);
    const int m = std::uniform_int_distribution<int>(1, kb)(rng);
    const int k = std::uniform_int_distribution<int>(2, 4)(rng);
    const int total = std::accumulate(barred.begin(), barred.end(), 0);
    oracle::Q expected = 0;
    oracle::each_composition(total, m, [&](const std::vector<int>& s) {
      oracle::each_composition(m + k - 2, m, [&](const std::vector<int>& l) {
        expected += oracle::s_value(barred, s, l);
      });
    });
    CHECK(engine.s_tilde(barred, m, k) == expected);
  }
}

TEST_CASE("N1 examples") {
  CoefficientEngine engine;
  const std::vector<int> two{2}, one_one{1, 1};
  CHECK(engine.n1(2, two, one_one) == 1);
  CHECK(engine.n1(2, two, two) == Rational(1, 2));
  CHECK(engine.n1(3, two, one_one) == 0);
  for (int i = 3; i <= 6; ++i) {
    const std::vector<int> ones(i, 1);
    for (const auto& u : multisets(i, i)) {
      if (u.size() > 2) CHECK(engine.n1(i, u, ones) == 0);
    }
  }
}

TEST_CASE("N1 matches the direct formula") {
  CoefficientEngine engine;
  std::size_t compared = 0;
  for (int i = 1; i <= 5; ++i) {
    for (const auto& u : multisets(i, 4)) {
      for (const auto& b : multisets(i, 4)) {
        CHECK(engine.n1(i, u, b) == oracle::n1(i, u, b));
        ++compared;
      }
    }
  }
  CHECK(compared >= 75);
}

TEST_CASE("normalizations give identical N1") {
  CoefficientEngine lin(Normalization::linear), fac(Normalization::factorial);
  for (int i = 1; i <= 6; ++i) {
    for (const auto& u : multisets(i, 5)) {
      for (const auto& b : multisets(i, 5)) CHECK(lin.n1(i, u, b) == fac.n1(i, u, b));
    }
  }
}

TEST_CASE("N2 examples") {
  CoefficientEngine engine;
  CHECK(engine.n2(NKey({{2, 1}}, {{1, 2}})) == 1);
  CHECK(engine.n2(NKey({{2, 1}}, {{2, 1}})) == Rational(1, 2));
  CHECK(engine.n2(NKey({{2, 1}}, {{1, 1}})) == 0);
  // Coefficient of t0^2 t2 tbar2: prefactor 2 * 2 times 1/2.
  const NKey k({{2, 1}}, {{2, 1}});
  CHECK(k.prefactor() * engine.n2(k) == 2);
  CHECK(k.t0_exponent() == 2);
}

TEST_CASE("NKey canonicalization") {
  const std::vector<int> u{3, 1, 3}, b{2, 5};
  const NKey k = NKey::from_lists(u, b);
  CHECK(k.unbarred() == std::vector<IndexMultiplicity>{{1, 1}, {3, 2}});
  CHECK(k.expanded_unbarred() == std::vector<int>{1, 3, 3});
  CHECK(k.weight() == 7);
  CHECK(k.balanced());
  CHECK(k.degree() == 5);
  CHECK(k.t0_exponent() == 4);
  CHECK(k.max_index() == 5);
  CHECK(k.swapped().swapped() == k);
  CHECK(k.prefactor() == Rational(45));
  CHECK(NKey({{2, 1}, {2, 1}}, {{1, 4}}) == NKey({{2, 2}}, {{1, 4}}));
}

TEST_CASE("property: N2 invariant under reordering its input lists") {
  CoefficientEngine engine;
  std::mt19937_64 rng(27);
  for (int trial = 0; trial < 100; ++trial) {
    const int i = std::uniform_int_distribution<int>(2, 6)(rng);
    auto us = multisets(i, 4);
    auto bs = multisets(i, 4);
    auto u = us[std::uniform_int_distribution<std::size_t>(0, us.size() - 1)(rng)];
    auto b = bs[std::uniform_int_distribution<std::size_t>(0, bs.size() - 1)(rng)];
    const Rational reference = engine.n2(NKey::from_lists(u, b));
    std::shuffle(u.begin(), u.end(), rng);
    std::shuffle(b.begin(), b.end(), rng);
    CHECK(engine.n2(NKey::from_lists(u, b)) == reference);
    CHECK(engine.n1(i, u, b) == engine.n1(i, NKey::from_lists(u, b).expanded_unbarred(),
                                          NKey::from_lists(u, b).expanded_barred()));
  }
}

TEST_CASE("property: repeated and concurrent evaluation agree") {
  std::vector<NKey> keys;
  for (int i = 1; i <= 6; ++i) {
    for (const auto& u : multisets(i, 4)) {
      for (const auto& b : multisets(i, 4)) keys.push_back(NKey::from_lists(u, b));
    }
  }
  CoefficientEngine serial;
  std::vector<Rational> expected;
  for (const auto& k : keys) expected.push_back(serial.n2(k));
  for (std::size_t j = 0; j < keys.size(); ++j) REQUIRE(serial.n2(keys[j]) == expected[j]);

  CoefficientEngine shared;
  std::vector<std::vector<Rational>> results(8);
  {
    std::vector<std::jthread> workers;
    for (int t = 0; t < 8; ++t) {
      workers.emplace_back([&, t] {
        std::vector<std::size_t> order(keys.size());
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), std::mt19937_64(100 + t));
        results[t].resize(keys.size());
        for (std::size_t j : order) results[t][j] = shared.n2(keys[j]);
      });
    }
  }
  for (const auto& r : results) CHECK(r == expected);
  CHECK(shared.stats().n1 > 0);
}

TEST_CASE("block factor") {
  CHECK(block_factor(2, 1, 1, Normalization::linear) == 1);
  CHECK(block_factor(5, 2, 2, Normalization::linear) == Rational(12));
  CHECK(block_factor(5, 2, 3, Normalization::factorial) == 24);
  CHECK(block_factor(3, 3, 2, Normalization::linear) == 0);
}
