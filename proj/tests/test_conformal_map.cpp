#include <doctest.h>

#include <cmath>
#include <numbers>

#include "riemap/conformal_map.hpp"
#include "riemap/error.hpp"
#include "riemap/quadrature.hpp"

using namespace riemap;

namespace {

const PotentialSeries& potential_4_6() {
  static const PotentialSeries f = build_potential(TruncationPolicy::saturated(4, 6)).first;
  return f;
}

}  // namespace

TEST_CASE("evaluate_map examples") {
  CHECK(evaluate_map(ExteriorMapSeries{2.0, {0.0, 0.0}}, 3.0) == std::complex<double>(6.0));
  CHECK(evaluate_map(ExteriorMapSeries{1.0, {1.0}}, 2.0) == std::complex<double>(3.0));
  const ExteriorMapSeries w{1.0, {0.5, 0.25, 0.125}};
  const std::complex<double> z(1.5, -0.5);
  CHECK(std::abs(evaluate_map(w, z) - (z + 0.5 + 0.25 / z + 0.125 / (z * z))) < 1e-15);
  CHECK(w.order() == 2);
}

TEST_CASE("disk: p = t0^(-1/2) and zero tail") {
  const auto& f = potential_4_6();
  for (double t0 : {0.25, 0.5, 1.0, 2.0, 9.0}) {
    const auto w = map_from_potential(f, MomentVector{t0, {}}, default_map_order(f.policy()));
    CHECK(std::abs(w.p - 1.0 / std::sqrt(t0)) <= 1e-12);
    CHECK(w.order() == 10);
    for (const auto& c : w.tail) CHECK(std::abs(c) == 0.0);
    // |w| = 2 on |z| = 2 sqrt(t0).
    for (int s = 0; s < 16; ++s) {
      const auto z = std::polar(2.0 * std::sqrt(t0), 2.0 * std::numbers::pi * s / 16);
      CHECK(std::abs(std::abs(evaluate_map(w, z)) - 2.0) <= 1e-12);
    }
  }
}

TEST_CASE("conformal radius identity") {
  const auto& f = potential_4_6();
  const MomentVector m{0.9, {{0.0, 0.0}, {0.02, 0.01}, {0.0, -0.005}, {0.001, 0.0}}};
  const auto d = time_derivatives(f, m, 3);
  const auto w = map_from_potential(f, m, 6);
  CHECK(w.p > 0.0);
  CHECK(std::abs(w.p * std::sqrt(m.t0) * std::exp(d.a.real() / 2) - 1.0) <= 1e-12);
  CHECK(std::abs(d.a.imag()) <= 1e-15);
  CHECK(d.b.size() == 3);
}

TEST_CASE("ellipse: tail follows the inverse of u + a/u") {
  const double a = 0.05;
  const BoundaryCurve c{1.0, {0.0, a}, 256};
  const auto m = moments_from_curve(c, 4);
  const auto w = map_from_potential(potential_4_6(), m, 8);
  // u(z) = z (1 + sqrt(1 - 4a/z^2)) / 2 = z - a/z - a^2/z^3 - 2a^3/z^5 - ...
  const std::vector<double> expected{0.0, -a, 0.0, -a * a, 0.0, -2 * a * a * a, 0.0, -5 * a * a * a * a, 0.0};
  CHECK(std::abs(w.p - 1.0) <= 1e-5);
  for (int j = 0; j <= 8; ++j) CHECK(std::abs(w.tail[j] - expected[j]) <= 1e-5);
}

TEST_CASE("gradient at the t0 line is the singular part") {
  const auto& f = potential_4_6();
  const auto g = potential_gradient(f, MomentVector{2.0, {}}, 3);
  REQUIRE(g.size() == 4);
  CHECK(std::abs(g[0] - (2.0 * std::log(2.0) - 2.0)) <= 1e-14);
  for (int k = 1; k <= 3; ++k) CHECK(g[k] == std::complex<double>{});
}

TEST_CASE("moment validation") {
  const auto& f = potential_4_6();
  CHECK_THROWS_AS(map_from_potential(f, MomentVector{0.0, {}}, 4), Error);
  CHECK_THROWS_AS(map_from_potential(f, MomentVector{1.0, {}}, -1), Error);
  try {
    (void)map_from_potential(f, MomentVector{1.0, {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {0.1, 0}}}, 4);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::index_out_of_range);
  }
  try {
    (void)map_from_potential(f, MomentVector{std::nan(""), {}}, 4);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::non_finite);
  }
  const auto padded = fit_moments(f, MomentVector{1.0, {{0.1, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}, {0, 0}}});
  CHECK(padded.t.size() == 4);
}
