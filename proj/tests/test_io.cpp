#include <doctest.h>

#include <random>

#include "generators.hpp"
#include "riemap/error.hpp"
#include "riemap/io.hpp"

using namespace riemap;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

}  // namespace

TEST_CASE("series text form") {
  const TruncationPolicy p{2, 4, 3};
  TruncatedSeries s(p);
  s.add_term(Monomial(2, {{2, false, 1}, {2, true, 1}}), 2);
  s.add_term(Monomial(1, {{1, false, 2}, {2, true, 1}}), Rational(-7, 3));
  s.add_term(Monomial(), Rational(1, 5));
  const auto text = io::series_to_text(s);
  CHECK(text.find("# policy 2 4 3") == 0);
  CHECK(text.find("2 * t0^2 * t2^1 * tbar2^1") != std::string::npos);
  CHECK(text.find("-7/3 * t0^1 * t1^2 * tbar2^1") != std::string::npos);
  CHECK(io::series_from_text(text) == s);
}

TEST_CASE("property: series round trips through text and JSON") {
  std::mt19937_64 rng(51);
  const TruncationPolicy p{3, 5, 4};
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = gen::series(rng, p, 10, 5, 4);
    CHECK(io::series_from_text(io::series_to_text(s)) == s);
    CHECK(io::series_from_json(io::series_to_json(s)) == s);
    CHECK(io::series_from_json(io::parse_json(io::series_to_json(s).dump())) == s);
  }
}

TEST_CASE("potential round trip") {
  BuildOptions options;
  options.gradient_order = 5;
  const auto f = build_potential(TruncationPolicy::saturated(2, 4), options).first;
  const auto back = io::potential_from_json(io::parse_json(io::potential_to_json(f).dump()));
  CHECK(back.regular == f.regular);
  CHECK(back.gradient_extension == f.gradient_extension);
  CHECK(back.singular_log_coeff == f.singular_log_coeff);
  CHECK(back.singular_quad_coeff == f.singular_quad_coeff);
  CHECK(io::potential_to_json(back).dump() == io::potential_to_json(f).dump());
}

TEST_CASE("numeric values round trip bit for bit") {
  const MomentVector m{0.1 + 0.2, {{1.0 / 3.0, -2.0 / 7.0}, {1e-300, 5e-324}}};
  const auto mb = io::moments_from_json(io::parse_json(io::moments_to_json(m).dump()));
  CHECK(mb.t0 == m.t0);
  CHECK(mb.t == m.t);

  const BoundaryCurve c{1.25, {{0.1, 0.0}, {0.0, 1.0 / 3.0}}, 512};
  const auto cb = io::curve_from_json(io::parse_json(io::curve_to_json(c).dump()));
  CHECK(cb.r == c.r);
  CHECK(cb.a == c.a);
  CHECK(cb.samples == c.samples);

  const ExteriorMapSeries w{0.7071067811865476, {{0.0, 0.0}, {-0.05, 1e-17}}};
  const auto wb = io::map_from_json(io::parse_json(io::map_to_json(w).dump()));
  CHECK(wb.p == w.p);
  CHECK(wb.tail == w.tail);
}

TEST_CASE("moment JSON accepts the documented shape") {
  const auto m = io::moments_from_json(io::parse_json(R"({"t0": 1.0, "t": []})"));
  CHECK(m.t0 == 1.0);
  CHECK(m.t.empty());
  const auto csv = io::moments_to_csv(MomentVector{2.0, {{0.0, 1.0}}});
  CHECK(csv.find("k,re,im,abs") == 0);
  CHECK(csv.find("\n1,0,1,1") != std::string::npos);
}

TEST_CASE("coefficient table") {
  CoefficientEngine engine;
  const auto rows = io::coefficient_table(engine, 2, 2, 4);
  const auto csv = io::coefficient_table_csv(rows);
  CHECK(csv.find("i,unbarred,barred,numerator,denominator\n") == 0);
  CHECK(csv.find("\n2,2:1,1:2,1,1\n") != std::string::npos);
  CHECK(csv.find("\n2,2:1,2:1,1,2\n") != std::string::npos);
  const auto back = io::coefficient_table_from_csv(csv);
  REQUIRE(back.size() == rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    CHECK(back[j].key == rows[j].key);
    CHECK(back[j].value == rows[j].value);
  }
  const auto json = io::coefficient_table_json(rows);
  CHECK(json.size() == rows.size());
}

TEST_CASE("malformed input") {
  CHECK(code_of([] { (void)io::parse_json("{\"t0\": "); }) == ErrorCode::parse_error);
  CHECK(code_of([] { (void)io::moments_from_json(io::parse_json(R"({"t": []})")); }) == ErrorCode::parse_error);
  CHECK(code_of([] { (void)io::moments_from_json(io::parse_json(R"({"t0": 1, "t": [[1]]})")); }) ==
        ErrorCode::parse_error);
  CHECK(code_of([] { (void)io::series_from_text("2 * t0^2\n"); }) == ErrorCode::parse_error);
  CHECK(code_of([] { (void)io::series_from_text("# policy 2 4 3\n2 * q7^2\n"); }) == ErrorCode::parse_error);
  CHECK(code_of([] { (void)io::coefficient_table_from_csv("i,unbarred\n1,2\n"); }) == ErrorCode::parse_error);
}
