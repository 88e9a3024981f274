#include "riemap/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "riemap/error.hpp"

namespace riemap::io {

namespace {

template <class F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse_error, std::string(what) + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw Error(ErrorCode::parse_error, std::string(what) + ": " + e.what());
  }
}

Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0) throw Error(ErrorCode::parse_error, "not a rational number: '" + text + "'");
  if (sgn(q.get_den()) == 0) throw Error(ErrorCode::parse_error, "zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

int parse_int(const std::string& text) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw Error(ErrorCode::parse_error, "not an integer: '" + text + "'");
  return v;
}

Json complex_to_json(std::complex<double> z) { return Json::array({z.real(), z.imag()}); }

std::complex<double> complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::parse_error, "complex value must be [re, im]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json policy_to_json(const TruncationPolicy& p) {
  return Json{{"n_max", p.n_max}, {"deg_max", p.deg_max}, {"t0_max", p.t0_max}};
}

TruncationPolicy policy_from_json(const Json& j) {
  TruncationPolicy p{j.at("n_max").get<int>(), j.at("deg_max").get<int>(), j.at("t0_max").get<int>()};
  p.validate();
  return p;
}

std::string pairs_text(const std::vector<IndexMultiplicity>& side) {
  std::string out;
  for (const auto& e : side) {
    if (!out.empty()) out += ' ';
    out += std::to_string(e.index) + ":" + std::to_string(e.multiplicity);
  }
  return out;
}

std::vector<IndexMultiplicity> pairs_from_text(const std::string& text) {
  std::vector<IndexMultiplicity> side;
  std::istringstream is(text);
  std::string item;
  while (is >> item) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::parse_error, "expected index:multiplicity, got '" + item + "'");
    side.push_back({parse_int(item.substr(0, colon)), parse_int(item.substr(colon + 1))});
  }
  return side;
}

Json pairs_to_json(const std::vector<IndexMultiplicity>& side) {
  Json out = Json::array();
  for (const auto& e : side) out.push_back(Json::array({e.index, e.multiplicity}));
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Json parse_json(const std::string& text) {
  return guarded("JSON", [&] { return Json::parse(text); });
}

std::string series_to_text(const TruncatedSeries& s) {
  const auto& p = s.policy();
  std::ostringstream os;
  os << "# policy " << p.n_max << " " << p.deg_max << " " << p.t0_max << "\n";
  for (const auto& [m, c] : s.terms()) {
    os << c.get_str();
    if (m.t0_power() > 0) os << " * t0^" << m.t0_power();
    for (const auto& f : m.factors()) os << " * " << (f.barred ? "tbar" : "t") << f.index << "^" << f.exponent;
    os << "\n";
  }
  return os.str();
}

TruncatedSeries series_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::parse_error, "empty series text");
  std::istringstream header(line);
  std::string hash, word;
  TruncationPolicy p;
  if (!(header >> hash >> word >> p.n_max >> p.deg_max >> p.t0_max) || hash != "#" || word != "policy") {
    throw Error(ErrorCode::parse_error, "series text must start with '# policy n_max deg_max t0_max'");
  }
  p.validate();
  TruncatedSeries s(p);
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto parts = [&] {
      std::vector<std::string> out;
      std::size_t pos = 0;
      while (true) {
        const auto next = line.find(" * ", pos);
        out.push_back(trim(line.substr(pos, next - pos)));
        if (next == std::string::npos) break;
        pos = next + 3;
      }
      return out;
    }();
    const Rational c = parse_rational(parts[0]);
    int t0 = 0;
    std::vector<Factor> factors;
    for (std::size_t k = 1; k < parts.size(); ++k) {
      const auto& tok = parts[k];
      const auto caret = tok.find('^');
      if (caret == std::string::npos) throw Error(ErrorCode::parse_error, "factor without exponent: '" + tok + "'");
      const std::string name = tok.substr(0, caret);
      const int e = parse_int(tok.substr(caret + 1));
      if (name == "t0") {
        t0 += e;
      } else if (name.rfind("tbar", 0) == 0) {
        factors.push_back({parse_int(name.substr(4)), true, e});
      } else if (name.rfind('t', 0) == 0) {
        factors.push_back({parse_int(name.substr(1)), false, e});
      } else {
        throw Error(ErrorCode::parse_error, "unknown variable '" + name + "'");
      }
    }
    const Monomial m = guarded("series term", [&] { return Monomial(t0, std::move(factors)); });
    if (!p.admits(m)) throw Error(ErrorCode::parse_error, "term outside the declared policy: " + line);
    s.add_term(m, c);
  }
  return s;
}

Json series_to_json(const TruncatedSeries& s) {
  Json terms = Json::array();
  for (const auto& [m, c] : s.terms()) {
    Json factors = Json::array();
    for (const auto& f : m.factors()) factors.push_back(Json::array({f.index, f.barred, f.exponent}));
    terms.push_back(Json{{"t0", m.t0_power()},
                         {"factors", std::move(factors)},
                         {"num", c.get_num().get_str()},
                         {"den", c.get_den().get_str()}});
  }
  return Json{{"policy", policy_to_json(s.policy())}, {"terms", std::move(terms)}};
}

TruncatedSeries series_from_json(const Json& j) {
  return guarded("series JSON", [&] {
    TruncatedSeries s(policy_from_json(j.at("policy")));
    for (const auto& t : j.at("terms")) {
      std::vector<Factor> factors;
      for (const auto& f : t.at("factors")) {
        factors.push_back({f.at(0).get<int>(), f.at(1).get<bool>(), f.at(2).get<int>()});
      }
      const Monomial m(t.at("t0").get<int>(), std::move(factors));
      if (!s.policy().admits(m)) throw Error(ErrorCode::parse_error, "series JSON term outside its policy");
      s.add_term(m, parse_rational(t.at("num").get<std::string>() + "/" + t.at("den").get<std::string>()));
    }
    return s;
  });
}

Json potential_to_json(const PotentialSeries& f) {
  Json ext = Json::object();
  for (const auto& [k, s] : f.gradient_extension) ext[std::to_string(k)] = series_to_json(s);
  return Json{{"singular_log_coeff", f.singular_log_coeff.get_str()},
              {"singular_quad_coeff", f.singular_quad_coeff.get_str()},
              {"regular", series_to_json(f.regular)},
              {"gradient_extension", std::move(ext)}};
}

PotentialSeries potential_from_json(const Json& j) {
  return guarded("potential JSON", [&] {
    PotentialSeries f;
    f.singular_log_coeff = parse_rational(j.at("singular_log_coeff").get<std::string>());
    f.singular_quad_coeff = parse_rational(j.at("singular_quad_coeff").get<std::string>());
    f.regular = series_from_json(j.at("regular"));
    if (j.contains("gradient_extension")) {
      for (const auto& [k, s] : j.at("gradient_extension").items()) {
        auto series = series_from_json(s);
        if (!(series.policy() == f.regular.policy())) {
          throw Error(ErrorCode::parse_error, "gradient extension policy differs from the regular part");
        }
        f.gradient_extension.emplace(parse_int(k), std::move(series));
      }
    }
    return f;
  });
}

Json moments_to_json(const MomentVector& m) {
  Json t = Json::array();
  for (const auto& z : m.t) t.push_back(complex_to_json(z));
  return Json{{"t0", m.t0}, {"t", std::move(t)}};
}

MomentVector moments_from_json(const Json& j) {
  return guarded("moments JSON", [&] {
    MomentVector m;
    m.t0 = j.at("t0").get<double>();
    if (j.contains("t")) {
      for (const auto& z : j.at("t")) m.t.push_back(complex_from_json(z));
    }
    if (!std::isfinite(m.t0) || !(m.t0 > 0)) throw Error(ErrorCode::invalid_argument, "t0 must be positive and finite");
    return m;
  });
}

std::string moments_to_csv(const MomentVector& m) {
  std::ostringstream os;
  os.precision(17);
  os << "k,re,im,abs\n";
  os << 0 << "," << m.t0 << ",0," << std::abs(m.t0) << "\n";
  for (std::size_t k = 0; k < m.t.size(); ++k) {
    os << k + 1 << "," << m.t[k].real() << "," << m.t[k].imag() << "," << std::abs(m.t[k]) << "\n";
  }
  return os.str();
}

Json curve_to_json(const BoundaryCurve& c) {
  Json a = Json::array();
  for (const auto& z : c.a) a.push_back(complex_to_json(z));
  return Json{{"r", c.r}, {"a", std::move(a)}, {"samples", c.samples}};
}

BoundaryCurve curve_from_json(const Json& j) {
  return guarded("curve JSON", [&] {
    BoundaryCurve c;
    c.r = j.at("r").get<double>();
    if (j.contains("a")) {
      for (const auto& z : j.at("a")) c.a.push_back(complex_from_json(z));
    }
    if (j.contains("samples")) c.samples = j.at("samples").get<int>();
    return c;
  });
}

Json map_to_json(const ExteriorMapSeries& w) {
  Json tail = Json::array();
  for (const auto& z : w.tail) tail.push_back(complex_to_json(z));
  return Json{{"p", w.p}, {"tail", std::move(tail)}};
}

ExteriorMapSeries map_from_json(const Json& j) {
  return guarded("map JSON", [&] {
    ExteriorMapSeries w;
    w.p = j.at("p").get<double>();
    for (const auto& z : j.at("tail")) w.tail.push_back(complex_from_json(z));
    return w;
  });
}

std::vector<CoefficientRow> coefficient_table(CoefficientEngine& engine, int i_max, int n_max, int deg_max) {
  std::vector<CoefficientRow> rows;
  for (int i = 1; i <= i_max; ++i) {
    const auto sides = partitions(i, n_max, std::max(0, deg_max - 1));
    std::vector<NKey> keys;
    for (const auto& u : sides) {
      for (const auto& b : sides) {
        NKey key(u, b);
        if (key.degree() <= deg_max) keys.push_back(std::move(key));
      }
    }
    std::stable_sort(keys.begin(), keys.end(), [](const NKey& a, const NKey& b) {
      if (a.degree() != b.degree()) return a.degree() < b.degree();
      return a < b;
    });
    for (auto& key : keys) {
      Rational v = engine.n2(key);
      rows.push_back({std::move(key), std::move(v)});
    }
  }
  return rows;
}

std::string coefficient_table_csv(const std::vector<CoefficientRow>& rows) {
  std::ostringstream os;
  os << "i,unbarred,barred,numerator,denominator\n";
  for (const auto& r : rows) {
    os << r.key.weight() << "," << pairs_text(r.key.unbarred()) << "," << pairs_text(r.key.barred()) << ","
       << r.value.get_num().get_str() << "," << r.value.get_den().get_str() << "\n";
  }
  return os.str();
}

Json coefficient_table_json(const std::vector<CoefficientRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back(Json{{"i", r.key.weight()},
                       {"unbarred", pairs_to_json(r.key.unbarred())},
                       {"barred", pairs_to_json(r.key.barred())},
                       {"num", r.value.get_num().get_str()},
                       {"den", r.value.get_den().get_str()}});
  }
  return out;
}

std::vector<CoefficientRow> coefficient_table_from_csv(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  if (trim(line) != "i,unbarred,barred,numerator,denominator") {
    throw Error(ErrorCode::parse_error, "unexpected coefficient table header");
  }
  std::vector<CoefficientRow> rows;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 5) throw Error(ErrorCode::parse_error, "coefficient row needs 5 cells: " + line);
    NKey key(pairs_from_text(cells[1]), pairs_from_text(cells[2]));
    if (key.weight() != parse_int(cells[0])) throw Error(ErrorCode::parse_error, "weight column disagrees: " + line);
    rows.push_back({std::move(key), parse_rational(trim(cells[3]) + "/" + trim(cells[4]))});
  }
  return rows;
}

Json verification_to_json(const std::vector<VerificationItem>& items) {
  Json checks = Json::array();
  bool all = true;
  for (const auto& item : items) {
    all = all && item.passed;
    checks.push_back(
        Json{{"name", item.name}, {"passed", item.passed}, {"checked", item.checked}, {"detail", item.detail}});
  }
  return Json{{"passed", all}, {"checks", std::move(checks)}};
}

}  // namespace riemap::io
