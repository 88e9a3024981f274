// Command-line front end over the C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "riemap/riemap.h"

namespace {

constexpr int kExitFailedCheck = 1;
constexpr int kExitBadInput = 2;

struct Failure {
  int code;
  std::string message;
};

struct Options {
  int n_max = -1;
  int deg_max = -1;
  int t0_max = -1;
  int order = -1;
  int samples = -1;
  std::uint64_t seed = 1;
  std::string in;
  std::string out;
  std::string format;
  int i_max = 4;
  std::size_t bound_samples = 10000;
  double radius = 1.25;
  bool sweep = false;
};

void check(riemap_status s) {
  if (s != RIEMAP_OK) throw Failure{kExitBadInput, riemap_last_error()};
}

struct StringDeleter {
  void operator()(char* p) const { riemap_string_free(p); }
};
using CString = std::unique_ptr<char, StringDeleter>;

std::string take(char* p) { return std::string(CString(p).get()); }

template <class T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(ptr); }
};
using Potential = Handle<riemap_potential, riemap_potential_free>;
using Moments = Handle<riemap_moments, riemap_moments_free>;
using Curve = Handle<riemap_curve, riemap_curve_free>;
using Map = Handle<riemap_map, riemap_map_free>;

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Failure{kExitBadInput, "cannot read " + path};
  return std::string(std::istreambuf_iterator<char>(f), {});
}

void write_output(const std::string& path, const std::string& text) {
  const std::string body = text.empty() || text.back() == '\n' ? text : text + "\n";
  if (path.empty() || path == "-") {
    std::cout << body << std::flush;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << body)) throw Failure{kExitBadInput, "cannot write " + path};
}

riemap_policy policy_from(const Options& o, int n_default, int deg_default) {
  const int n = o.n_max < 0 ? n_default : o.n_max;
  const int d = o.deg_max < 0 ? deg_default : o.deg_max;
  riemap_policy p = riemap_policy_saturated(n, d);
  if (o.t0_max >= 0) p.t0_max = o.t0_max;
  return p;
}

riemap_format format_from(const std::string& name, riemap_format fallback) {
  if (name.empty()) return fallback;
  if (name == "json") return RIEMAP_FORMAT_JSON;
  if (name == "csv") return RIEMAP_FORMAT_CSV;
  if (name == "text") return RIEMAP_FORMAT_TEXT;
  throw Failure{kExitBadInput, "unknown format " + name};
}

std::string potential_csv(const riemap_potential* f) {
  const auto j = nlohmann::json::parse(take([&] {
    char* s = nullptr;
    check(riemap_potential_write(f, RIEMAP_FORMAT_JSON, &s));
    return s;
  }()));
  std::ostringstream os;
  os.precision(17);
  os << "degree,t0_power,monomial,numerator,denominator,magnitude\n";
  for (const auto& t : j.at("regular").at("terms")) {
    int degree = 0;
    std::string mono;
    for (const auto& fac : t.at("factors")) {
      degree += fac.at(2).get<int>();
      if (!mono.empty()) mono += ' ';
      mono += (fac.at(1).get<bool>() ? "tbar" : "t") + std::to_string(fac.at(0).get<int>()) + "^" +
              std::to_string(fac.at(2).get<int>());
    }
    const auto num = t.at("num").get<std::string>();
    const auto den = t.at("den").get<std::string>();
    os << degree << "," << t.at("t0").get<int>() << "," << mono << "," << num << "," << den << ","
       << std::abs(std::stod(num) / std::stod(den)) << "\n";
  }
  return os.str();
}

int run_coeffs(const Options& o) {
  const int n = o.n_max < 0 ? o.i_max : o.n_max;
  const int d = o.deg_max < 0 ? 2 * o.i_max : o.deg_max;
  char* s = nullptr;
  check(riemap_coefficient_table(o.i_max, n, d, format_from(o.format, RIEMAP_FORMAT_CSV), &s));
  write_output(o.out, take(s));
  return 0;
}

int run_potential(const Options& o) {
  Potential f;
  check(riemap_potential_build(policy_from(o, 4, 6), -1, 0, &f.ptr, nullptr));
  const auto format = format_from(o.format, RIEMAP_FORMAT_JSON);
  if (format == RIEMAP_FORMAT_CSV) {
    write_output(o.out, potential_csv(f.ptr));
    return 0;
  }
  char* s = nullptr;
  check(riemap_potential_write(f.ptr, format, &s));
  write_output(o.out, take(s));
  return 0;
}

int run_map(const Options& o) {
  if (format_from(o.format, RIEMAP_FORMAT_JSON) != RIEMAP_FORMAT_JSON) throw Failure{kExitBadInput, "map writes json"};
  Moments m;
  check(riemap_moments_from_json(read_input(o.in).c_str(), &m.ptr));
  Potential f;
  check(riemap_potential_build(policy_from(o, 4, 6), -1, 0, &f.ptr, nullptr));
  Map w;
  check(riemap_map_from_potential(f.ptr, m.ptr, o.order, &w.ptr));
  char* s = nullptr;
  check(riemap_map_write(w.ptr, &s));
  write_output(o.out, take(s));
  return 0;
}

void load_curve(const Options& o, Curve& c) {
  auto j = nlohmann::json::parse(read_input(o.in), nullptr, false);
  if (j.is_discarded()) throw Failure{kExitBadInput, "curve input is not valid JSON"};
  if (o.samples > 0) j["samples"] = o.samples;
  check(riemap_curve_from_json(j.dump().c_str(), &c.ptr));
}

int run_moments(const Options& o) {
  Curve c;
  load_curve(o, c);
  Moments m;
  check(riemap_curve_moments(c.ptr, o.n_max < 0 ? 4 : o.n_max, &m.ptr));
  char* s = nullptr;
  check(riemap_moments_write(m.ptr, format_from(o.format, RIEMAP_FORMAT_JSON), &s));
  write_output(o.out, take(s));
  return 0;
}

int run_verify(const Options& o) {
  riemap_verify_config config;
  riemap_verify_config_default(&config);
  config.policy = policy_from(o, 4, 6);
  config.map_order = o.order;
  config.seed = o.seed;
  config.bound_samples = o.bound_samples;
  config.probe_radius = o.radius;
  Curve c;
  if (!o.in.empty()) {
    load_curve(o, c);
  } else {
    const double a[] = {0.0, 0.0, 0.05, 0.0};
    check(riemap_curve_create(1.0, a, 2, o.samples > 0 ? o.samples : 256, &c.ptr));
  }
  config.curve = c.ptr;

  if (o.sweep) {
    std::ostringstream os;
    os.precision(17);
    os << "deg_max,sup_error\n";
    for (int d = 2; d <= config.policy.deg_max; ++d) {
      double err = 0.0;
      check(riemap_roundtrip(c.ptr, riemap_policy_saturated(config.policy.n_max, d), o.order, o.radius, &err));
      os << d << "," << err << "\n";
    }
    write_output(o.out, os.str());
    return 0;
  }

  char* s = nullptr;
  int passed = 0;
  check(riemap_verify(&config, &s, &passed));
  const std::string json = take(s);
  const auto report = nlohmann::json::parse(json);
  for (const auto& item : report.at("checks")) {
    std::cerr << (item.at("passed").get<bool>() ? "PASS " : "FAIL ") << item.at("name").get<std::string>() << " ("
              << item.at("checked").get<std::size_t>() << " checked)";
    const auto detail = item.at("detail").get<std::string>();
    if (!detail.empty()) std::cerr << ": " << detail;
    std::cerr << "\n";
  }
  const auto format = format_from(o.format, RIEMAP_FORMAT_JSON);
  if (format == RIEMAP_FORMAT_CSV) {
    std::ostringstream os;
    os << "check,passed,checked\n";
    for (const auto& item : report.at("checks")) {
      os << item.at("name").get<std::string>() << "," << (item.at("passed").get<bool>() ? 1 : 0) << ","
         << item.at("checked").get<std::size_t>() << "\n";
    }
    write_output(o.out, os.str());
  } else {
    write_output(o.out, report.dump(2));
  }
  return passed ? 0 : kExitFailedCheck;
}

int run_ellipse(const Options& o) {
  char* s = nullptr;
  int passed = 0;
  check(riemap_ellipse_check(policy_from(o, 2, 4), &s, &passed));
  const auto report = nlohmann::json::parse(take(s));
  std::cerr << (passed ? "PASS" : "FAIL") << " ellipse closed form (" << report.at("checked").get<std::size_t>()
            << " coefficients)\n";
  write_output(o.out, report.dump(2));
  return passed ? 0 : kExitFailedCheck;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exterior conformal maps from harmonic moments via the tau-function potential"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--nmax", o.n_max, "Largest moment index")->check(CLI::NonNegativeNumber);
    sub->add_option("--degmax", o.deg_max, "Largest total factor degree")->check(CLI::NonNegativeNumber);
    sub->add_option("--t0max", o.t0_max, "Largest t0 power (default: no t0 truncation)")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--order-J", o.order, "Map tail order J (default nmax + degmax)")->check(CLI::NonNegativeNumber);
    sub->add_option("--samples", o.samples, "Quadrature nodes, a power of two >= 64")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Seed for randomized checks");
    sub->add_option("--in", o.in, "Input file (default stdin)");
    sub->add_option("--out", o.out, "Output file (default stdout)");
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
  };

  auto* coeffs = app.add_subcommand("coeffs", "Table of N2 coefficients");
  add_common(coeffs);
  coeffs->add_option("--imax", o.i_max, "Largest weight i")->check(CLI::NonNegativeNumber);
  auto* potential = app.add_subcommand("potential", "Build the truncated potential");
  add_common(potential);
  auto* map = app.add_subcommand("map", "Exterior map coefficients from a moment vector");
  add_common(map);
  auto* moments = app.add_subcommand("moments", "Harmonic moments of a curve by contour quadrature");
  add_common(moments);
  auto* verify = app.add_subcommand("verify", "Run the verification suite");
  add_common(verify);
  verify->add_option("--bound-samples", o.bound_samples, "Random keys per coefficient estimate");
  verify->add_option("--radius", o.radius, "Probe radius |u| of the roundtrip")->check(CLI::PositiveNumber);
  verify->add_flag("--sweep", o.sweep, "Emit roundtrip error against deg_max as CSV instead");
  auto* ellipse = app.add_subcommand("ellipse", "Compare the potential with the ellipse closed form");
  add_common(ellipse);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (coeffs->parsed()) return run_coeffs(o);
    if (potential->parsed()) return run_potential(o);
    if (map->parsed()) return run_map(o);
    if (moments->parsed()) return run_moments(o);
    if (verify->parsed()) return run_verify(o);
    if (ellipse->parsed()) return run_ellipse(o);
  } catch (const Failure& f) {
    std::cerr << "riemap: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "riemap: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
