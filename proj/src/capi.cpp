#include "riemap/riemap.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "riemap/error.hpp"
#include "riemap/io.hpp"

struct riemap_potential {
  riemap::PotentialSeries value;
};
struct riemap_moments {
  riemap::MomentVector value;
};
struct riemap_curve {
  riemap::BoundaryCurve value;
};
struct riemap_map {
  riemap::ExteriorMapSeries value;
};

namespace {

thread_local std::string last_error;

riemap_status status_of(riemap::ErrorCode code) { return static_cast<riemap_status>(static_cast<int>(code)); }

template <class F>
riemap_status guard(F&& f) {
  last_error.clear();
  try {
    f();
    return RIEMAP_OK;
  } catch (const riemap::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RIEMAP_INTERNAL_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RIEMAP_INTERNAL_ERROR;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw riemap::Error(riemap::ErrorCode::invalid_argument, what);
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

riemap::TruncationPolicy to_policy(riemap_policy p) {
  riemap::TruncationPolicy out{p.n_max, p.deg_max, p.t0_max};
  out.validate();
  return out;
}

std::vector<std::complex<double>> complex_list(const double* data, std::size_t n) {
  std::vector<std::complex<double>> out;
  for (std::size_t k = 0; k < n; ++k) out.emplace_back(data[2 * k], data[2 * k + 1]);
  return out;
}

std::vector<riemap::IndexMultiplicity> pair_list(const int* data, std::size_t n) {
  std::vector<riemap::IndexMultiplicity> out;
  for (std::size_t k = 0; k < n; ++k) out.push_back({data[2 * k], data[2 * k + 1]});
  return out;
}

}  // namespace

extern "C" {

const char* riemap_version(void) { return "0.1.0"; }

const char* riemap_last_error(void) { return last_error.c_str(); }

void riemap_string_free(char* s) { std::free(s); }

riemap_policy riemap_policy_saturated(int n_max, int deg_max) {
  const auto p = riemap::TruncationPolicy::saturated(n_max, deg_max);
  return {p.n_max, p.deg_max, p.t0_max};
}

riemap_status riemap_potential_build(riemap_policy policy, int gradient_order, unsigned threads,
                                     riemap_potential** out, riemap_build_report* report) {
  return guard([&] {
    require(out, "out must not be NULL");
    riemap::BuildOptions options;
    options.gradient_order = gradient_order;
    options.threads = threads;
    auto [f, r] = riemap::build_potential(to_policy(policy), options);
    *out = new riemap_potential{std::move(f)};
    if (report) *report = {r.keys_evaluated, r.nonzero_terms, r.elapsed};
  });
}

riemap_status riemap_potential_from_json(const char* json, riemap_potential** out) {
  return guard([&] {
    require(json && out, "arguments must not be NULL");
    *out = new riemap_potential{riemap::io::potential_from_json(riemap::io::parse_json(json))};
  });
}

riemap_status riemap_potential_write(const riemap_potential* f, riemap_format format, char** out) {
  return guard([&] {
    require(f && out, "arguments must not be NULL");
    if (format == RIEMAP_FORMAT_JSON) {
      *out = duplicate(riemap::io::potential_to_json(f->value).dump());
    } else if (format == RIEMAP_FORMAT_TEXT) {
      *out = duplicate(riemap::io::series_to_text(f->value.regular));
    } else {
      throw riemap::Error(riemap::ErrorCode::invalid_argument, "potential supports json and text output");
    }
  });
}

riemap_status riemap_potential_policy(const riemap_potential* f, riemap_policy* out) {
  return guard([&] {
    require(f && out, "arguments must not be NULL");
    const auto& p = f->value.policy();
    *out = {p.n_max, p.deg_max, p.t0_max};
  });
}

riemap_status riemap_potential_term_count(const riemap_potential* f, size_t* out) {
  return guard([&] {
    require(f && out, "arguments must not be NULL");
    *out = f->value.regular.size();
  });
}

riemap_status riemap_potential_coefficient(const riemap_potential* f, const char* monomial, char** out) {
  return guard([&] {
    require(f && monomial && out, "arguments must not be NULL");
    riemap::Monomial target;
    if (std::string(monomial) != "1") {
      // Parse "1 * <monomial>" under a policy that admits anything written.
      const auto parsed = riemap::io::series_from_text(std::string("# policy 100000 100000 100000\n1 * ") +
                                                      monomial + "\n");
      if (parsed.size() != 1) throw riemap::Error(riemap::ErrorCode::parse_error, "expected a single monomial");
      target = parsed.terms().begin()->first;
    }
    *out = duplicate(f->value.regular.coefficient(target).get_str());
  });
}

void riemap_potential_free(riemap_potential* f) { delete f; }

riemap_status riemap_moments_create(double t0, const double* t, size_t n, riemap_moments** out) {
  return guard([&] {
    require(out && (t || n == 0), "arguments must not be NULL");
    auto values = complex_list(t, n);
    bool finite = std::isfinite(t0);
    for (const auto& z : values) finite = finite && std::isfinite(z.real()) && std::isfinite(z.imag());
    if (!finite) throw riemap::Error(riemap::ErrorCode::non_finite, "moments must be finite");
    require(t0 > 0, "t0 must be positive");
    *out = new riemap_moments{{t0, std::move(values)}};
  });
}

riemap_status riemap_moments_from_json(const char* json, riemap_moments** out) {
  return guard([&] {
    require(json && out, "arguments must not be NULL");
    *out = new riemap_moments{riemap::io::moments_from_json(riemap::io::parse_json(json))};
  });
}

riemap_status riemap_moments_write(const riemap_moments* m, riemap_format format, char** out) {
  return guard([&] {
    require(m && out, "arguments must not be NULL");
    if (format == RIEMAP_FORMAT_JSON) {
      *out = duplicate(riemap::io::moments_to_json(m->value).dump());
    } else if (format == RIEMAP_FORMAT_CSV) {
      *out = duplicate(riemap::io::moments_to_csv(m->value));
    } else {
      throw riemap::Error(riemap::ErrorCode::invalid_argument, "moments support json and csv output");
    }
  });
}

riemap_status riemap_moments_t0(const riemap_moments* m, double* t0) {
  return guard([&] {
    require(m && t0, "arguments must not be NULL");
    *t0 = m->value.t0;
  });
}

riemap_status riemap_moments_count(const riemap_moments* m, size_t* n) {
  return guard([&] {
    require(m && n, "arguments must not be NULL");
    *n = m->value.t.size();
  });
}

riemap_status riemap_moments_get(const riemap_moments* m, size_t k, double* re, double* im) {
  return guard([&] {
    require(m && re && im, "arguments must not be NULL");
    if (k < 1 || k > m->value.t.size()) throw riemap::Error(riemap::ErrorCode::index_out_of_range, "no such moment");
    *re = m->value.t[k - 1].real();
    *im = m->value.t[k - 1].imag();
  });
}

void riemap_moments_free(riemap_moments* m) { delete m; }

riemap_status riemap_curve_create(double r, const double* a, size_t count, int samples, riemap_curve** out) {
  return guard([&] {
    require(out && (a || count == 0), "arguments must not be NULL");
    riemap::BoundaryCurve c{r, complex_list(a, count), samples};
    c.validate();
    *out = new riemap_curve{std::move(c)};
  });
}

riemap_status riemap_curve_from_json(const char* json, riemap_curve** out) {
  return guard([&] {
    require(json && out, "arguments must not be NULL");
    auto c = riemap::io::curve_from_json(riemap::io::parse_json(json));
    c.validate();
    *out = new riemap_curve{std::move(c)};
  });
}

riemap_status riemap_curve_write(const riemap_curve* c, char** json) {
  return guard([&] {
    require(c && json, "arguments must not be NULL");
    *json = duplicate(riemap::io::curve_to_json(c->value).dump());
  });
}

riemap_status riemap_curve_moments(const riemap_curve* c, int n, riemap_moments** out) {
  return guard([&] {
    require(c && out, "arguments must not be NULL");
    *out = new riemap_moments{riemap::moments_from_curve(c->value, n)};
  });
}

riemap_status riemap_curve_dual_moments(const riemap_curve* c, int n, double* out) {
  return guard([&] {
    require(c && out, "arguments must not be NULL");
    const auto v = riemap::v_moments_from_curve(c->value, n);
    for (std::size_t k = 0; k < v.size(); ++k) {
      out[2 * k] = v[k].real();
      out[2 * k + 1] = v[k].imag();
    }
  });
}

void riemap_curve_free(riemap_curve* c) { delete c; }

riemap_status riemap_map_from_potential(const riemap_potential* f, const riemap_moments* m, int order,
                                        riemap_map** out) {
  return guard([&] {
    require(f && m && out, "arguments must not be NULL");
    const int j = order < 0 ? riemap::default_map_order(f->value.policy()) : order;
    *out = new riemap_map{riemap::map_from_potential(f->value, m->value, j)};
  });
}

riemap_status riemap_map_from_json(const char* json, riemap_map** out) {
  return guard([&] {
    require(json && out, "arguments must not be NULL");
    *out = new riemap_map{riemap::io::map_from_json(riemap::io::parse_json(json))};
  });
}

riemap_status riemap_map_write(const riemap_map* w, char** json) {
  return guard([&] {
    require(w && json, "arguments must not be NULL");
    *json = duplicate(riemap::io::map_to_json(w->value).dump());
  });
}

riemap_status riemap_map_p(const riemap_map* w, double* p) {
  return guard([&] {
    require(w && p, "arguments must not be NULL");
    *p = w->value.p;
  });
}

riemap_status riemap_map_order(const riemap_map* w, int* order) {
  return guard([&] {
    require(w && order, "arguments must not be NULL");
    *order = w->value.order();
  });
}

riemap_status riemap_map_coefficient(const riemap_map* w, int j, double* re, double* im) {
  return guard([&] {
    require(w && re && im, "arguments must not be NULL");
    if (j < 0 || j > w->value.order()) throw riemap::Error(riemap::ErrorCode::index_out_of_range, "no such coefficient");
    *re = w->value.tail[j].real();
    *im = w->value.tail[j].imag();
  });
}

riemap_status riemap_map_evaluate(const riemap_map* w, double re, double im, double* out_re, double* out_im) {
  return guard([&] {
    require(w && out_re && out_im, "arguments must not be NULL");
    const auto v = riemap::evaluate_map(w->value, {re, im});
    *out_re = v.real();
    *out_im = v.imag();
  });
}

void riemap_map_free(riemap_map* w) { delete w; }

riemap_status riemap_potential_gradient(const riemap_potential* f, const riemap_moments* m, int kmax, double* out) {
  return guard([&] {
    require(f && m && out, "arguments must not be NULL");
    require(kmax >= 0, "kmax must be >= 0");
    const auto g = riemap::potential_gradient(f->value, m->value, kmax);
    for (std::size_t k = 0; k < g.size(); ++k) {
      out[2 * k] = g[k].real();
      out[2 * k + 1] = g[k].imag();
    }
  });
}

riemap_status riemap_n2(const int* unbarred_pairs, size_t unbarred_count, const int* barred_pairs,
                        size_t barred_count, char** out) {
  return guard([&] {
    require(out && (unbarred_pairs || unbarred_count == 0) && (barred_pairs || barred_count == 0),
            "arguments must not be NULL");
    riemap::CoefficientEngine engine;
    const riemap::NKey key(pair_list(unbarred_pairs, unbarred_count), pair_list(barred_pairs, barred_count));
    *out = duplicate(engine.n2(key).get_str());
  });
}

riemap_status riemap_coefficient_table(int i_max, int n_max, int deg_max, riemap_format format, char** out) {
  return guard([&] {
    require(out, "out must not be NULL");
    require(i_max >= 0 && n_max >= 0 && deg_max >= 0, "bounds must be >= 0");
    riemap::CoefficientEngine engine;
    const auto rows = riemap::io::coefficient_table(engine, i_max, n_max, deg_max);
    if (format == RIEMAP_FORMAT_CSV) {
      *out = duplicate(riemap::io::coefficient_table_csv(rows));
    } else if (format == RIEMAP_FORMAT_JSON) {
      *out = duplicate(riemap::io::coefficient_table_json(rows).dump());
    } else {
      throw riemap::Error(riemap::ErrorCode::invalid_argument, "coefficient tables support json and csv output");
    }
  });
}

riemap_status riemap_ellipse_check(riemap_policy policy, char** json, int* passed) {
  return guard([&] {
    require(json && passed, "arguments must not be NULL");
    const auto f = riemap::build_potential(to_policy(policy)).first;
    const auto report = riemap::ellipse_oracle_check(f);
    riemap::io::Json out{{"passed", report.passed()},
                         {"checked", report.checked},
                         {"violations", report.violations},
                         {"closed_form", riemap::io::series_to_json(riemap::ellipse_potential_series(f.policy()))}};
    *json = duplicate(out.dump());
    *passed = report.passed() ? 1 : 0;
  });
}

riemap_status riemap_convergence_gate(const riemap_moments* m, int n, riemap_convergence* out) {
  return guard([&] {
    require(m && out, "arguments must not be NULL");
    const auto v = riemap::convergence_gate(m->value, n);
    *out = {v.admissible ? 1 : 0, v.bound};
  });
}

riemap_status riemap_roundtrip(const riemap_curve* c, riemap_policy policy, int order, double radius,
                               double* sup_error) {
  return guard([&] {
    require(c && sup_error, "arguments must not be NULL");
    const auto p = to_policy(policy);
    const int j = order < 0 ? riemap::default_map_order(p) : order;
    *sup_error = riemap::roundtrip(c->value, p, j, radius).sup_error;
  });
}

void riemap_verify_config_default(riemap_verify_config* config) {
  if (!config) return;
  const riemap::VerificationConfig d;
  config->policy = {d.policy.n_max, d.policy.deg_max, d.policy.t0_max};
  config->toda_order = d.toda_order;
  config->toda_deg_max = d.toda_deg_max;
  config->map_order = d.map_order;
  config->probe_radius = d.probe_radius;
  config->roundtrip_tolerance = d.roundtrip_tolerance;
  config->dual_moment_tolerance = d.dual_moment_tolerance;
  config->seed = d.seed;
  config->bound_samples = d.bound_samples;
  config->curve = nullptr;
}

riemap_status riemap_verify(const riemap_verify_config* config, char** json, int* passed) {
  return guard([&] {
    require(config && json && passed, "arguments must not be NULL");
    riemap::VerificationConfig c;
    c.policy = to_policy(config->policy);
    c.toda_order = config->toda_order;
    c.toda_deg_max = config->toda_deg_max;
    c.map_order = config->map_order < 0 ? riemap::default_map_order(c.policy) : config->map_order;
    c.probe_radius = config->probe_radius;
    c.roundtrip_tolerance = config->roundtrip_tolerance;
    c.dual_moment_tolerance = config->dual_moment_tolerance;
    c.seed = config->seed;
    c.bound_samples = config->bound_samples;
    if (config->curve) c.curve = config->curve->value;
    const auto items = riemap::run_verification(c);
    const auto report = riemap::io::verification_to_json(items);
    *json = duplicate(report.dump());
    *passed = report.at("passed").get<bool>() ? 1 : 0;
  });
}

}  // extern "C"
