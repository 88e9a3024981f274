#include "riemap/conformal_map.hpp"

#include <cmath>

#include "riemap/error.hpp"

namespace riemap {

namespace {

bool finite(std::complex<double> z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

MomentVector fit_moments(const PotentialSeries& f, const MomentVector& m) {
  if (!std::isfinite(m.t0)) throw Error(ErrorCode::non_finite, "t0 is not finite");
  if (m.t0 <= 0) throw Error(ErrorCode::invalid_argument, "t0 must be positive");
  const int n_max = f.policy().n_max;
  MomentVector out;
  out.t0 = m.t0;
  out.t.assign(static_cast<std::size_t>(n_max), {});
  for (std::size_t k = 0; k < m.t.size(); ++k) {
    if (!finite(m.t[k])) throw Error(ErrorCode::non_finite, "moment t" + std::to_string(k + 1) + " is not finite");
    if (static_cast<int>(k) < n_max) {
      out.t[k] = m.t[k];
    } else if (m.t[k] != std::complex<double>{}) {
      throw Error(ErrorCode::index_out_of_range,
                  "moment t" + std::to_string(k + 1) + " is nonzero but the potential stops at n_max = " +
                      std::to_string(n_max));
    }
  }
  return out;
}

TimeDerivatives time_derivatives(const PotentialSeries& f, const MomentVector& m, int kmax) {
  const auto point = fit_moments(f, m);
  const auto t0 = Variable::time();
  TimeDerivatives out;
  out.log_t0 = std::log(point.t0);
  out.a = evaluate(derive(derive(f.regular, t0), t0), point);
  for (int k = 1; k <= kmax; ++k) out.b.push_back(evaluate(derive(holomorphic_gradient(f, k), t0), point));
  return out;
}

int default_map_order(const TruncationPolicy& policy) { return policy.n_max + policy.deg_max; }

ExteriorMapSeries map_from_potential(const PotentialSeries& f, const MomentVector& m, int order) {
  if (order < 0) throw Error(ErrorCode::invalid_argument, "map order must be >= 0");
  const auto d = time_derivatives(f, m, order + 1);

  // p = exp(-1/2 (log t0 + A)); the imaginary part of A vanishes for
  // conjugate-symmetric input and is dropped.
  ExteriorMapSeries w;
  w.p = std::exp(-0.5 * (d.log_t0 + d.a.real()));

  // c_n of exp(-sum_k B_k x^k / k): n c_n = -sum_{k=1..n} B_k c_{n-k}.
  std::vector<std::complex<double>> c(static_cast<std::size_t>(order) + 2);
  c[0] = 1.0;
  for (int n = 1; n <= order + 1; ++n) {
    std::complex<double> acc{};
    for (int k = 1; k <= n; ++k) acc -= d.b[k - 1] * c[n - k];
    c[n] = acc / static_cast<double>(n);
  }
  for (int j = 0; j <= order; ++j) w.tail.push_back(w.p * c[j + 1]);
  for (const auto& v : w.tail) {
    if (!finite(v) || !std::isfinite(w.p)) throw Error(ErrorCode::non_finite, "map coefficients are not finite");
  }
  return w;
}

std::complex<double> evaluate_map(const ExteriorMapSeries& w, std::complex<double> z) {
  const auto x = 1.0 / z;
  std::complex<double> acc{};
  for (auto it = w.tail.rbegin(); it != w.tail.rend(); ++it) acc = acc * x + *it;
  return w.p * z + acc;
}

std::vector<std::complex<double>> potential_gradient(const PotentialSeries& f, const MomentVector& m, int kmax) {
  const auto point = fit_moments(f, m);
  std::vector<std::complex<double>> out;
  const double t0 = point.t0;
  const double singular = to_double(2 * f.singular_log_coeff) * t0 * std::log(t0) +
                          to_double(f.singular_log_coeff + 2 * f.singular_quad_coeff) * t0;
  out.push_back(singular + evaluate(derive(f.regular, Variable::time()), point));
  for (int k = 1; k <= kmax; ++k) out.push_back(evaluate(holomorphic_gradient(f, k), point));
  return out;
}

}  // namespace riemap
