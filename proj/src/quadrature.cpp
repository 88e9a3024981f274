#include "riemap/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "riemap/error.hpp"

namespace riemap {

namespace {

using cd = std::complex<double>;

std::complex<double> pairwise(const cd* v, std::size_t n) {
  if (n <= 8) {
    cd acc{};
    for (std::size_t i = 0; i < n; ++i) acc += v[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise(v, half) + pairwise(v + half, n - half);
}

struct Node {
  cd z;
  cd zbar;
  cd weight;  // z'(u) u / N
};

std::vector<Node> nodes(const BoundaryCurve& c) {
  c.validate();
  std::vector<Node> out(static_cast<std::size_t>(c.samples));
  for (int s = 0; s < c.samples; ++s) {
    const double theta = 2.0 * std::numbers::pi * s / c.samples;
    const cd u = std::polar(1.0, theta);
    const cd z = c.point(u);
    out[s] = {z, std::conj(z), c.derivative(u) * u / static_cast<double>(c.samples)};
  }
  return out;
}

cd check_finite(cd v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw Error(ErrorCode::non_finite, std::string(what) + " quadrature is not finite");
  }
  return v;
}

}  // namespace

void BoundaryCurve::validate() const {
  if (!(r > 0) || !std::isfinite(r)) throw Error(ErrorCode::invalid_argument, "curve r must be positive and finite");
  if (samples < 64 || (samples & (samples - 1)) != 0) {
    throw Error(ErrorCode::invalid_argument, "samples must be a power of two >= 64");
  }
  double lever = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (!std::isfinite(a[j].real()) || !std::isfinite(a[j].imag())) {
      throw Error(ErrorCode::non_finite, "curve coefficient a" + std::to_string(j) + " is not finite");
    }
    lever += static_cast<double>(j) * std::abs(a[j]);
  }
  if (!(r > lever)) {
    throw Error(ErrorCode::not_univalent, "curve fails r > sum j |a_j| (" + std::to_string(r) +
                                              " <= " + std::to_string(lever) + ")");
  }
}

std::complex<double> BoundaryCurve::point(std::complex<double> u) const {
  const cd x = 1.0 / u;
  cd acc{};
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * x + *it;
  return r * u + acc;
}

std::complex<double> BoundaryCurve::derivative(std::complex<double> u) const {
  const cd x = 1.0 / u;
  cd acc{};
  // d/du a_j u^-j = -j a_j u^-j-1
  for (std::size_t j = a.size(); j-- > 1;) acc = (acc - static_cast<double>(j) * a[j]) * x;
  return r + acc * x;
}

std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& values) {
  return pairwise(values.data(), values.size());
}

MomentVector moments_from_curve(const BoundaryCurve& c, int n) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "moment count must be >= 1");
  const auto ns = nodes(c);
  std::vector<cd> terms(ns.size());
  for (std::size_t s = 0; s < ns.size(); ++s) terms[s] = ns[s].zbar * ns[s].weight;
  MomentVector m;
  m.t0 = check_finite(pairwise_sum(terms), "t0").real();
  for (int k = 1; k <= n; ++k) {
    for (std::size_t s = 0; s < ns.size(); ++s) terms[s] = ns[s].zbar * std::pow(ns[s].z, -k) * ns[s].weight;
    m.t.push_back(check_finite(pairwise_sum(terms), "t_k") / static_cast<double>(k));
  }
  return m;
}

std::vector<std::complex<double>> v_moments_from_curve(const BoundaryCurve& c, int n) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "moment count must be >= 0");
  const auto ns = nodes(c);
  std::vector<cd> terms(ns.size());
  std::vector<cd> out;
  for (std::size_t s = 0; s < ns.size(); ++s) {
    terms[s] = ns[s].zbar * (std::log(std::norm(ns[s].z)) - 1.0) * ns[s].weight;
  }
  out.push_back(check_finite(pairwise_sum(terms), "v_0"));
  for (int k = 1; k <= n; ++k) {
    for (std::size_t s = 0; s < ns.size(); ++s) terms[s] = ns[s].zbar * std::pow(ns[s].z, k) * ns[s].weight;
    out.push_back(check_finite(pairwise_sum(terms), "v_k"));
  }
  return out;
}

}  // namespace riemap
