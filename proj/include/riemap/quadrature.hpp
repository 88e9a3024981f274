#pragma once

// Harmonic moments of the domain bounded by z(u) = r u + sum_j a_j u^-j,
// |u| = 1, computed by the trapezoid rule on contour forms of the area
// integrals. For holomorphic g and a region with positively oriented
// boundary, int g dA = (1/2i) oint conj(z) g dz, which gives
//
//   t0  = (1/2 pi i) oint conj(z) dz
//   t_k = (1/2 pi i k) oint conj(z) z^-k dz        (exterior region, k >= 1)
//   v_k = (1/2 pi i) oint conj(z) z^k dz            (interior region, k >= 1)
//   v_0 = (1/2 pi i) oint conj(z) (log|z|^2 - 1) dz
//
// The last uses d/dzbar [zbar (log|z|^2 - 1)] = log|z|^2. With u = e^{i theta}
// every (1/2 pi i) oint h dz becomes the mean of h(z(u)) z'(u) u over the
// nodes.

#include <complex>
#include <cstddef>
#include <vector>

#include "riemap/moment_vector.hpp"

namespace riemap {

struct BoundaryCurve {
  double r = 1.0;
  std::vector<std::complex<double>> a;  // a_0 .. a_M
  int samples = 256;

  /// Throws not_univalent unless r > sum_{j>=1} j |a_j|, invalid_argument
  /// unless samples is a power of two >= 64 and r > 0.
  void validate() const;
  std::complex<double> point(std::complex<double> u) const;
  std::complex<double> derivative(std::complex<double> u) const;
};

/// Pairwise sum in a fixed order; bitwise reproducible for a given input.
std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& values);

MomentVector moments_from_curve(const BoundaryCurve& c, int n);

/// v_0 .. v_n.
std::vector<std::complex<double>> v_moments_from_curve(const BoundaryCurve& c, int n);

}  // namespace riemap
