#pragma once

#include <complex>
#include <vector>

namespace riemap {

/// Numeric harmonic moments of a domain: t0 (interior area over pi) and the
/// holomorphic moments t_1..t_n. Barred moments are never stored; wherever a
/// barred variable is evaluated it receives the complex conjugate of t_k.
struct MomentVector {
  double t0 = 1.0;
  std::vector<std::complex<double>> t;

  /// t_k for k >= 1, zero beyond the stored range.
  std::complex<double> at(int k) const {
    return k >= 1 && static_cast<std::size_t>(k) <= t.size() ? t[k - 1] : std::complex<double>{};
  }
};

}  // namespace riemap
