#pragma once

// Exterior map w(z) = p z + p_0 + p_1/z + ... reconstructed from the
// potential at numeric moments through
//
//   w(z) = z exp(-1/2 d0^2 F - sum_k z^-k/k d0 dk F).

#include <complex>
#include <vector>

#include "riemap/moment_vector.hpp"
#include "riemap/potential.hpp"

namespace riemap {

struct ExteriorMapSeries {
  double p = 1.0;
  std::vector<std::complex<double>> tail;  // p_0 .. p_J

  int order() const { return static_cast<int>(tail.size()) - 1; }
};

/// Second t0-derivatives of F at a moment point.
struct TimeDerivatives {
  double log_t0 = 0.0;
  std::complex<double> a;               // d0^2 F_regular
  std::vector<std::complex<double>> b;  // b[k-1] = d0 dk F, k = 1..kmax
};

/// Pads m with zeros to n_max entries; rejects t0 <= 0, non-finite values
/// and nonzero moments beyond n_max.
MomentVector fit_moments(const PotentialSeries& f, const MomentVector& m);

TimeDerivatives time_derivatives(const PotentialSeries& f, const MomentVector& m, int kmax);

/// Default tail order: n_max + deg_max.
int default_map_order(const TruncationPolicy& policy);

ExteriorMapSeries map_from_potential(const PotentialSeries& f, const MomentVector& m, int order);

/// p z + sum_j p_j z^-j by Horner in 1/z.
std::complex<double> evaluate_map(const ExteriorMapSeries& w, std::complex<double> z);

/// d_k F at m for k = 1..kmax (dual moments v_k), and d0 F including the
/// singular part at index 0.
std::vector<std::complex<double>> potential_gradient(const PotentialSeries& f, const MomentVector& m, int kmax);

}  // namespace riemap
