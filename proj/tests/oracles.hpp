#pragma once

// Slow, independent reference computations. Nothing here calls into the
// coefficient engine or the quadrature module.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using Q = mpq_class;
using cd = std::complex<double>;

inline mpz_class fact(int n) {
  mpz_class f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Tuples (i_1..i_m), sum i, 1 <= i_r <= s_r - 1, by plain enumeration.
inline long count_tuples(int i, const std::vector<int>& s) {
  long count = 0;
  std::vector<int> t(s.size(), 1);
  std::function<void(std::size_t, int)> rec = [&](std::size_t r, int left) {
    if (r == s.size()) {
      if (left == 0) ++count;
      return;
    }
    for (int x = 1; x <= s[r] - 1 && x <= left; ++x) rec(r + 1, left - x);
  };
  rec(0, i);
  return count;
}

inline void each_composition(int n, int m, const std::function<void(const std::vector<int>&)>& f) {
  if (m == 0) {
    if (n == 0) f({});
    return;
  }
  std::vector<int> parts(m);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == m - 1) {
      if (left >= 1) {
        parts[pos] = left;
        f(parts);
      }
      return;
    }
    for (int a = 1; a <= left - (m - 1 - pos); ++a) {
      parts[pos] = a;
      rec(pos + 1, left - a);
    }
  };
  rec(0, n);
}

inline Q t1(int i, const std::vector<int>& s) {
  const int m = static_cast<int>(s.size());
  Q total = 0;
  for (int k = 1; k <= m; ++k) {
    each_composition(m, k, [&](const std::vector<int>& n) {
      std::vector<int> agg;
      mpz_class den = k;
      std::size_t pos = 0;
      for (int nr : n) {
        int sum = 0;
        for (int q = 0; q < nr; ++q) sum += s[pos++];
        agg.push_back(sum);
        den *= fact(nr);
      }
      total += Q(count_tuples(i, agg)) / Q(den);
    });
  }
  return total;
}

// Window recursion with the linear weight l.
inline Q t2(const std::vector<int>& is, const std::vector<int>& s, const std::vector<int>& l) {
  const int k = static_cast<int>(is.size());
  const int m = static_cast<int>(s.size());
  if (k == 2) {
    for (int x : l) {
      if (x != 1) return 0;
    }
    return t1(is[0], s);
  }
  Q total = 0;
  const int last = is.back();
  const std::vector<int> head(is.begin(), is.end() - 1);
  for (int a = 0; a < m; ++a) {
    for (int b = a; b < m; ++b) {
      int ss = -last;
      int ll = 0;
      for (int r = a; r <= b; ++r) {
        ss += s[r];
        ll += l[r] - 1;
      }
      if (ss < 1 || ll < 1) continue;
      std::vector<int> window(s.begin() + a, s.begin() + b + 1);
      std::vector<int> s2(s.begin(), s.begin() + a), l2(l.begin(), l.begin() + a);
      s2.push_back(ss);
      l2.push_back(ll);
      s2.insert(s2.end(), s.begin() + b + 1, s.end());
      l2.insert(l2.end(), l.begin() + b + 1, l.end());
      total += Q(ll) * t1(ss, window) * t2(head, s2, l2);
    }
  }
  return total;
}

// Assignments of barred positions to m labelled non-empty blocks.
inline Q s_value(const std::vector<int>& barred, const std::vector<int>& s, const std::vector<int>& l) {
  const int kb = static_cast<int>(barred.size());
  const int m = static_cast<int>(s.size());
  Q total = 0;
  std::vector<int> label(kb, 0);
  while (true) {
    std::vector<int> sums(m, 0), sizes(m, 0);
    for (int p = 0; p < kb; ++p) {
      sums[label[p]] += barred[p];
      ++sizes[label[p]];
    }
    bool ok = true;
    Q prod = 1;
    for (int r = 0; r < m && ok; ++r) {
      const int rest = s[r] - sizes[r] - l[r] + 1;
      ok = sizes[r] > 0 && sums[r] == s[r] && rest >= 0;
      if (ok) prod *= Q(fact(s[r] - 1)) / Q(fact(rest) * fact(l[r] - 1));
    }
    if (ok) total += prod;
    int p = 0;
    while (p < kb && ++label[p] == m) label[p++] = 0;
    if (p == kb) break;
  }
  return total;
}

inline Q n1(int i, const std::vector<int>& u, const std::vector<int>& b) {
  const int k = static_cast<int>(u.size());
  const int kb = static_cast<int>(b.size());
  if (std::accumulate(u.begin(), u.end(), 0) != i || std::accumulate(b.begin(), b.end(), 0) != i) return 0;
  if (k == 1) return Q(fact(i - 1)) / Q(fact(i - kb + 1));
  if (kb == 1) return Q(fact(i - 1)) / Q(fact(i - k + 1));
  Q total = 0;
  for (int m = 1; m <= i; ++m) {
    each_composition(i, m, [&](const std::vector<int>& s) {
      each_composition(m + k - 2, m, [&](const std::vector<int>& l) {
        const Q sv = s_value(b, s, l);
        if (sgn(sv) == 0) return;
        const Q term = sv * t2(u, s, l);
        total += (m % 2 == 1) ? term : Q(-term);
      });
    });
  }
  return total;
}

// Coefficient of t0^p * prod t_k^e * prod tbar_k^e in the ellipse closed form,
// by hand expansion of 1/2 t0^2 sum X^n/n + t0 (|t1|^2 + t1^2 tbar2 + tbar1^2 t2) sum X^n
// with X = 4 t2 tbar2. Exponents are (t1, tbar1, t2, tbar2).
inline Q ellipse_coefficient(int p, int e1, int eb1, int e2, int eb2) {
  auto four = [](int n) { return Q(mpz_class(1) << (2 * n)); };
  if (p == 2 && e1 == 0 && eb1 == 0 && e2 == eb2 && e2 >= 1) return four(e2) / (2 * e2);
  if (p != 1) return 0;
  if (e1 == 1 && eb1 == 1 && e2 == eb2) return four(e2);
  if (e1 == 2 && eb1 == 0 && eb2 == e2 + 1) return four(e2);
  if (e1 == 0 && eb1 == 2 && e2 == eb2 + 1) return four(eb2);
  return 0;
}

// --- area quadrature ---

struct Curve {
  double r;
  std::vector<cd> a;
  cd z(cd u) const {
    cd acc = r * u;
    cd x = 1.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      acc += a[j] * x;
      x /= u;
    }
    return acc;
  }
  cd dz(cd u) const {
    cd acc = r;
    for (std::size_t j = 1; j < a.size(); ++j) acc -= double(j) * a[j] * std::pow(u, -int(j) - 1);
    return acc;
  }
};

// Boundary radius in direction phi for a domain star-shaped about 0.
inline double boundary_radius(const Curve& c, double phi) {
  double theta = phi;
  for (int it = 0; it < 100; ++it) {
    const cd u = std::polar(1.0, theta);
    const cd z = c.z(u);
    const double f = std::arg(z * std::polar(1.0, -phi));
    const double df = std::real(u * c.dz(u) / z);
    const double step = f / df;
    theta -= step;
    if (std::abs(step) < 1e-16) break;
  }
  return std::abs(c.z(std::polar(1.0, theta)));
}

// Gauss-Legendre nodes/weights on [0, 1].
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - t);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);
  }
}

// (1/pi) * integral over the interior of g, in polar coordinates: trapezoid
// in the angle, Gauss-Legendre in the radius.
inline cd interior_integral(const Curve& c, const std::function<cd(cd)>& g, int angles = 512, int radial = 40) {
  std::vector<double> x, w;
  gauss_legendre(radial, x, w);
  cd total = 0.0;
  for (int s = 0; s < angles; ++s) {
    const double phi = 2.0 * std::numbers::pi * s / angles;
    const double rho = boundary_radius(c, phi);
    cd inner = 0.0;
    for (int q = 0; q < radial; ++q) {
      const double r = rho * x[q];
      inner += w[q] * g(std::polar(r, phi)) * r;
    }
    total += inner * rho;
  }
  return total * (2.0 * std::numbers::pi / angles) / std::numbers::pi;
}

// (1/pi) * integral over the interior of log|z|^2, radial part in closed
// form: int_0^rho log(r^2) r dr = rho^2 log rho - rho^2 / 2.
inline double interior_log_integral(const Curve& c, int angles = 512) {
  double total = 0.0;
  for (int s = 0; s < angles; ++s) {
    const double rho = boundary_radius(c, 2.0 * std::numbers::pi * s / angles);
    total += rho * rho * std::log(rho) - rho * rho / 2.0;
  }
  return total * (2.0 * std::numbers::pi / angles) / std::numbers::pi;
}

// t_k from the exterior area integral, radial part done in closed form and
// the divergent |z| -> infinity end dropped (it integrates to zero in the
// angle for k >= 1).
inline cd exterior_moment(const Curve& c, int k, int angles = 512) {
  cd total = 0.0;
  for (int s = 0; s < angles; ++s) {
    const double phi = 2.0 * std::numbers::pi * s / angles;
    const double rho = boundary_radius(c, phi);
    const double radial = k == 2 ? -std::log(rho) : std::pow(rho, 2.0 - k) / (k - 2.0);
    total += radial * std::polar(1.0, -k * phi);
  }
  total *= 2.0 * std::numbers::pi / angles;
  return -total / (std::numbers::pi * k);
}

// Winding number of the boundary polygon around p.
inline int winding(const std::vector<cd>& poly, cd p) {
  double total = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    total += std::arg((poly[(i + 1) % poly.size()] - p) / (poly[i] - p));
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

// Naive midpoint rule on a grid with a winding-number membership test.
inline cd midpoint_integral(const Curve& c, const std::function<cd(cd)>& g, int grid = 200) {
  std::vector<cd> poly;
  double reach = 0.0;
  for (int s = 0; s < 1024; ++s) {
    poly.push_back(c.z(std::polar(1.0, 2.0 * std::numbers::pi * s / 1024)));
    reach = std::max(reach, std::abs(poly.back()));
  }
  const double h = 2.0 * reach * 1.01 / grid;
  cd total = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const cd p(-reach * 1.01 + (i + 0.5) * h, -reach * 1.01 + (j + 0.5) * h);
      if (winding(poly, p) != 0) total += g(p);
    }
  }
  return total * h * h / std::numbers::pi;
}

}  // namespace oracle
