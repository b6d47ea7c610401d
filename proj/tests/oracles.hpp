#pragma once

// Reference computations that share no code with the library: direct Fourier
// sums, brute-force convolutions, quadrature and finite differences.

#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "spectral.hpp"

namespace oracle {

using lcsim::cplx;
using lcsim::Grid;
using lcsim::SpectralField;

inline double uniform(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool nyquist(const Grid& g, int j, int i) { return j == -g.nx / 2 || i == -g.ny / 2; }

// Random real field with |j| <= jmax, |i| <= imax (labels), Nyquist excluded.
inline SpectralField random_field(const Grid& g, std::mt19937_64& rng, int jmax, int imax,
                                  double shear_time = 0.0) {
  SpectralField f(g, shear_time);
  for (int j = 0; j <= jmax; ++j)
    for (int i = -imax; i <= imax; ++i) {
      if (j == 0 && i < 0) continue;
      const cplx c{uniform(rng), (j == 0 && i == 0) ? 0.0 : uniform(rng)};
      f(g.row_of(j), g.col_of(i)) = c;
      f(g.row_of(-j), g.col_of(-i)) = std::conj(c);
    }
  return f;
}

inline SpectralField random_band_limited(const Grid& g, std::mt19937_64& rng,
                                         double shear_time = 0.0) {
  return random_field(g, rng, g.nx / 2 - 1, g.ny / 2 - 1, shear_time);
}

// f(x, y) = sum c exp(i (k x + xi_eff y)) evaluated term by term.
inline double eval_direct(const SpectralField& f, double x, double y) {
  const Grid& g = f.grid();
  cplx s{};
  for (int p = 0; p < g.nx; ++p)
    for (int q = 0; q < g.ny; ++q) {
      const double k = M_PI / g.lx * (p < g.nx / 2 ? p : p - g.nx);
      const double xi = M_PI / g.ly * (q < g.ny / 2 ? q : q - g.ny) + k * f.shear_time();
      s += f(p, q) * std::exp(cplx{0.0, k * x + xi * y});
    }
  return s.real();
}

// Label convolution of in-band, non-Nyquist coefficients, truncated to the
// non-Nyquist band.
inline SpectralField convolve(const SpectralField& a, const SpectralField& b) {
  const Grid& g = a.grid();
  SpectralField out(g, a.shear_time());
  const int hj = g.nx / 2, hi = g.ny / 2;
  for (int j1 = -hj + 1; j1 < hj; ++j1)
    for (int i1 = -hi + 1; i1 < hi; ++i1) {
      const cplx ca = a(g.row_of(j1), g.col_of(i1));
      if (ca == cplx{}) continue;
      for (int j2 = -hj + 1; j2 < hj; ++j2)
        for (int i2 = -hi + 1; i2 < hi; ++i2) {
          const int j = j1 + j2, i = i1 + i2;
          if (j <= -hj || j >= hj || i <= -hi || i >= hi) continue;
          out(g.row_of(j), g.col_of(i)) += ca * b(g.row_of(j2), g.col_of(i2));
        }
    }
  return out;
}

// Full (untruncated) convolution kept on a wider label range, then truncated;
// needed for triple products where the intermediate leaves the band.
inline SpectralField convolve3(const SpectralField& a, const SpectralField& b,
                               const SpectralField& c) {
  const Grid& g = a.grid();
  const int hj = g.nx / 2, hi = g.ny / 2;
  const int wj = 2 * hj, wi = 2 * hi;  // intermediate half-widths
  std::vector<cplx> mid(static_cast<std::size_t>(2 * wj + 1) * (2 * wi + 1));
  const auto at = [&](int j, int i) -> cplx& {
    return mid[static_cast<std::size_t>(j + wj) * (2 * wi + 1) + (i + wi)];
  };
  for (int j1 = -hj + 1; j1 < hj; ++j1)
    for (int i1 = -hi + 1; i1 < hi; ++i1) {
      const cplx ca = a(g.row_of(j1), g.col_of(i1));
      if (ca == cplx{}) continue;
      for (int j2 = -hj + 1; j2 < hj; ++j2)
        for (int i2 = -hi + 1; i2 < hi; ++i2) at(j1 + j2, i1 + i2) += ca * b(g.row_of(j2), g.col_of(i2));
    }
  SpectralField out(g, a.shear_time());
  for (int jm = -wj; jm <= wj; ++jm)
    for (int im = -wi; im <= wi; ++im) {
      const cplx cm = at(jm, im);
      if (cm == cplx{}) continue;
      for (int j3 = -hj + 1; j3 < hj; ++j3)
        for (int i3 = -hi + 1; i3 < hi; ++i3) {
          const int j = jm + j3, i = im + i3;
          if (j <= -hj || j >= hj || i <= -hi || i >= hi) continue;
          out(g.row_of(j), g.col_of(i)) += cm * c(g.row_of(j3), g.col_of(i3));
        }
    }
  return out;
}

inline double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

inline double max_abs(const SpectralField& a) {
  double m = 0.0;
  for (const cplx& c : a.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-14, int max_depth = 50) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

// Least-squares slope of log y on log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
