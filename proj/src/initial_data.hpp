#pragma once

// The large-energy director family
//
//   d_in(x, y) = lam^theta phi(lam x) phi(y) cos(N y) e1,   u_in = 0,
//
// with phi a smooth bump in frequency, plus its norms, the parameter gap
// condition and the amplitude threshold.

#include <string>
#include <vector>

#include "flow_model.hpp"
#include "multiplier_norms.hpp"
#include "spectral.hpp"

namespace lcsim {

// Unnormalized C-infinity bump exp(-1/(1-u^2)), u = 2|s| - 3, supported on
// 1 <= |s| <= 2. Symmetric so that phi is real.
double bump_hat(double s);

// Fourier coefficients (FFT order, box normalization) on an n-point line of
// half-period half_period of phi(scale x) cos(modulation x), where phi has unit
// L2(R) norm in the discrete sense. Throws ValidationError if the support is
// not resolved or leaves the band.
std::vector<double> band_profile_coeffs(int n, double half_period, double scale,
                                        double modulation = 0.0);

// The profile phi itself on the x-line of grid (scale 1, no modulation).
SpectralField schwartz_band_profile(const Grid& grid);

struct InitialDataParams {
  double lambda = 0.3;
  double N = 38.0;
  double theta = 1.0;

  void validate(const NormParams& np) const;  // throws ValidationError
};

// N rounded to the nearest multiple of the grid's xi spacing.
double snap_frequency(const Grid& grid, double N);

// Scalar amplitude g = lam^theta phi(lam x) phi(y) cos(N y).
SpectralField make_family_scalar(const InitialDataParams& p, const Grid& grid);
// Paper form d = g e1 (components 2, 3 zero). Not on the unit sphere.
Director make_director_data(const InitialDataParams& p, const Grid& grid);
// On-sphere data n = (cos g, sin g, 0), d = n - e1, evaluated at the collocation points.
Director lift_to_sphere(const SpectralField& g);

// A grid resolving the family for the given parameters, used by reports.
Grid report_grid(const InitialDataParams& p);

struct GapResult {
  bool gap_ok = false;
  double N_max = 0.0;
  double mu = 0.0;
  double kappa = 0.0;
};

double gap_kappa(double delta);

// C_cal (N^2 lam^mu)^kappa < (lam^mu)^{-1/delta}, mu = theta - eps - 1/6.
// Throws ValidationError if mu <= 0.
GapResult gap_check(const InitialDataParams& p, const NormParams& np, double C_cal);

// C_cal (H + W_omega + 1)^kappa
double amplitude_threshold(double H, double W_omega, const NormParams& np, double C_cal);

struct DataReport {
  double L = 0.0;        // || |Dx|^{1/3} d ||_Y
  double H = 0.0;        // || (d_x^2, d_y^2) |Dx|^{1/3} d ||_Y
  double E = 0.0;        // || grad d ||^2
  double W_omega = 0.0;  // ||w_in||_Y
  double A_bar = 0.0;
  double A_max = 0.0;  // L^{-1/delta}
  bool gap_ok = false;  // A_bar < A_max
  GapResult gap;        // power-law form of the same condition
  double N_used = 0.0;
  double C_cal = 1.0;
  std::string caveat;
};

DataReport norms_report(const SpectralField& g, const SpectralField& omega_in,
                        const InitialDataParams& p, const NormParams& np, double C_cal);

// Builds the family on report_grid(p) and reports on it.
DataReport family_report(const InitialDataParams& p, const NormParams& np, double C_cal);

std::string to_json(const DataReport& r, const InitialDataParams& p, const NormParams& np);

}  // namespace lcsim
