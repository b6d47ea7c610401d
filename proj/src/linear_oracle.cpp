#include "linear_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "error.hpp"

namespace lcsim {

double kelvin_exponent(double k, double xi0, double nu, double t) {
  return nu * (k * k * t + xi0 * xi0 * t + xi0 * k * t * t + k * k * t * t * t / 3.0);
}

std::complex<double> kelvin_exact(const KelvinMode& mode, double t) {
  return mode.amplitude * std::exp(-kelvin_exponent(mode.k, mode.xi0, mode.nu, t));
}

double kelvin_exponent_from_initial(double k, double xi_in, double nu, double t) {
  return kelvin_exponent(k, xi_in - k * t, nu, t);
}

double efold_time(double k, double xi_in, double nu, const EfoldOptions& opts) {
  if (!(nu > 0.0)) throw ValidationError("efold_time: nu must be > 0");
  if (opts.samples_per_bracket < 2) throw ValidationError("efold_time: too few samples");
  const auto log_amp = [&](double t) {
    double e = kelvin_exponent_from_initial(k, xi_in, nu, t);
    if (!opts.include_horizontal_heat) e -= nu * k * k * t;
    return -e;
  };

  // Bracket the crossing, then locate the first sample where the running
  // maximum drops below -1 and refine by bisection.
  double hi = 1.0;
  while (log_amp(hi) > -1.0) {
    hi *= 2.0;
    if (hi > 1e300) throw ValidationError("efold_time: mode does not decay");
  }
  double lo = 0.0;
  double env = log_amp(0.0);
  const int n = opts.samples_per_bracket;
  for (int i = 1; i <= n; ++i) {
    const double t = hi * i / n;
    env = std::max(env, log_amp(t));
    if (env <= -1.0) {
      lo = hi * (i - 1) / n;
      hi = t;
      break;
    }
  }
  while (hi - lo > opts.rel_tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (log_amp(mid) <= -1.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

EnhancedDissipationFit enhanced_dissipation_check(const std::vector<double>& ks,
                                                  const std::vector<double>& nus,
                                                  const EfoldOptions& opts) {
  std::set<double> distinct_k;
  for (double k : ks)
    if (k != 0.0) distinct_k.insert(std::abs(k));
  const std::set<double> distinct_nu(nus.begin(), nus.end());
  if (distinct_k.size() < 4) throw ValidationError("enhanced_dissipation_check: need >= 4 distinct |k|");
  if (distinct_nu.size() < 2) throw ValidationError("enhanced_dissipation_check: need >= 2 distinct nu");

  EnhancedDissipationFit fit;
  for (double nu : nus)
    for (double k : ks) {
      if (k == 0.0) continue;
      fit.points.push_back({std::abs(k), nu, efold_time(std::abs(k), 0.0, nu, opts), 0.0});
    }

  const auto n = static_cast<Eigen::Index>(fit.points.size());
  Eigen::MatrixXd X(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = fit.points[static_cast<std::size_t>(i)];
    X(i, 0) = 1.0;
    X(i, 1) = std::log(p.k);
    X(i, 2) = std::log(p.nu);
    y(i) = -std::log(p.tau);
  }
  const Eigen::VectorXd beta = X.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd res = y - X * beta;
  fit.c = std::exp(beta(0));
  fit.exponent_k = beta(1);
  fit.exponent_nu = beta(2);

  double mean = 0.0;
  std::vector<double> scaled;
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& p = fit.points[static_cast<std::size_t>(i)];
    p.residual = res(i);
    scaled.push_back(p.tau * std::cbrt(p.nu) * std::cbrt(p.k * p.k));
    mean += scaled.back();
  }
  mean /= static_cast<double>(scaled.size());
  for (double v : scaled) fit.scaling_spread = std::max(fit.scaling_spread, std::abs(v / mean - 1.0));
  return fit;
}

InviscidDampingFit inviscid_damping_check(const KelvinMode& initial, double t0, double t1,
                                          int samples) {
  if (initial.k == 0.0) throw ValidationError("inviscid_damping_check: k must be nonzero");
  if (!(t0 > 0.0) || !(t1 > t0 * 1.5) || samples < 4)
    throw ValidationError("inviscid_damping_check: fit window too short");
  InviscidDampingFit fit;
  const double k = initial.k;
  const double xi_in = initial.xi0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < samples; ++i) {
    const double t = t0 * std::pow(t1 / t0, static_cast<double>(i) / (samples - 1));
    const double xi = xi_in - k * t;
    const double w = std::abs(initial.amplitude) *
                     std::exp(-kelvin_exponent(k, xi, initial.nu, t));
    const double phi = w / (k * k + xi * xi);
    fit.t.push_back(t);
    fit.abs_phi.push_back(phi);
    const double lx = std::log(t), ly = std::log(phi);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = samples;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

bool inviscid_damping_bound_holds(double k, double xi_in, double t, double C) {
  if (k == 0.0) return true;
  const double xi = xi_in - k * t;
  const double phi = 1.0 / (k * k + xi * xi);
  const double bound = C / (1.0 + t * t) * (1.0 + k * k + xi_in * xi_in) / (k * k * k * k);
  return phi <= bound;
}

}  // namespace lcsim
