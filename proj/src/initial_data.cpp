#include "initial_data.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "json.hpp"

namespace lcsim {

double bump_hat(double s) {
  const double u = 2.0 * std::abs(s) - 3.0;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

std::vector<double> band_profile_coeffs(int n, double half_period, double scale,
                                        double modulation) {
  if (n < 4 || n % 2 != 0) throw ValidationError("band_profile_coeffs: n must be even and >= 4");
  if (!(half_period > 0.0) || !(scale > 0.0))
    throw ValidationError("band_profile_coeffs: half_period and scale must be > 0");
  const double dk = kPi / half_period;
  const double top = modulation + 2.0 * scale;
  if (top > dk * (n / 2 - 1))
    throw ValidationError("band_profile_coeffs: support up to " + std::to_string(top) +
                          " exceeds the band limit " + std::to_string(dk * (n / 2 - 1)));

  std::vector<double> base(n), out(n);
  double sum_sq = 0.0;
  int resolved = 0;
  for (int p = 0; p < n; ++p) {
    const int j = p < n / 2 ? p : p - n;
    const double k = dk * j;
    base[p] = bump_hat(k / scale);
    sum_sq += base[p] * base[p];
    if (j > 0 && base[p] > 0.0) ++resolved;
    out[p] = 0.5 * (bump_hat((k - modulation) / scale) + bump_hat((k + modulation) / scale));
  }
  if (resolved < 3)
    throw ValidationError("band_profile_coeffs: profile support [" + std::to_string(scale) + ", " +
                          std::to_string(2.0 * scale) + "] is not resolved by spacing " +
                          std::to_string(dk));
  // ||phi(scale .)||^2 = 1/scale on the box: 2 L sum |c|^2.
  const double c = std::sqrt(1.0 / (scale * 2.0 * half_period * sum_sq));
  for (auto& v : out) v *= c;
  return out;
}

SpectralField schwartz_band_profile(const Grid& grid) {
  grid.validate();
  const std::vector<double> cx = band_profile_coeffs(grid.nx, grid.lx, 1.0);
  SpectralField f(grid);
  // phi(x) has no y-dependence: only the xi = 0 column, scaled so the box norm
  // equals ||phi||_{L2(R)} times sqrt(2 ly).
  for (int p = 0; p < grid.nx; ++p) f(p, 0) = cx[p];
  return f;
}

void InitialDataParams::validate(const NormParams& np) const {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ValidationError("init.lambda must lie in (0, 1)");
  if (!(N >= 4.0)) throw ValidationError("init.N must be >= 4");
  if (!(theta > np.eps + 1.0 / 6.0)) throw ValidationError("init.theta must exceed eps + 1/6");
}

double snap_frequency(const Grid& grid, double N) {
  return std::round(N / grid.dxi()) * grid.dxi();
}

SpectralField make_family_scalar(const InitialDataParams& p, const Grid& grid) {
  grid.validate();
  const std::vector<double> cx = band_profile_coeffs(grid.nx, grid.lx, p.lambda);
  const std::vector<double> cy =
      band_profile_coeffs(grid.ny, grid.ly, 1.0, snap_frequency(grid, p.N));
  const double amp = std::pow(p.lambda, p.theta);
  SpectralField g(grid);
  for (int i = 0; i < grid.nx; ++i) {
    if (cx[i] == 0.0) continue;
    for (int q = 0; q < grid.ny; ++q) g(i, q) = amp * cx[i] * cy[q];
  }
  return g;
}

Director make_director_data(const InitialDataParams& p, const Grid& grid) {
  Director d;
  d[0] = make_family_scalar(p, grid);
  d[1] = SpectralField(grid);
  d[2] = SpectralField(grid);
  return d;
}

Director lift_to_sphere(const SpectralField& g) {
  const PhysicalField pg = to_physical(g);
  PhysicalField c(g.grid()), s(g.grid());
  for (std::size_t i = 0; i < pg.values.size(); ++i) {
    c.values[i] = std::cos(pg.values[i]) - 1.0;
    s.values[i] = std::sin(pg.values[i]);
  }
  return {to_spectral(c, g.shear_time()), to_spectral(s, g.shear_time()),
          SpectralField(g.grid(), g.shear_time())};
}

Grid report_grid(const InitialDataParams& p) {
  Grid g;
  g.lx = 16.0 * kPi / p.lambda;
  g.nx = 128;
  g.ly = 16.0 * kPi;
  const double n_needed = 2.0 * ((p.N + 2.0) * 16.0 + 2.0);
  g.ny = 64;
  while (g.ny < n_needed) g.ny *= 2;
  return g;
}

double gap_kappa(double delta) { return std::max(2.0 / (delta - 1.0), 24.0); }

GapResult gap_check(const InitialDataParams& p, const NormParams& np, double C_cal) {
  GapResult r;
  r.mu = p.theta - np.eps - 1.0 / 6.0;
  if (!(r.mu > 0.0)) throw ValidationError("gap_check: theta - eps - 1/6 must be > 0");
  if (!(C_cal > 0.0)) throw ValidationError("gap_check: C_cal must be > 0");
  r.kappa = gap_kappa(np.delta);
  const double lam_mu = std::pow(p.lambda, r.mu);
  // Compare logarithms; the powers overflow quickly.
  const double lhs = std::log(C_cal) + r.kappa * std::log(p.N * p.N * lam_mu);
  const double rhs = -std::log(lam_mu) / np.delta;
  r.gap_ok = lhs < rhs;
  r.N_max = std::exp((-r.mu * std::log(p.lambda) * (1.0 / np.delta + r.kappa) - std::log(C_cal)) /
                     (2.0 * r.kappa));
  return r;
}

double amplitude_threshold(double H, double W_omega, const NormParams& np, double C_cal) {
  if (H < 0.0 || W_omega < 0.0) throw ValidationError("amplitude_threshold: norms must be >= 0");
  return C_cal * std::pow(H + W_omega + 1.0, gap_kappa(np.delta));
}

DataReport norms_report(const SpectralField& g, const SpectralField& omega_in,
                        const InitialDataParams& p, const NormParams& np, double C_cal) {
  DataReport r;
  r.L = y_norm(g, np, weight_dx13());
  r.H = y_norm(g, np, weight_hess_dx13());
  const Grid& grid = g.grid();
  double e = 0.0;
  for (int i = 0; i < grid.nx; ++i)
    for (int q = 0; q < grid.ny; ++q) {
      const double k = grid.kx(i), xi = g.xi_eff(i, q);
      e += (k * k + xi * xi) * std::norm(g(i, q));
    }
  r.E = e * grid.area();
  r.W_omega = y_norm(omega_in, np);
  r.A_bar = amplitude_threshold(r.H, r.W_omega, np, C_cal);
  r.A_max = r.L > 0.0 ? std::pow(r.L, -1.0 / np.delta) : std::numeric_limits<double>::infinity();
  r.gap_ok = r.A_bar < r.A_max;
  InitialDataParams snapped = p;
  snapped.N = snap_frequency(grid, p.N);
  r.gap = gap_check(snapped, np, C_cal);
  r.N_used = snapped.N;
  r.C_cal = C_cal;
  r.caveat =
      "C_cal is a convention: the constant in the amplitude threshold is not specified, "
      "so A_bar and the gap verdict are only meaningful up to that constant";
  return r;
}

DataReport family_report(const InitialDataParams& p, const NormParams& np, double C_cal) {
  const Grid grid = report_grid(p);
  const SpectralField g = make_family_scalar(p, grid);
  return norms_report(g, SpectralField(grid), p, np, C_cal);
}

std::string to_json(const DataReport& r, const InitialDataParams& p, const NormParams& np) {
  nlohmann::ordered_json j;
  j["params"] = {{"theta", p.theta}, {"lambda", p.lambda}, {"N", p.N},
                 {"eps", np.eps},    {"m", np.m},           {"delta", np.delta}};
  j["L"] = r.L;
  j["H"] = r.H;
  j["E"] = r.E;
  j["W_omega"] = r.W_omega;
  j["A_bar"] = r.A_bar;
  j["A_max"] = r.A_max;
  j["gap_ok"] = r.gap_ok;
  j["gap_power_law"] = {{"gap_ok", r.gap.gap_ok},
                        {"N_max", r.gap.N_max},
                        {"mu", r.gap.mu},
                        {"kappa", r.gap.kappa}};
  j["N_used"] = r.N_used;
  j["C_cal"] = r.C_cal;
  j["caveat"] = r.caveat;
  return j.dump(2);
}

}  // namespace lcsim
