#include <cmath>

#include "doctest.h"
#include "error.hpp"
#include "initial_data.hpp"
#include "oracles.hpp"

using namespace lcsim;

namespace {

// area * sum w(k, xi) |c|^2 over a scalar field, written out directly.
double direct_sum(const SpectralField& f, double (*w)(double, double, const NormParams&),
                  const NormParams& np) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (int p = 0; p < g.nx; ++p)
    for (int q = 0; q < g.ny; ++q) {
      const double c2 = std::norm(f(p, q));
      if (c2 == 0.0) continue;
      s += w(g.kx(p), g.xi(q), np) * c2;
    }
  return s * g.area();
}

double lam_w(double k, const NormParams& np) {
  return std::pow(1.0 + k * k, np.m) * std::pow(1.0 + 1.0 / (k * k), np.eps);
}

}  // namespace

TEST_SUITE("initial_data") {
  TEST_CASE("bump is smooth, symmetric and supported on 1 <= |s| <= 2") {
    for (double s : {0.0, 0.5, 1.0, 2.0, 2.5, -0.9, -2.1}) CHECK(bump_hat(s) == 0.0);
    CHECK(bump_hat(1.5) == doctest::Approx(std::exp(-1.0)));
    CHECK(bump_hat(1.2) == bump_hat(-1.2));
    CHECK(bump_hat(1.01) > 0.0);
  }

  TEST_CASE("profile has unit norm and frequency support in [1, 2]") {
    Grid g;
    g.nx = 256;
    g.ny = 8;
    g.lx = 32.0 * kPi;
    g.ly = 1.0;
    const SpectralField phi = schwartz_band_profile(g);
    CHECK(phi.l2_norm_sq() == doctest::Approx(2.0 * g.ly).epsilon(1e-10));
    for (int p = 0; p < g.nx; ++p) {
      const double k = std::abs(g.kx(p));
      if (k < 1.0 || k > 2.0) CHECK(phi(p, 0) == cplx{});
      for (int q = 1; q < g.ny; ++q) CHECK(phi(p, q) == cplx{});
    }
    // smooth: coefficients near the support edge are tiny compared with the centre
    const double centre = std::abs(phi(g.row_of(48), 0));  // k = 1.5
    const double edge = std::abs(phi(g.row_of(33), 0));    // k = 1.03125
    CHECK(edge < 1e-3 * centre);
    CHECK(conjugate_symmetry_defect(phi) < 1e-15);
  }

  TEST_CASE("unresolved or out-of-band profiles are rejected") {
    CHECK_THROWS_AS(band_profile_coeffs(64, 2.0, 1.0), ValidationError);        // spacing pi/2
    CHECK_THROWS_AS(band_profile_coeffs(16, 16.0 * kPi, 1.0), ValidationError);  // 2 > k_max
    CHECK_THROWS_AS(band_profile_coeffs(64, 8.0 * kPi, 1.0, 100.0), ValidationError);
  }

  TEST_CASE("parameter validation and frequency snapping") {
    const NormParams np;
    InitialDataParams p;
    CHECK_NOTHROW(p.validate(np));
    p.lambda = 1.0;
    CHECK_THROWS_AS(p.validate(np), ValidationError);
    p.lambda = 0.3;
    p.N = 3.0;
    CHECK_THROWS_AS(p.validate(np), ValidationError);
    p.N = 38.0;
    p.theta = 0.5;
    CHECK_THROWS_AS(p.validate(np), ValidationError);
    Grid g;
    g.ly = 4.0 * kPi;  // dxi = 0.25
    CHECK(snap_frequency(g, 38.1) == 38.0);
    CHECK(snap_frequency(g, 37.9) == 38.0);
    CHECK(snap_frequency(g, 38.2) == 38.25);
  }

  TEST_CASE("director data: e1 only, x-support in [lambda, 2 lambda], factorized norm") {
    InitialDataParams p;
    p.lambda = 0.2;
    p.N = 32.0;
    const Grid g = report_grid(p);
    const Director d = make_director_data(p, g);
    CHECK(d[1].l2_norm_sq() == 0.0);
    CHECK(d[2].l2_norm_sq() == 0.0);
    for (int i = 0; i < g.nx; ++i) {
      const double k = std::abs(g.kx(i));
      const bool inside = k >= p.lambda * (1 - 1e-12) && k <= 2 * p.lambda * (1 + 1e-12);
      if (!inside)
        for (int q = 0; q < g.ny; ++q) CHECK(d[0](i, q) == cplx{});
    }
    // ||phi(y) cos(N y)||^2 -> 1/2 for large N, ||phi(lam x)||^2 = 1/lam
    const double expect = std::pow(p.lambda, 2 * p.theta - 1) * 0.5;
    CHECK(d[0].l2_norm_sq() == doctest::Approx(expect).epsilon(0.02));
  }

  TEST_CASE("sphere lift puts n on the unit sphere") {
    InitialDataParams p;
    p.lambda = 0.2;
    p.N = 8.0;
    p.theta = 2.0;
    const Grid g = report_grid(p);
    const SpectralField s = make_family_scalar(p, g);
    const Director d = lift_to_sphere(s);
    CHECK(std::abs(min_abs_n(d) - 1.0) < 1e-14);
    CHECK(renormalize_director(d).max_deviation_before < 1e-14);
    // d2 = sin g ~ g for small g
    CHECK(oracle::max_abs_diff(d[1], s) < 1e-3 * oracle::max_abs(s));
  }

  TEST_CASE("gap exponent, threshold and power-law condition") {
    CHECK(gap_kappa(1.1) == doctest::Approx(24.0));
    CHECK(gap_kappa(1.05) == doctest::Approx(40.0));
    const NormParams np;
    CHECK(amplitude_threshold(0.0, 0.0, np, 3.0) == doctest::Approx(3.0));
    CHECK(amplitude_threshold(1.0, 0.0, np, 1.0) == doctest::Approx(std::pow(2.0, 24)));

    InitialDataParams p;
    const GapResult r = gap_check(p, np, 1.0);
    CHECK(r.mu == doctest::Approx(13.0 / 30.0));
    CHECK(r.mu > 1.0 / 3.0);
    // the condition flips at N_max: C (N^2 lam^mu)^kappa = lam^{-mu/delta}
    const auto holds = [&](double N) {
      return r.kappa * std::log(N * N * std::pow(p.lambda, r.mu)) <
             -r.mu / np.delta * std::log(p.lambda);
    };
    CHECK(holds(0.999 * r.N_max));
    CHECK_FALSE(holds(1.001 * r.N_max));
    InitialDataParams below = p, above = p;
    below.N = 0.999 * r.N_max;
    above.N = 1.001 * r.N_max;
    CHECK(gap_check(below, np, 1.0).gap_ok);
    CHECK_FALSE(gap_check(above, np, 1.0).gap_ok);

    InitialDataParams near_one = p;
    near_one.lambda = 0.99;
    near_one.N = 1000.0;
    CHECK_FALSE(gap_check(near_one, np, 1.0).gap_ok);

    // N = lam^{-3} lies outside the gap once the exponents are solved exactly
    InitialDataParams cube = p;
    cube.lambda = 0.01;
    cube.N = 1e6;
    CHECK_FALSE(gap_check(cube, np, 1.0).gap_ok);

    InitialDataParams bad = p;
    bad.theta = 0.5;
    CHECK_THROWS_AS(gap_check(bad, np, 1.0), ValidationError);
  }

  TEST_CASE("norms report against direct weighted sums") {
    const NormParams np;
    InitialDataParams p;
    p.lambda = 0.2;
    p.N = 16.0;
    const Grid g = report_grid(p);
    const SpectralField s = make_family_scalar(p, g);
    const DataReport r = norms_report(s, SpectralField(g), p, np, 1.0);
    const double L2 = direct_sum(
        s, [](double k, double, const NormParams& n) { return lam_w(k, n) * std::cbrt(k * k); }, np);
    const double H2 = direct_sum(
        s,
        [](double k, double xi, const NormParams& n) {
          return lam_w(k, n) * std::cbrt(k * k) * (std::pow(k, 4) + std::pow(xi, 4));
        },
        np);
    const double E = direct_sum(s, [](double k, double xi, const NormParams&) { return k * k + xi * xi; }, np);
    CHECK(r.L == doctest::Approx(std::sqrt(L2)).epsilon(1e-12));
    CHECK(r.H == doctest::Approx(std::sqrt(H2)).epsilon(1e-12));
    CHECK(r.E == doctest::Approx(E).epsilon(1e-12));
    CHECK(r.W_omega == 0.0);
    CHECK(r.A_bar == doctest::Approx(amplitude_threshold(r.H, 0.0, np, 1.0)));
    CHECK(r.A_max == doctest::Approx(std::pow(r.L, -1.0 / np.delta)));
    CHECK(r.gap_ok == (r.A_bar < r.A_max));
    CHECK(r.N_used == 16.0);
    CHECK_FALSE(r.caveat.empty());
  }

  TEST_CASE("reference instance has large energy") {
    const DataReport r = family_report(InitialDataParams{}, NormParams{}, 1.0);
    CHECK(r.E > 8.0 * kPi);
    CHECK(r.E >= 0.5 * std::pow(0.3, 1.0) * 38.0 * 38.0);
    CHECK(r.H / r.L == doctest::Approx(38.0 * 38.0).epsilon(0.1));
    // both forms of the gap agree here: the instance is far outside it
    CHECK_FALSE(r.gap_ok);
    CHECK_FALSE(r.gap.gap_ok);
    const std::string j = to_json(r, InitialDataParams{}, NormParams{});
    CHECK(j.find("\"gap_ok\": false") != std::string::npos);
  }

  TEST_CASE("asymptotic scaling of the low-order norm and the energy") {
    const NormParams np;
    InitialDataParams a, b;
    a.N = b.N = 64.0;
    a.lambda = 0.005;
    b.lambda = 0.01;
    const DataReport ra = family_report(a, np, 1.0), rb = family_report(b, np, 1.0);
    const double slope_L = std::log(rb.L / ra.L) / std::log(2.0);
    const double slope_E = std::log(rb.E / ra.E) / std::log(2.0);
    CHECK(slope_L == doctest::Approx(1.0 - 0.4 - 1.0 / 6.0).epsilon(0.01));
    CHECK(slope_E == doctest::Approx(1.0).epsilon(0.01));
    CHECK(rb.H / rb.L == doctest::Approx(64.0 * 64.0).epsilon(0.1));
  }
}
