#include <cmath>
#include <random>

#include "doctest.h"
#include "error.hpp"
#include "oracles.hpp"
#include "spectral.hpp"

using namespace lcsim;

namespace {

Grid small_grid(int n = 16) {
  Grid g;
  g.nx = g.ny = n;
  g.lx = 2.0 * kPi;
  g.ly = kPi;
  return g;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("grid validation rejects bad shapes") {
    Grid g;
    g.nx = 15;
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g.nx = 16;
    g.ly = 0.0;
    CHECK_THROWS_AS(g.validate(), ValidationError);
    g.ly = 1.0;
    g.dealias_pad = 1;
    CHECK_THROWS_AS(g.validate(), ValidationError);
  }

  // Label sample (X, y) sits at the physical point (X - s y, y).
  TEST_CASE("physical samples match the direct Fourier sum") {
    std::mt19937_64 rng(1);
    const Grid g = small_grid(8);
    for (double s : {0.0, -0.75}) {
      const SpectralField f = oracle::random_field(g, rng, 3, 3, s);
      const PhysicalField p = to_physical(f);
      double err = 0.0;
      for (int i = 0; i < g.nx; ++i)
        for (int q = 0; q < g.ny; ++q)
          err = std::max(err, std::abs(p(i, q) - oracle::eval_direct(f, p.x(i) - s * p.y(q), p.y(q))));
      CHECK(err < 1e-12);
    }
  }

  TEST_CASE("physical round trip is exact including the Nyquist modes") {
    std::mt19937_64 rng(2);
    const Grid g = small_grid();
    PhysicalField p(g);
    for (double& v : p.values) v = oracle::uniform(rng);
    const PhysicalField back = to_physical(to_spectral(p, 0.3));
    double err = 0.0;
    for (std::size_t i = 0; i < p.values.size(); ++i)
      err = std::max(err, std::abs(back.values[i] - p.values[i]));
    CHECK(err < 1e-14);
    CHECK(conjugate_symmetry_defect(to_spectral(p)) < 1e-14);
  }

  TEST_CASE("Parseval: box norm equals the grid mean of f^2 times the area") {
    std::mt19937_64 rng(3);
    const Grid g = small_grid();
    const SpectralField f = oracle::random_band_limited(g, rng);
    const PhysicalField p = to_physical(f);
    double s = 0.0;
    for (double v : p.values) s += v * v;
    CHECK(f.l2_norm_sq() == doctest::Approx(s * g.area() / g.size()).epsilon(1e-13));
  }

  TEST_CASE("derivatives of a sheared cosine mode") {
    const Grid g = small_grid();
    const double s = -0.5;
    SpectralField f(g, s);
    f(g.row_of(2), g.col_of(3)) = 0.5;
    f(g.row_of(-2), g.col_of(-3)) = 0.5;
    const double k = g.kx(g.row_of(2));
    const double xi = g.xi(g.col_of(3)) + k * s;
    const PhysicalField fx = to_physical(deriv_x(f));
    const PhysicalField fy = to_physical(deriv_y_phys(f));
    const PhysicalField lap = to_physical(laplacian(f));
    double err = 0.0;
    for (int i = 0; i < g.nx; ++i)
      for (int q = 0; q < g.ny; ++q) {
        const double ph = k * (fx.x(i) - s * fx.y(q)) + xi * fx.y(q);
        err = std::max({err, std::abs(fx(i, q) + k * std::sin(ph)),
                        std::abs(fy(i, q) + xi * std::sin(ph)),
                        std::abs(lap(i, q) + (k * k + xi * xi) * std::cos(ph))});
      }
    CHECK(err < 1e-12);
  }

  TEST_CASE("inverse Laplacian undoes the Laplacian away from the zero mode") {
    std::mt19937_64 rng(4);
    const Grid g = small_grid();
    SpectralField f = oracle::random_field(g, rng, 6, 6, 0.25);
    f(0, 0) = 0.0;
    CHECK(oracle::max_abs_diff(inv_laplacian(laplacian(f)), f) < 1e-13);
  }

  TEST_CASE("dealiased products match brute-force convolution on 32x32") {
    std::mt19937_64 rng(5);
    Grid g;
    g.nx = g.ny = 32;
    for (double s : {0.0, -1.3}) {
      const SpectralField a = oracle::random_band_limited(g, rng, s);
      const SpectralField b = oracle::random_band_limited(g, rng, s);
      const SpectralField c = oracle::random_band_limited(g, rng, s);
      const SpectralField ab = multiply_dealiased({a, b});
      CHECK(oracle::max_abs_diff(ab, oracle::convolve(a, b)) < 1e-10);
      const SpectralField abc = multiply_dealiased({a, b, c});
      CHECK(oracle::max_abs_diff(abc, oracle::convolve3(a, b, c)) < 1e-10);
    }
  }

  TEST_CASE("multiply_dealiased rejects degree 1 and frame mismatch") {
    const Grid g = small_grid();
    SpectralField a(g), b(g, 0.5);
    CHECK_THROWS_AS(multiply_dealiased({a}), ValidationError);
    CHECK_THROWS_AS(multiply_dealiased({a, b}), ValidationError);
  }

  TEST_CASE("pair transforms agree with single transforms") {
    std::mt19937_64 rng(6);
    const Grid g = small_grid();
    const PaddedTransform pt(g);
    const SpectralField a = oracle::random_band_limited(g, rng, 0.4);
    const SpectralField b = oracle::random_band_limited(g, rng, 0.4);
    std::vector<double> pa, pb;
    pt.to_physical_pair(a, b, pa, pb);
    const std::vector<double> sa = pt.to_physical(a), sb = pt.to_physical(b);
    double err = 0.0;
    for (std::size_t i = 0; i < pa.size(); ++i)
      err = std::max({err, std::abs(pa[i] - sa[i]), std::abs(pb[i] - sb[i])});
    CHECK(err < 1e-13);
    SpectralField ra, rb;
    pt.to_spectral_pair(pa, pb, 0.4, ra, rb);
    CHECK(oracle::max_abs_diff(ra, pt.to_spectral(pa, 0.4)) < 1e-14);
    CHECK(oracle::max_abs_diff(rb, pt.to_spectral(pb, 0.4)) < 1e-14);
    CHECK(oracle::max_abs_diff(ra, a) < 1e-13);
  }

  TEST_CASE("remap preserves the physical field when nothing leaves the band") {
    std::mt19937_64 rng(7);
    const Grid g = small_grid();  // remap unit lx/ly = 2
    const double unit = g.remap_unit();
    const SpectralField f = oracle::random_field(g, rng, 2, 2, -unit);
    const RemapResult r = remap_shear_frame(f, 0.0);
    CHECK(r.discarded_energy == 0.0);
    CHECK(r.field.shear_time() == 0.0);
    for (double x : {-1.0, 0.3, 2.0})
      for (double y : {-0.7, 0.0, 1.1})
        CHECK(oracle::eval_direct(r.field, x, y) ==
              doctest::Approx(oracle::eval_direct(f, x, y)).epsilon(1e-12));
  }

  TEST_CASE("remap reports the energy of dropped modes") {
    const Grid g = small_grid();
    SpectralField f(g, -g.remap_unit());
    // label (j, i) = (3, 6) moves to i = 6 - 3 = 3; (3, -6) moves to -9 and leaves.
    f(g.row_of(3), g.col_of(6)) = 1.0;
    f(g.row_of(-3), g.col_of(-6)) = 1.0;
    f(g.row_of(3), g.col_of(-6)) = 2.0;
    f(g.row_of(-3), g.col_of(6)) = 2.0;
    const RemapResult r = remap_shear_frame(f, 0.0);
    CHECK(r.discarded_energy == doctest::Approx(2.0 * 4.0 * g.area()));
    CHECK(r.field(g.row_of(3), g.col_of(3)) == cplx{1.0, 0.0});
  }

  TEST_CASE("remap rejects a non-integer label shift") {
    const Grid g = small_grid();
    const SpectralField f(g, -0.3);
    CHECK_THROWS_AS(remap_shear_frame(f, 0.0), ValidationError);
  }

  TEST_CASE("arithmetic refuses fields in different frames") {
    const Grid g = small_grid();
    SpectralField a(g), b(g, 1.0);
    CHECK_THROWS_AS(a += b, ValidationError);
  }
}
