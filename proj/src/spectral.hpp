#pragma once

// Fourier representation of scalar fields on a periodic box [-lx,lx) x [-ly,ly)
// in a sheared (Rogallo) frame.
//
// A SpectralField stores Fourier-series coefficients c(k, xi) such that
//
//   f(x, y) = sum_{k, xi} c(k, xi) exp(i (k x + xi_eff y)),   xi_eff = xi + k * s,
//
// where s is the field's shear_time. The background shear is thereby absorbed
// into the labels; pointwise products are unaffected by s, while y-derivatives
// use xi_eff.
//
// Storage is row-major over (k-index, xi-index) in FFT order: row p holds the
// signed index j = p for p < nx/2 and j = p - nx otherwise (same for columns).
// The Nyquist row/column (j = -nx/2, i = -ny/2) is kept by transforms so that
// physical round trips are exact, but is treated as out of band by derivative
// multipliers, dealiased products and remaps.

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numbers>
#include <span>
#include <vector>

namespace lcsim {

using cplx = std::complex<double>;
inline constexpr double kPi = std::numbers::pi;

struct Grid {
  int nx = 64;
  int ny = 64;
  double lx = 4.0 * kPi;  // half-period in x
  double ly = 4.0 * kPi;  // half-period in y
  int dealias_pad = 2;

  // Throws ValidationError.
  void validate() const;

  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  int signed_kx(int p) const { return p < nx / 2 ? p : p - nx; }
  int signed_xi(int q) const { return q < ny / 2 ? q : q - ny; }
  int row_of(int j) const { return j >= 0 ? j : j + nx; }
  int col_of(int i) const { return i >= 0 ? i : i + ny; }
  double dk() const { return kPi / lx; }
  double dxi() const { return kPi / ly; }
  double kx(int p) const { return dk() * signed_kx(p); }
  double xi(int q) const { return dxi() * signed_xi(q); }
  bool is_nyquist_row(int p) const { return p == nx / 2; }
  bool is_nyquist_col(int q) const { return q == ny / 2; }
  // Largest in-band |k| and |xi| (Nyquist excluded).
  double k_max() const { return dk() * (nx / 2 - 1); }
  double xi_max() const { return dxi() * (ny / 2 - 1); }
  // Box area 4 lx ly; L2 norms are sums of |c|^2 times this.
  double area() const { return 4.0 * lx * ly; }
  // Shear-time interval after which every label shift is an integer.
  double remap_unit() const { return lx / ly; }

  bool operator==(const Grid&) const = default;
};

class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const Grid& grid, double shear_time = 0.0);

  const Grid& grid() const { return grid_; }
  double shear_time() const { return shear_time_; }
  void set_shear_time(double s) { shear_time_ = s; }

  cplx& operator()(int p, int q) { return c_[static_cast<std::size_t>(p) * grid_.ny + q]; }
  const cplx& operator()(int p, int q) const {
    return c_[static_cast<std::size_t>(p) * grid_.ny + q];
  }
  std::span<cplx> coeffs() { return c_; }
  std::span<const cplx> coeffs() const { return c_; }

  // Physical-frame vertical wavenumber of label (p, q).
  double xi_eff(int p, int q) const { return grid_.xi(q) + grid_.kx(p) * shear_time_; }

  void set_zero();
  // Box L2 norm squared: area * sum |c|^2.
  double l2_norm_sq() const;
  bool has_non_finite() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double a);
  SpectralField& operator*=(cplx a);
  // this += a * o
  SpectralField& axpy(double a, const SpectralField& o);

 private:
  void check_compatible(const SpectralField& o) const;

  Grid grid_;
  double shear_time_ = 0.0;
  std::vector<cplx> c_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

// Real samples on the collocation grid x_p = -lx + p*2lx/nx, y_q = -ly + q*2ly/ny
// (label coordinates; with nonzero shear_time the physical points are sheared).
struct PhysicalField {
  Grid grid;
  std::vector<double> values;  // row-major (x-index, y-index)

  PhysicalField() = default;
  explicit PhysicalField(const Grid& g) : grid(g), values(g.size(), 0.0) {}
  double& operator()(int p, int q) { return values[static_cast<std::size_t>(p) * grid.ny + q]; }
  double operator()(int p, int q) const {
    return values[static_cast<std::size_t>(p) * grid.ny + q];
  }
  double x(int p) const { return -grid.lx + 2.0 * grid.lx * p / grid.nx; }
  double y(int q) const { return -grid.ly + 2.0 * grid.ly * q / grid.ny; }
};

SpectralField to_spectral(const PhysicalField& f, double shear_time = 0.0);
PhysicalField to_physical(const SpectralField& f);

// Multiplies every coefficient by mult(k, xi_eff).
SpectralField apply_multiplier(const SpectralField& f,
                               const std::function<cplx(double, double)>& mult);

SpectralField deriv_x(const SpectralField& f);
// Physical-frame y-derivative: multiplies by i * xi_eff.
SpectralField deriv_y_phys(const SpectralField& f);
SpectralField laplacian(const SpectralField& f);
// Divides by -(k^2 + xi_eff^2); the mode with k = xi_eff = 0 is set to zero.
SpectralField inv_laplacian(const SpectralField& f);

// Zero-padded physical representation used for alias-free products. Padded
// samples carry no box offset; only products of them are ever transformed back.
class PaddedTransform {
 public:
  explicit PaddedTransform(const Grid& grid);

  int mx() const { return mx_; }
  int my() const { return my_; }
  std::size_t size() const { return static_cast<std::size_t>(mx_) * my_; }

  std::vector<double> to_physical(const SpectralField& f) const;
  // Transforms two real fields with one complex FFT.
  void to_physical_pair(const SpectralField& a, const SpectralField& b, std::vector<double>& out_a,
                        std::vector<double>& out_b) const;
  SpectralField to_spectral(std::span<const double> values, double shear_time) const;
  void to_spectral_pair(std::span<const double> a, std::span<const double> b, double shear_time,
                        SpectralField& out_a, SpectralField& out_b) const;

 private:
  Grid grid_;
  int mx_;
  int my_;
};

// Pointwise product of 2 or 3 fields computed on the padded grid and truncated
// back to the band. Exactly alias-free for cubic products when dealias_pad >= 2.
SpectralField multiply_dealiased(std::initializer_list<std::reference_wrapper<const SpectralField>> fs);

struct RemapResult {
  SpectralField field;
  double discarded_energy = 0.0;  // box L2 norm squared of dropped modes
};

// Relabels f so that the same physical field is represented with shear time
// new_shear_time. The shift (old - new) * ly / lx must be an integer; modes
// leaving the band are dropped and their energy reported.
RemapResult remap_shear_frame(const SpectralField& f, double new_shear_time);

// max |c(k,xi) - conj(c(-k,-xi))| over in-band labels, relative to max |c|.
double conjugate_symmetry_defect(const SpectralField& f);

}  // namespace lcsim
