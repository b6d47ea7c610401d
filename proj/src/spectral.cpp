#include "spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "error.hpp"

namespace lcsim {

namespace {

// FFTW plans are created once per shape under a global lock (the planner is not
// thread-safe) and then executed through the new-array interface, which is.
// FFTW_ESTIMATE keeps the chosen algorithm, and therefore the rounding,
// identical from run to run.
class FftPlan {
 public:
  FftPlan(int n0, int n1) {
    std::vector<cplx> tmp(static_cast<std::size_t>(n0) * n1);
    auto* buf = reinterpret_cast<fftw_complex*>(tmp.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_ = fftw_plan_dft_2d(n0, n1, buf, buf, FFTW_FORWARD, flags);
    backward_ = fftw_plan_dft_2d(n0, n1, buf, buf, FFTW_BACKWARD, flags);
  }
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;
  ~FftPlan() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  void forward(std::vector<cplx>& data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(forward_, buf, buf);
  }
  void backward(std::vector<cplx>& data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(backward_, buf, buf);
  }

 private:
  fftw_plan forward_;
  fftw_plan backward_;
};

const FftPlan& plan_for(int n0, int n1) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<FftPlan>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n0, n1}];
  if (!slot) slot = std::make_unique<FftPlan>(n0, n1);
  return *slot;
}

void check_same_frame(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid() == b.grid())) throw ValidationError("fields live on different grids");
  if (a.shear_time() != b.shear_time())
    throw ValidationError("fields have mismatched shear_time");
}

}  // namespace

void Grid::validate() const {
  if (nx < 8 || ny < 8 || nx % 2 != 0 || ny % 2 != 0)
    throw ValidationError("grid: nx, ny must be even and >= 8");
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
    throw ValidationError("grid: lx, ly must be positive");
  if (dealias_pad < 2) throw ValidationError("grid: dealias_pad must be >= 2");
}

SpectralField::SpectralField(const Grid& grid, double shear_time)
    : grid_(grid), shear_time_(shear_time), c_(grid.size(), cplx{0.0, 0.0}) {}

void SpectralField::set_zero() { std::fill(c_.begin(), c_.end(), cplx{0.0, 0.0}); }

double SpectralField::l2_norm_sq() const {
  double s = 0.0;
  for (const auto& c : c_) s += std::norm(c);
  return grid_.area() * s;
}

bool SpectralField::has_non_finite() const {
  return std::any_of(c_.begin(), c_.end(), [](const cplx& c) {
    return !std::isfinite(c.real()) || !std::isfinite(c.imag());
  });
}

void SpectralField::check_compatible(const SpectralField& o) const { check_same_frame(*this, o); }

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& c : c_) c *= a;
  return *this;
}

SpectralField& SpectralField::operator*=(cplx a) {
  for (auto& c : c_) c *= a;
  return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& o) {
  check_compatible(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += a * o.c_[i];
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

// The box offset (-lx, -ly) contributes the phase (-1)^(j+i) = (-1)^(p+q).
SpectralField to_spectral(const PhysicalField& f, double shear_time) {
  const Grid& g = f.grid;
  if (f.values.size() != g.size()) throw ValidationError("to_spectral: shape mismatch");
  std::vector<cplx> buf(g.size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = f.values[i];
  plan_for(g.nx, g.ny).forward(buf);
  SpectralField out(g, shear_time);
  const double norm = 1.0 / static_cast<double>(g.size());
  for (int p = 0; p < g.nx; ++p)
    for (int q = 0; q < g.ny; ++q) {
      const double sign = ((p + q) % 2 == 0) ? 1.0 : -1.0;
      out(p, q) = buf[static_cast<std::size_t>(p) * g.ny + q] * (sign * norm);
    }
  return out;
}

PhysicalField to_physical(const SpectralField& f) {
  const Grid& g = f.grid();
  std::vector<cplx> buf(g.size());
  for (int p = 0; p < g.nx; ++p)
    for (int q = 0; q < g.ny; ++q) {
      const double sign = ((p + q) % 2 == 0) ? 1.0 : -1.0;
      buf[static_cast<std::size_t>(p) * g.ny + q] = f(p, q) * sign;
    }
  plan_for(g.nx, g.ny).backward(buf);
  PhysicalField out(g);
  for (std::size_t i = 0; i < buf.size(); ++i) out.values[i] = buf[i].real();
  return out;
}

SpectralField apply_multiplier(const SpectralField& f,
                               const std::function<cplx(double, double)>& mult) {
  SpectralField out(f.grid(), f.shear_time());
  const Grid& g = f.grid();
  for (int p = 0; p < g.nx; ++p) {
    const double k = g.kx(p);
    for (int q = 0; q < g.ny; ++q) out(p, q) = f(p, q) * mult(k, f.xi_eff(p, q));
  }
  return out;
}

namespace {

template <class Fn>
SpectralField map_in_band(const SpectralField& f, Fn&& fn) {
  const Grid& g = f.grid();
  SpectralField out(g, f.shear_time());
  for (int p = 0; p < g.nx; ++p) {
    if (g.is_nyquist_row(p)) continue;
    const double k = g.kx(p);
    for (int q = 0; q < g.ny; ++q) {
      if (g.is_nyquist_col(q)) continue;
      out(p, q) = fn(f(p, q), k, f.xi_eff(p, q));
    }
  }
  return out;
}

}  // namespace

SpectralField deriv_x(const SpectralField& f) {
  return map_in_band(f, [](cplx c, double k, double) { return cplx{0.0, k} * c; });
}

SpectralField deriv_y_phys(const SpectralField& f) {
  return map_in_band(f, [](cplx c, double, double xi) { return cplx{0.0, xi} * c; });
}

SpectralField laplacian(const SpectralField& f) {
  return map_in_band(f, [](cplx c, double k, double xi) { return -(k * k + xi * xi) * c; });
}

SpectralField inv_laplacian(const SpectralField& f) {
  return map_in_band(f, [](cplx c, double k, double xi) {
    const double k2 = k * k + xi * xi;
    return k2 > 0.0 ? c / (-k2) : cplx{0.0, 0.0};
  });
}

PaddedTransform::PaddedTransform(const Grid& grid)
    : grid_(grid), mx_(grid.dealias_pad * grid.nx), my_(grid.dealias_pad * grid.ny) {}

namespace {

// Scatters in-band coefficients into an mx x my spectrum (zero elsewhere).
void scatter_padded(const SpectralField& f, const Grid& g, int mx, int my, std::vector<cplx>& buf,
                    cplx factor) {
  for (int p = 0; p < g.nx; ++p) {
    if (g.is_nyquist_row(p)) continue;
    const int j = g.signed_kx(p);
    const int pp = j >= 0 ? j : j + mx;
    for (int q = 0; q < g.ny; ++q) {
      if (g.is_nyquist_col(q)) continue;
      const int i = g.signed_xi(q);
      const int qq = i >= 0 ? i : i + my;
      buf[static_cast<std::size_t>(pp) * my + qq] += factor * f(p, q);
    }
  }
}

}  // namespace

std::vector<double> PaddedTransform::to_physical(const SpectralField& f) const {
  std::vector<cplx> buf(size(), cplx{0.0, 0.0});
  scatter_padded(f, grid_, mx_, my_, buf, 1.0);
  plan_for(mx_, my_).backward(buf);
  std::vector<double> out(size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = buf[i].real();
  return out;
}

void PaddedTransform::to_physical_pair(const SpectralField& a, const SpectralField& b,
                                       std::vector<double>& out_a,
                                       std::vector<double>& out_b) const {
  std::vector<cplx> buf(size(), cplx{0.0, 0.0});
  scatter_padded(a, grid_, mx_, my_, buf, 1.0);
  scatter_padded(b, grid_, mx_, my_, buf, cplx{0.0, 1.0});
  plan_for(mx_, my_).backward(buf);
  out_a.resize(size());
  out_b.resize(size());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    out_a[i] = buf[i].real();
    out_b[i] = buf[i].imag();
  }
}

SpectralField PaddedTransform::to_spectral(std::span<const double> values,
                                           double shear_time) const {
  if (values.size() != size()) throw ValidationError("padded to_spectral: shape mismatch");
  std::vector<cplx> buf(values.begin(), values.end());
  plan_for(mx_, my_).forward(buf);
  SpectralField out(grid_, shear_time);
  const double norm = 1.0 / static_cast<double>(size());
  for (int p = 0; p < grid_.nx; ++p) {
    if (grid_.is_nyquist_row(p)) continue;
    const int j = grid_.signed_kx(p);
    const int pp = j >= 0 ? j : j + mx_;
    for (int q = 0; q < grid_.ny; ++q) {
      if (grid_.is_nyquist_col(q)) continue;
      const int i = grid_.signed_xi(q);
      const int qq = i >= 0 ? i : i + my_;
      out(p, q) = buf[static_cast<std::size_t>(pp) * my_ + qq] * norm;
    }
  }
  return out;
}

void PaddedTransform::to_spectral_pair(std::span<const double> a, std::span<const double> b,
                                       double shear_time, SpectralField& out_a,
                                       SpectralField& out_b) const {
  if (a.size() != size() || b.size() != size())
    throw ValidationError("padded to_spectral: shape mismatch");
  std::vector<cplx> buf(size());
  for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = cplx{a[i], b[i]};
  plan_for(mx_, my_).forward(buf);
  out_a = SpectralField(grid_, shear_time);
  out_b = SpectralField(grid_, shear_time);
  const double norm = 1.0 / static_cast<double>(size());
  for (int p = 0; p < grid_.nx; ++p) {
    if (grid_.is_nyquist_row(p)) continue;
    const int j = grid_.signed_kx(p);
    const int pp = j >= 0 ? j : j + mx_;
    const int pm = -j >= 0 ? -j : -j + mx_;
    for (int q = 0; q < grid_.ny; ++q) {
      if (grid_.is_nyquist_col(q)) continue;
      const int i = grid_.signed_xi(q);
      const int qq = i >= 0 ? i : i + my_;
      const int qm = -i >= 0 ? -i : -i + my_;
      const cplx z = buf[static_cast<std::size_t>(pp) * my_ + qq];
      const cplx zm = std::conj(buf[static_cast<std::size_t>(pm) * my_ + qm]);
      out_a(p, q) = 0.5 * (z + zm) * norm;
      out_b(p, q) = cplx{0.0, -0.5} * (z - zm) * norm;
    }
  }
}

SpectralField multiply_dealiased(
    std::initializer_list<std::reference_wrapper<const SpectralField>> fs) {
  if (fs.size() < 2 || fs.size() > 3)
    throw ValidationError("multiply_dealiased: degree must be 2 or 3");
  const SpectralField& first = fs.begin()->get();
  for (const auto& f : fs) check_same_frame(first, f.get());
  PaddedTransform pt(first.grid());
  std::vector<double> prod(pt.size(), 1.0);
  for (const auto& f : fs) {
    const auto vals = pt.to_physical(f.get());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= vals[i];
  }
  return pt.to_spectral(prod, first.shear_time());
}

RemapResult remap_shear_frame(const SpectralField& f, double new_shear_time) {
  const Grid& g = f.grid();
  const double delta = f.shear_time() - new_shear_time;
  const double shift_real = delta * g.ly / g.lx;
  const double shift_round = std::round(shift_real);
  if (std::abs(shift_real - shift_round) > 1e-9 * std::max(1.0, std::abs(shift_real)))
    throw ValidationError("remap_shear_frame: shift " + std::to_string(shift_real) +
                          " is not an integer number of xi grid steps");
  const long n = static_cast<long>(shift_round);
  RemapResult res{SpectralField(g, new_shear_time), 0.0};
  if (n == 0) {
    res.field = f;
    res.field.set_shear_time(new_shear_time);
    return res;
  }
  const long half = g.ny / 2;
  double dropped = 0.0;
  for (int p = 0; p < g.nx; ++p) {
    const long j = g.signed_kx(p);
    for (int q = 0; q < g.ny; ++q) {
      const cplx c = f(p, q);
      if (c == cplx{0.0, 0.0}) continue;
      const long i_new = g.signed_xi(q) + j * n;
      if (g.is_nyquist_row(p) || g.is_nyquist_col(q) || i_new <= -half || i_new >= half) {
        dropped += std::norm(c);
        continue;
      }
      res.field(p, g.col_of(static_cast<int>(i_new))) = c;
    }
  }
  res.discarded_energy = dropped * g.area();
  return res;
}

double conjugate_symmetry_defect(const SpectralField& f) {
  const Grid& g = f.grid();
  double worst = 0.0;
  double scale = 0.0;
  for (int p = 0; p < g.nx; ++p) {
    if (g.is_nyquist_row(p)) continue;
    const int pm = g.row_of(-g.signed_kx(p));
    for (int q = 0; q < g.ny; ++q) {
      if (g.is_nyquist_col(q)) continue;
      const int qm = g.col_of(-g.signed_xi(q));
      worst = std::max(worst, std::abs(f(p, q) - std::conj(f(pm, qm))));
      scale = std::max(scale, std::abs(f(p, q)));
    }
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

}  // namespace lcsim
