#pragma once

// Ghost-weight multipliers, anisotropic Y / space-time X norms, the bootstrap
// energy and the frequency-region classifier.

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "spectral.hpp"

namespace lcsim {

struct NormParams {
  double a = 0.008;
  double m = 1.0;
  double eps = 0.4;
  double delta = 1.5;
  // Relaxes the lower bound on eps from 1/3 to 1/6.
  bool corollary_regime = false;

  void validate() const;  // throws ValidationError
};

// Upper bound for a: 1 / (16 (1 + 2 pi)).
inline constexpr double kMaxWeightRate = 1.0 / (16.0 * (1.0 + 2.0 * kPi));

// At k = 0 both multipliers take the k -> 0+ limit pi/2 + (pi/2) sgn(xi).
double m1_eval(double k, double xi, double A);
double m2_eval(double k, double xi);
double m_eval(double k, double xi, double A);
// k * dM/dxi in closed form; 0 at k = 0.
double m_xi_derivative_weighted(double k, double xi, double A);

class MultiplierGrid {
 public:
  MultiplierGrid(const Grid& grid, double shear_time, double A);

  const Grid& grid() const { return grid_; }
  double m(int p, int q) const { return m_[idx(p, q)]; }
  double k_dxi_m(int p, int q) const { return kdm_[idx(p, q)]; }
  double min_m() const;
  double max_m() const;
  double min_k_dxi_m() const;

 private:
  std::size_t idx(int p, int q) const { return static_cast<std::size_t>(p) * grid_.ny + q; }
  Grid grid_;
  std::vector<double> m_;
  std::vector<double> kdm_;
};

// area * sum M |c|^2
double m_weighted_norm_sq(const SpectralField& f, double A);
// area * sum k dM/dxi |c|^2
double ghost_dissipation(const SpectralField& f, double A);

struct CoercivityResult {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
};

// lhs = ghost_dissipation(f); rhs = 1/(4 A^{1/3}) || |Dx|^{1/3} f ||^2
//   - 1/(2A) || d_y f ||^2 + || d_x grad Lap^{-1} f ||^2.
CoercivityResult coercivity_check(const SpectralField& f, double A);

// Squared modulus of an extra Fourier multiplier, as a function of (k, xi_eff).
using ModeWeight = std::function<double(double, double)>;

ModeWeight weight_identity();
ModeWeight weight_dx13();       // |Dx|^{1/3}
ModeWeight weight_hess_dx13();  // (d_x^2, d_y^2) |Dx|^{1/3}

// <k>^{2m} <1/k>^{2 eps}; k = 0 is evaluated at k_floor.
double lambda_weight(double k, const NormParams& p, double k_floor);

// ||<Dx>^m <1/Dx>^eps W f||_{L2}, summed over the given components.
double y_norm(std::span<const SpectralField> comps, const NormParams& p,
              const ModeWeight& w = weight_identity());
double y_norm(const SpectralField& f, const NormParams& p, const ModeWeight& w = weight_identity());

class XNormAccumulator {
 public:
  struct State {
    std::array<double, 4> terms{};  // sup, grad, |Dx|^{1/3}, d_x grad Lap^{-1}
    std::array<double, 3> last_integrand{};
    double last_t = 0.0;
    long samples = 0;
  };

  XNormAccumulator(NormParams p, double A, ModeWeight w = weight_identity());

  // Throws ValidationError if t is earlier than the previous sample.
  void update(std::span<const SpectralField> comps, double t);
  void update(const SpectralField& f, double t);

  const std::array<double, 4>& terms() const { return st_.terms; }
  double value() const;  // sqrt of the sum of the four squared terms
  const State& state() const { return st_; }
  void restore(const State& s) { st_ = s; }

 private:
  NormParams p_;
  double A_;
  ModeWeight w_;
  State st_;
};

struct EnergyBreakdown {
  double total = 0.0;
  double d13 = 0.0;    // A^delta ||Dx^{1/3} d||_X
  double hess = 0.0;   // ||(d_x^2, d_y^2) Dx^{1/3} d||_X
  double omega = 0.0;  // ||w||_X
};

EnergyBreakdown energy_functional(const XNormAccumulator& d13, const XNormAccumulator& hess,
                                  const XNormAccumulator& omega, const NormParams& p, double A);

enum class Region { res, HL, LH };

const char* region_name(Region r);
Region region_classify(double k, double l);

// Checks the explicit-constant inequalities of the region containing (k, l)
// for exponents s, s1, s2 >= 0. Requires k != 0, l != 0 and k != l.
bool region_inequality_check(double k, double l, double s, double s1, double s2);

}  // namespace lcsim
