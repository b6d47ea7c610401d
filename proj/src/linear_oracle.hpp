#pragma once

// Closed-form Kelvin modes of the linearized vorticity equation
//   w_t + y w_x = nu Lap w
// and checks of their enhanced-dissipation and inviscid-damping behaviour.

#include <complex>
#include <vector>

namespace lcsim {

// Label (k, xi0) where xi0 is the physical vertical frequency at the time of
// evaluation; the initial frequency is xi0 + k t.
struct KelvinMode {
  double k = 1.0;
  double xi0 = 0.0;
  std::complex<double> amplitude{1.0, 0.0};
  double nu = 1.0;
};

// nu * int_0^t k^2 + (xi0 + k (t - s))^2 ds, expanded so it has no cancellation
// at small k.
double kelvin_exponent(double k, double xi0, double nu, double t);
std::complex<double> kelvin_exact(const KelvinMode& mode, double t);

// Same exponent for a mode whose frequency at t = 0 is xi_in.
double kelvin_exponent_from_initial(double k, double xi_in, double nu, double t);

struct EfoldOptions {
  // false divides out the horizontal heat factor exp(-nu k^2 t), leaving the
  // shear-enhanced part only.
  bool include_horizontal_heat = false;
  int samples_per_bracket = 256;
  double rel_tol = 1e-12;
};

// First time the envelope sup_{s<=t} |w(s)| of a mode starting at physical
// frequency xi_in falls to exp(-1) of its initial value.
double efold_time(double k, double xi_in, double nu, const EfoldOptions& opts = {});

struct EnhancedDissipationPoint {
  double k = 0.0;
  double nu = 0.0;
  double tau = 0.0;       // e-fold time
  double residual = 0.0;  // log(1/tau) minus the fitted model
};

struct EnhancedDissipationFit {
  double c = 0.0;  // fitted prefactor of nu^a k^b
  double exponent_k = 0.0;
  double exponent_nu = 0.0;
  // max relative deviation of tau nu^{1/3} k^{2/3} from its mean
  double scaling_spread = 0.0;
  std::vector<EnhancedDissipationPoint> points;
};

// Least-squares fit of log(1/tau) = log c + b log k + a log nu. k = 0 entries
// are skipped. Throws ValidationError with fewer than 4 distinct |k| or fewer
// than 2 distinct nu values.
EnhancedDissipationFit enhanced_dissipation_check(const std::vector<double>& ks,
                                                  const std::vector<double>& nus,
                                                  const EfoldOptions& opts = {});

struct InviscidDampingFit {
  double slope = 0.0;
  std::vector<double> t;
  std::vector<double> abs_phi;
};

// Stream-function amplitude |phi(t)| = |w(t)| / (k^2 + (xi_in - k t)^2) along the
// exact solution, fitted as a power law on [t0, t1] with log-spaced samples.
// Throws ValidationError if k = 0 or the window is degenerate.
InviscidDampingFit inviscid_damping_check(const KelvinMode& initial, double t0, double t1,
                                          int samples = 64);

// Checks |phi(t)| <= C <t>^{-2} (1 + k^2 + xi_in^2) / k^4 |w_in| for nu = 0, where
// xi_in is the initial frequency and xi_in - k t the current one.
bool inviscid_damping_bound_holds(double k, double xi_in, double t, double C);

}  // namespace lcsim
