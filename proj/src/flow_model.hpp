#pragma once

// Right-hand sides and time stepping for the shear-rescaled perturbation system
//
//   w_t + y w_x - (nu/A) Lap w = -(1/A) [ u.grad w - lam (d_x(d_y d . Lap d) - d_y(d_x d . Lap d)) ]
//   u = grad^perp Lap^{-1} w
//   d_t + y d_x - (gam/A) Lap d = -(1/A) [ u.grad d - gam |grad d|^2 (d + e1) ]
//
// with director n = d + e1 on the unit sphere. Time is the rescaled time
// (original time = t / A). The transport y d_x is carried exactly by the shear
// frame: shear_time = -t, so a label with initial vertical wavenumber xi has
// physical wavenumber xi - k t.

#include <array>
#include <cstddef>

#include "spectral.hpp"

namespace lcsim {

struct PhysParams {
  double A = 1.0;
  double nu = 1.0;
  double lam = 1.0;
  double gam = 1.0;

  void validate() const;
};

struct ModelOptions {
  bool nonlinear = true;
  bool couple_fluid = true;  // false: director-only harmonic map flow, omega stays 0
  // Remap aborts the run if it drops more than this fraction of ||w||^2 + ||d||^2.
  double remap_loss_max = 1e-8;
};

using Director = std::array<SpectralField, 3>;

struct FlowState {
  SpectralField omega;
  Director d;
  double t = 0.0;

  double shear_time() const { return omega.shear_time(); }
  void set_shear_time(double s);
  double energy() const;  // ||w||^2 + sum ||d_c||^2
  bool has_non_finite() const;
};

FlowState zero_state(const Grid& grid);

struct Velocity {
  SpectralField u1;
  SpectralField u2;
};

// u1 = d_y Lap^{-1} w, u2 = -d_x Lap^{-1} w (physical-frame derivatives).
Velocity velocity_from_vorticity(const SpectralField& omega);

// max |i k u1 + i xi_eff u2| relative to max |u|.
double spectral_divergence(const Velocity& u);

// d_x(d_y d . Lap d) - d_y(d_x d . Lap d), dealiased, without the lam/A factor.
SpectralField leslie_stress_curl(const Director& d);

// The same forcing computed as curl of -div(grad d (.) grad d); independent of
// the identity used by leslie_stress_curl.
SpectralField leslie_stress_curl_from_tensor(const Director& d);

struct RenormResult {
  Director d;
  double max_correction = 0.0;       // max |n' - n|
  double max_deviation_before = 0.0;  // max ||n| - 1| before projecting
  double max_deviation_after = 0.0;
};

// Projects n = d + e1 pointwise onto the unit sphere at the collocation points.
// Throws NumericalError if |n| vanishes anywhere.
RenormResult renormalize_director(const Director& d);

double max_abs_physical(const SpectralField& f);
// max over collocation points of |grad n| (Frobenius over the 3 components).
double max_grad_n(const Director& d);
// min over collocation points of |n|.
double min_abs_n(const Director& d);
double max_velocity(const Velocity& u);

struct StepReport {
  double dt = 0.0;
  double max_u = 0.0;
  double max_grad_n = 0.0;
  double renorm_correction = 0.0;
  double sphere_deviation_before = 0.0;
  double sphere_deviation_after = 0.0;
  double remap_loss = 0.0;  // energy dropped by a remap during this step
  bool remapped = false;
};

struct StepResult {
  FlowState state;
  StepReport report;
};

class FlowModel {
 public:
  FlowModel(const Grid& grid, PhysParams phys, ModelOptions opts);

  const Grid& grid() const { return grid_; }
  const PhysParams& phys() const { return phys_; }
  const ModelOptions& options() const { return opts_; }

  // Full right-hand sides in the shear frame (diffusion included).
  SpectralField vorticity_rhs(const FlowState& s) const;
  Director director_rhs(const FlowState& s) const;

  // Largest admissible dt for the explicit nonlinear terms.
  double cfl_limit(const FlowState& s) const;

  // One integrating-factor Heun step. Throws ValidationError on dt > CFL limit,
  // NumericalError on excessive remap loss or a vanishing director. Non-finite
  // values are passed through for the blow-up monitor to flag.
  StepResult step(const FlowState& s, double dt) const;

 private:
  struct Nonlinear {
    SpectralField omega;
    Director d;
  };
  Nonlinear nonlinear_terms(const FlowState& s) const;
  // exp(-coef * int_0^dt (k^2 + (xi_eff - k u)^2) du) applied in place.
  void apply_integrating_factor(SpectralField& f, double coef, double dt) const;

  Grid grid_;
  PhysParams phys_;
  ModelOptions opts_;
  PaddedTransform padded_;
};

enum class Verdict { healthy, warning, blown_up };

const char* verdict_name(Verdict v);

class BlowUpMonitor {
 public:
  explicit BlowUpMonitor(double initial_grad_n, double blowup_factor = 1e3,
                         double warning_factor = 10.0);

  Verdict assess(double grad_n, bool has_nan) const;
  Verdict assess(const FlowState& s) const;
  double reference() const { return reference_; }

 private:
  double reference_;
  double blowup_factor_;
  double warning_factor_;
};

}  // namespace lcsim
