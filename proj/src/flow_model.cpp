#include "flow_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"

namespace lcsim {

void PhysParams::validate() const {
  if (!(A > 0.0) || !std::isfinite(A)) throw ValidationError("phys.A must be > 0");
  if (!(nu > 0.0) || !(lam > 0.0) || !(gam > 0.0))
    throw ValidationError("phys.nu, phys.lam, phys.gam must be > 0");
}

void FlowState::set_shear_time(double s) {
  omega.set_shear_time(s);
  for (auto& c : d) c.set_shear_time(s);
}

double FlowState::energy() const {
  double e = omega.l2_norm_sq();
  for (const auto& c : d) e += c.l2_norm_sq();
  return e;
}

bool FlowState::has_non_finite() const {
  if (omega.has_non_finite()) return true;
  return std::any_of(d.begin(), d.end(), [](const SpectralField& c) { return c.has_non_finite(); });
}

FlowState zero_state(const Grid& grid) {
  FlowState s;
  s.omega = SpectralField(grid);
  for (auto& c : s.d) c = SpectralField(grid);
  return s;
}

Velocity velocity_from_vorticity(const SpectralField& omega) {
  const SpectralField psi = inv_laplacian(omega);
  Velocity u{deriv_y_phys(psi), deriv_x(psi)};
  u.u2 *= -1.0;
  return u;
}

double spectral_divergence(const Velocity& u) {
  const Grid& g = u.u1.grid();
  double worst = 0.0;
  double scale = 0.0;
  for (int p = 0; p < g.nx; ++p) {
    const double k = g.kx(p);
    for (int q = 0; q < g.ny; ++q) {
      const double xi = u.u1.xi_eff(p, q);
      const cplx div = cplx{0.0, k} * u.u1(p, q) + cplx{0.0, xi} * u.u2(p, q);
      worst = std::max(worst, std::abs(div));
      scale = std::max({scale, std::abs(u.u1(p, q)), std::abs(u.u2(p, q))});
    }
  }
  return scale > 0.0 ? worst / scale : 0.0;
}

SpectralField leslie_stress_curl(const Director& d) {
  const Grid& g = d[0].grid();
  const double s = d[0].shear_time();
  const PaddedTransform pt(g);
  std::vector<double> p_sum(pt.size(), 0.0);  // d_y d . Lap d
  std::vector<double> q_sum(pt.size(), 0.0);  // d_x d . Lap d
  std::vector<double> dx, dy, lap, unused;
  for (const auto& c : d) {
    pt.to_physical_pair(deriv_x(c), deriv_y_phys(c), dx, dy);
    lap = pt.to_physical(laplacian(c));
    for (std::size_t i = 0; i < p_sum.size(); ++i) {
      p_sum[i] += dy[i] * lap[i];
      q_sum[i] += dx[i] * lap[i];
    }
  }
  SpectralField p_hat, q_hat;
  pt.to_spectral_pair(p_sum, q_sum, s, p_hat, q_hat);
  return deriv_x(p_hat) - deriv_y_phys(q_hat);
}

SpectralField leslie_stress_curl_from_tensor(const Director& d) {
  const Grid& g = d[0].grid();
  const double s = d[0].shear_time();
  const PaddedTransform pt(g);
  std::vector<double> txx(pt.size(), 0.0), txy(pt.size(), 0.0), tyy(pt.size(), 0.0);
  std::vector<double> dx, dy;
  for (const auto& c : d) {
    pt.to_physical_pair(deriv_x(c), deriv_y_phys(c), dx, dy);
    for (std::size_t i = 0; i < txx.size(); ++i) {
      txx[i] += dx[i] * dx[i];
      txy[i] += dx[i] * dy[i];
      tyy[i] += dy[i] * dy[i];
    }
  }
  const SpectralField sxx = pt.to_spectral(txx, s);
  const SpectralField sxy = pt.to_spectral(txy, s);
  const SpectralField syy = pt.to_spectral(tyy, s);
  // F = -div T, forcing = d_y F1 - d_x F2.
  SpectralField f1 = deriv_x(sxx) + deriv_y_phys(sxy);
  SpectralField f2 = deriv_x(sxy) + deriv_y_phys(syy);
  f1 *= -1.0;
  f2 *= -1.0;
  return deriv_y_phys(f1) - deriv_x(f2);
}

RenormResult renormalize_director(const Director& d) {
  const Grid& g = d[0].grid();
  const double s = d[0].shear_time();
  std::array<PhysicalField, 3> n;
  for (int c = 0; c < 3; ++c) n[c] = to_physical(d[c]);
  for (auto& v : n[0].values) v += 1.0;
  RenormResult res;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = n[0].values[i], b = n[1].values[i], c = n[2].values[i];
    const double len = std::sqrt(a * a + b * b + c * c);
    if (!std::isfinite(len)) continue;
    if (len < 1e-12) throw NumericalError("renormalize_director: |n| vanishes at a grid point");
    res.max_deviation_before = std::max(res.max_deviation_before, std::abs(len - 1.0));
    const double inv = 1.0 / len;
    const double corr = std::abs(1.0 - inv) * len;
    res.max_correction = std::max(res.max_correction, corr);
    n[0].values[i] = a * inv;
    n[1].values[i] = b * inv;
    n[2].values[i] = c * inv;
  }
  for (auto& v : n[0].values) v -= 1.0;
  for (int c = 0; c < 3; ++c) res.d[c] = to_spectral(n[c], s);
  res.max_deviation_after = std::abs(min_abs_n(res.d) - 1.0);
  return res;
}

double max_abs_physical(const SpectralField& f) {
  const PhysicalField p = to_physical(f);
  double m = 0.0;
  for (double v : p.values) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(v));
  }
  return m;
}

double max_grad_n(const Director& d) {
  const Grid& g = d[0].grid();
  std::vector<double> sum(g.size(), 0.0);
  for (const auto& c : d) {
    for (const auto& der : {deriv_x(c), deriv_y_phys(c)}) {
      const PhysicalField p = to_physical(der);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += p.values[i] * p.values[i];
    }
  }
  double m = 0.0;
  for (double v : sum) {
    if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
    m = std::max(m, v);
  }
  return std::sqrt(m);
}

double min_abs_n(const Director& d) {
  const Grid& g = d[0].grid();
  std::array<PhysicalField, 3> n;
  for (int c = 0; c < 3; ++c) n[c] = to_physical(d[c]);
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = n[0].values[i] + 1.0, b = n[1].values[i], c = n[2].values[i];
    lo = std::min(lo, std::sqrt(a * a + b * b + c * c));
  }
  return lo;
}

double max_velocity(const Velocity& u) {
  const PhysicalField a = to_physical(u.u1);
  const PhysicalField b = to_physical(u.u2);
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    m = std::max(m, std::hypot(a.values[i], b.values[i]));
  return m;
}

FlowModel::FlowModel(const Grid& grid, PhysParams phys, ModelOptions opts)
    : grid_(grid), phys_(phys), opts_(opts), padded_(grid) {
  grid_.validate();
  phys_.validate();
}

FlowModel::Nonlinear FlowModel::nonlinear_terms(const FlowState& st) const {
  const double s = st.shear_time();
  const std::size_t n = padded_.size();
  const bool fluid = opts_.couple_fluid;

  std::vector<double> u1, u2, wx, wy;
  if (fluid) {
    const Velocity u = velocity_from_vorticity(st.omega);
    padded_.to_physical_pair(u.u1, u.u2, u1, u2);
    padded_.to_physical_pair(deriv_x(st.omega), deriv_y_phys(st.omega), wx, wy);
  }

  std::array<std::vector<double>, 3> dv, dx, dy, lap;
  for (int c = 0; c < 3; ++c) {
    padded_.to_physical_pair(deriv_x(st.d[c]), deriv_y_phys(st.d[c]), dx[c], dy[c]);
  }
  padded_.to_physical_pair(st.d[0], st.d[1], dv[0], dv[1]);
  if (fluid) {
    padded_.to_physical_pair(st.d[2], laplacian(st.d[0]), dv[2], lap[0]);
    padded_.to_physical_pair(laplacian(st.d[1]), laplacian(st.d[2]), lap[1], lap[2]);
  } else {
    dv[2] = padded_.to_physical(st.d[2]);
  }

  std::vector<double> grad_sq(n, 0.0);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < n; ++i) grad_sq[i] += dx[c][i] * dx[c][i] + dy[c][i] * dy[c][i];

  const double inv_a = 1.0 / phys_.A;
  std::array<std::vector<double>, 3> nd;
  for (int c = 0; c < 3; ++c) {
    nd[c].resize(n);
    const double e1 = c == 0 ? 1.0 : 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double v = phys_.gam * grad_sq[i] * (dv[c][i] + e1);
      if (fluid) v -= u1[i] * dx[c][i] + u2[i] * dy[c][i];
      nd[c][i] = v * inv_a;
    }
  }

  Nonlinear out;
  padded_.to_spectral_pair(nd[0], nd[1], s, out.d[0], out.d[1]);

  if (fluid) {
    std::vector<double> adv(n), p_sum(n, 0.0), q_sum(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) adv[i] = -(u1[i] * wx[i] + u2[i] * wy[i]) * inv_a;
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < n; ++i) {
        p_sum[i] += dy[c][i] * lap[c][i];
        q_sum[i] += dx[c][i] * lap[c][i];
      }
    SpectralField adv_hat, p_hat, q_hat;
    padded_.to_spectral_pair(nd[2], adv, s, out.d[2], adv_hat);
    padded_.to_spectral_pair(p_sum, q_sum, s, p_hat, q_hat);
    out.omega = std::move(adv_hat);
    out.omega.axpy(phys_.lam * inv_a, deriv_x(p_hat) - deriv_y_phys(q_hat));
  } else {
    out.d[2] = padded_.to_spectral(nd[2], s);
    out.omega = SpectralField(grid_, s);
  }
  return out;
}

SpectralField FlowModel::vorticity_rhs(const FlowState& st) const {
  SpectralField rhs = laplacian(st.omega);
  rhs *= phys_.nu / phys_.A;
  if (opts_.nonlinear) rhs += nonlinear_terms(st).omega;
  return rhs;
}

Director FlowModel::director_rhs(const FlowState& st) const {
  Director rhs;
  for (int c = 0; c < 3; ++c) {
    rhs[c] = laplacian(st.d[c]);
    rhs[c] *= phys_.gam / phys_.A;
  }
  if (opts_.nonlinear) {
    const Nonlinear nl = nonlinear_terms(st);
    for (int c = 0; c < 3; ++c) rhs[c] += nl.d[c];
  }
  return rhs;
}

double FlowModel::cfl_limit(const FlowState& st) const {
  if (!opts_.nonlinear) return std::numeric_limits<double>::infinity();
  double umax = 0.0;
  if (opts_.couple_fluid) umax = max_velocity(velocity_from_vorticity(st.omega));
  const double xi_eff_max = grid_.xi_max() + grid_.k_max() * std::abs(st.shear_time());
  return 0.5 / (umax * (grid_.k_max() + xi_eff_max) / phys_.A + 1.0);
}

void FlowModel::apply_integrating_factor(SpectralField& f, double coef, double dt) const {
  const double s0 = f.shear_time();
  for (int p = 0; p < grid_.nx; ++p) {
    const double k = grid_.kx(p);
    for (int q = 0; q < grid_.ny; ++q) {
      const double a = grid_.xi(q) + k * s0;
      const double integral = (k * k + a * a) * dt - a * k * dt * dt + k * k * dt * dt * dt / 3.0;
      f(p, q) *= std::exp(-coef * integral);
    }
  }
  f.set_shear_time(s0 - dt);
}

StepResult FlowModel::step(const FlowState& st, double dt) const {
  if (!(dt > 0.0)) throw ValidationError("step: dt must be > 0");
  const double limit = cfl_limit(st);
  if (dt > limit * (1.0 + 1e-12))
    throw ValidationError("step: dt = " + std::to_string(dt) + " exceeds CFL limit " +
                          std::to_string(limit));

  const double cw = phys_.nu / phys_.A;
  const double cd = phys_.gam / phys_.A;
  StepResult res;
  res.report.dt = dt;
  FlowState& out = res.state;

  if (!opts_.nonlinear) {
    out = st;
    apply_integrating_factor(out.omega, cw, dt);
    for (auto& c : out.d) apply_integrating_factor(c, cd, dt);
  } else {
    const Nonlinear n0 = nonlinear_terms(st);

    FlowState pred = st;
    pred.omega.axpy(dt, n0.omega);
    apply_integrating_factor(pred.omega, cw, dt);
    for (int c = 0; c < 3; ++c) {
      pred.d[c].axpy(dt, n0.d[c]);
      apply_integrating_factor(pred.d[c], cd, dt);
    }
    pred.t = st.t + dt;
    const Nonlinear n1 = nonlinear_terms(pred);

    out = st;
    out.omega.axpy(0.5 * dt, n0.omega);
    apply_integrating_factor(out.omega, cw, dt);
    out.omega.axpy(0.5 * dt, n1.omega);
    for (int c = 0; c < 3; ++c) {
      out.d[c].axpy(0.5 * dt, n0.d[c]);
      apply_integrating_factor(out.d[c], cd, dt);
      out.d[c].axpy(0.5 * dt, n1.d[c]);
    }
    // The sphere constraint is a property of the nonlinear flow only; the
    // linearized dynamics are left untouched.
    if (!out.has_non_finite()) {
      RenormResult rn = renormalize_director(out.d);
      out.d = std::move(rn.d);
      res.report.renorm_correction = rn.max_correction;
      res.report.sphere_deviation_before = rn.max_deviation_before;
      res.report.sphere_deviation_after = rn.max_deviation_after;
    }
  }
  out.t = st.t + dt;

  const double unit = grid_.remap_unit();
  const double s = out.shear_time();
  if (std::abs(s) >= unit * (1.0 - 1e-12)) {
    const double periods = std::floor(std::abs(s) / unit * (1.0 + 1e-12));
    const double new_s = s - std::copysign(periods * unit, s);
    const double total = out.energy();
    double lost = 0.0;
    RemapResult rw = remap_shear_frame(out.omega, new_s);
    lost += rw.discarded_energy;
    out.omega = std::move(rw.field);
    for (auto& c : out.d) {
      RemapResult rc = remap_shear_frame(c, new_s);
      lost += rc.discarded_energy;
      c = std::move(rc.field);
    }
    res.report.remapped = true;
    res.report.remap_loss = lost;
    if (total > 0.0 && lost > opts_.remap_loss_max * total)
      throw NumericalError("remap discarded " + std::to_string(lost / total) +
                           " of the total energy (limit " + std::to_string(opts_.remap_loss_max) +
                           ")");
  }
  return res;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::healthy: return "healthy";
    case Verdict::warning: return "warning";
    case Verdict::blown_up: return "blown_up";
  }
  return "unknown";
}

BlowUpMonitor::BlowUpMonitor(double initial_grad_n, double blowup_factor, double warning_factor)
    : reference_(std::max(initial_grad_n, 1e-12)),
      blowup_factor_(blowup_factor),
      warning_factor_(warning_factor) {}

Verdict BlowUpMonitor::assess(double grad_n, bool has_nan) const {
  if (has_nan || !std::isfinite(grad_n)) return Verdict::blown_up;
  if (grad_n > blowup_factor_ * reference_) return Verdict::blown_up;
  if (grad_n > warning_factor_ * reference_) return Verdict::warning;
  return Verdict::healthy;
}

Verdict BlowUpMonitor::assess(const FlowState& s) const {
  const bool nan = s.has_non_finite();
  return assess(nan ? std::numeric_limits<double>::quiet_NaN() : max_grad_n(s.d), nan);
}

}  // namespace lcsim
