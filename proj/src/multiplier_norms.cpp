#include "multiplier_norms.hpp"

#include <algorithm>
#include <cmath>

#include "error.hpp"

namespace lcsim {

namespace {

double sgn(double v) { return (v > 0.0) - (v < 0.0); }

double bracket(double v) { return std::sqrt(1.0 + v * v); }

}  // namespace

void NormParams::validate() const {
  if (!(a > 0.0 && a < kMaxWeightRate))
    throw ValidationError("norms.a must lie in (0, 1/(16(1+2pi)))");
  const double eps_lo = corollary_regime ? 1.0 / 6.0 : 1.0 / 3.0;
  if (!(eps > eps_lo && eps < 0.5))
    throw ValidationError(corollary_regime ? "norms.eps must lie in (1/6, 1/2)"
                                           : "norms.eps must lie in (1/3, 1/2)");
  if (!(m > 0.5)) throw ValidationError("norms.m must be > 1/2");
  if (!(delta > 1.0)) throw ValidationError("norms.delta must be > 1");
}

double m1_eval(double k, double xi, double A) {
  if (k == 0.0) return 0.5 * kPi + 0.5 * kPi * sgn(xi);
  return std::atan(std::cbrt(1.0 / (A * std::abs(k))) * sgn(k) * xi) + 0.5 * kPi;
}

double m2_eval(double k, double xi) {
  if (k == 0.0) return 0.5 * kPi + 0.5 * kPi * sgn(xi);
  return std::atan(xi / k) + 0.5 * kPi;
}

double m_eval(double k, double xi, double A) { return m1_eval(k, xi, A) + m2_eval(k, xi) + 1.0; }

double m_xi_derivative_weighted(double k, double xi, double A) {
  if (k == 0.0) return 0.0;
  const double ak = std::cbrt(A * std::abs(k));  // A^{1/3} |k|^{1/3}
  const double first = std::cbrt(k * k / A) / (1.0 + xi * xi / (ak * ak));
  return first + k * k / (k * k + xi * xi);
}

MultiplierGrid::MultiplierGrid(const Grid& grid, double shear_time, double A)
    : grid_(grid), m_(grid.size()), kdm_(grid.size()) {
  grid_.validate();
  if (!(A > 0.0)) throw ValidationError("MultiplierGrid: A must be > 0");
  for (int p = 0; p < grid.nx; ++p) {
    const double k = grid.kx(p);
    for (int q = 0; q < grid.ny; ++q) {
      const double xi = grid.xi(q) + k * shear_time;
      m_[idx(p, q)] = m_eval(k, xi, A);
      kdm_[idx(p, q)] = m_xi_derivative_weighted(k, xi, A);
    }
  }
}

double MultiplierGrid::min_m() const { return *std::min_element(m_.begin(), m_.end()); }
double MultiplierGrid::max_m() const { return *std::max_element(m_.begin(), m_.end()); }
double MultiplierGrid::min_k_dxi_m() const {
  return *std::min_element(kdm_.begin(), kdm_.end());
}

namespace {

// area * sum w(k, xi_eff) |c|^2
double weighted_sum(const SpectralField& f, const std::function<double(double, double)>& w) {
  const Grid& g = f.grid();
  double s = 0.0;
  for (int p = 0; p < g.nx; ++p) {
    const double k = g.kx(p);
    for (int q = 0; q < g.ny; ++q) s += w(k, f.xi_eff(p, q)) * std::norm(f(p, q));
  }
  return s * g.area();
}

double dx_grad_inv_lap(double k, double xi) {
  const double r = k * k + xi * xi;
  return r > 0.0 ? k * k / r : 0.0;
}

}  // namespace

double m_weighted_norm_sq(const SpectralField& f, double A) {
  return weighted_sum(f, [A](double k, double xi) { return m_eval(k, xi, A); });
}

double ghost_dissipation(const SpectralField& f, double A) {
  return weighted_sum(f, [A](double k, double xi) { return m_xi_derivative_weighted(k, xi, A); });
}

CoercivityResult coercivity_check(const SpectralField& f, double A) {
  CoercivityResult r;
  r.lhs = ghost_dissipation(f, A);
  const double c1 = 0.25 / std::cbrt(A);
  const double c2 = 0.5 / A;
  r.rhs = weighted_sum(f, [&](double k, double xi) {
    return c1 * std::cbrt(k * k) - c2 * xi * xi + dx_grad_inv_lap(k, xi);
  });
  r.margin = r.lhs - r.rhs;
  return r;
}

ModeWeight weight_identity() {
  return [](double, double) { return 1.0; };
}

ModeWeight weight_dx13() {
  return [](double k, double) { return std::cbrt(k * k); };
}

ModeWeight weight_hess_dx13() {
  return [](double k, double xi) { return (k * k * k * k + xi * xi * xi * xi) * std::cbrt(k * k); };
}

double lambda_weight(double k, const NormParams& p, double k_floor) {
  const double kk = k == 0.0 ? k_floor : std::abs(k);
  return std::pow(1.0 + kk * kk, p.m) * std::pow(1.0 + 1.0 / (kk * kk), p.eps);
}

double y_norm(std::span<const SpectralField> comps, const NormParams& p, const ModeWeight& w) {
  double s = 0.0;
  for (const auto& f : comps) {
    const double floor = 0.5 * f.grid().dk();
    s += weighted_sum(f, [&](double k, double xi) { return lambda_weight(k, p, floor) * w(k, xi); });
  }
  return std::sqrt(s);
}

double y_norm(const SpectralField& f, const NormParams& p, const ModeWeight& w) {
  return y_norm(std::span<const SpectralField>(&f, 1), p, w);
}

XNormAccumulator::XNormAccumulator(NormParams p, double A, ModeWeight w)
    : p_(p), A_(A), w_(std::move(w)) {
  if (!(A > 0.0)) throw ValidationError("XNormAccumulator: A must be > 0");
}

void XNormAccumulator::update(std::span<const SpectralField> comps, double t) {
  if (st_.samples > 0 && t < st_.last_t)
    throw ValidationError("XNormAccumulator: time regression");
  const double rate = 2.0 * p_.a / std::cbrt(A_);
  std::array<double, 4> v{};
  for (const auto& f : comps) {
    const Grid& g = f.grid();
    const double floor = 0.5 * g.dk();
    for (int pi = 0; pi < g.nx; ++pi) {
      const double k = g.kx(pi);
      const double base =
          lambda_weight(k, p_, floor) * std::exp(rate * std::cbrt(k * k) * t);
      for (int q = 0; q < g.ny; ++q) {
        const double xi = f.xi_eff(pi, q);
        const double c2 = std::norm(f(pi, q));
        if (c2 == 0.0) continue;
        const double wc = base * w_(k, xi) * c2;
        v[0] += wc;
        v[1] += wc * (k * k + xi * xi);
        v[2] += wc * std::cbrt(k * k);
        v[3] += wc * dx_grad_inv_lap(k, xi);
      }
    }
  }
  if (!comps.empty()) {
    const double area = comps.front().grid().area();
    for (auto& x : v) x *= area;
  }
  const std::array<double, 3> integrand{v[1] / A_, v[2] / std::cbrt(A_), v[3]};
  st_.terms[0] = std::max(st_.terms[0], v[0]);
  if (st_.samples > 0) {
    const double h = t - st_.last_t;
    for (int i = 0; i < 3; ++i)
      st_.terms[i + 1] += 0.5 * h * (st_.last_integrand[i] + integrand[i]);
  }
  st_.last_integrand = integrand;
  st_.last_t = t;
  ++st_.samples;
}

void XNormAccumulator::update(const SpectralField& f, double t) {
  update(std::span<const SpectralField>(&f, 1), t);
}

double XNormAccumulator::value() const {
  return std::sqrt(st_.terms[0] + st_.terms[1] + st_.terms[2] + st_.terms[3]);
}

EnergyBreakdown energy_functional(const XNormAccumulator& d13, const XNormAccumulator& hess,
                                  const XNormAccumulator& omega, const NormParams& p, double A) {
  EnergyBreakdown e;
  e.d13 = std::pow(A, p.delta) * d13.value();
  e.hess = hess.value();
  e.omega = omega.value();
  e.total = e.d13 + e.hess + e.omega;
  return e;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::res: return "res";
    case Region::HL: return "HL";
    case Region::LH: return "LH";
  }
  return "unknown";
}

Region region_classify(double k, double l) {
  const double ak = std::abs(k);
  const double akl = std::abs(k - l);
  if (ak > 2.0 * akl) return Region::HL;
  if (2.0 * ak < akl) return Region::LH;
  return Region::res;
}

bool region_inequality_check(double k, double l, double s, double s1, double s2) {
  constexpr double tol = 1e-12;
  const auto le = [](double lhs, double rhs) { return lhs <= rhs * (1.0 + tol); };
  const double ak = std::abs(k), al = std::abs(l), akl = std::abs(k - l);
  switch (region_classify(k, l)) {
    case Region::res:
      return le(al, 3.0 * ak) &&
             le(std::pow(bracket(k), s1) * std::pow(bracket(1.0 / k), s2),
                std::pow(2.0, s1 + s2) * std::pow(bracket(k - l), s1) *
                    std::pow(bracket(1.0 / (k - l)), s2));
    case Region::HL:
      return le(std::pow(akl, s), std::pow(ak, s)) &&
             le(std::pow(ak, s), std::pow(2.0, s) * std::pow(al, s)) &&
             le(std::pow(bracket(k), s1) * std::pow(bracket(1.0 / k), s2),
                std::pow(2.0, s1) * std::pow(1.5, s2) * std::pow(bracket(l), s1) *
                    std::pow(bracket(1.0 / l), s2));
    case Region::LH:
      return le(std::pow(ak, s), std::pow(2.0, -s) * std::pow(akl, s)) &&
             le(std::pow(bracket(k), 2.0 * s),
                std::pow(3.0, 2.0 * s) * std::pow(bracket(l), s) * std::pow(bracket(k - l), s));
  }
  return false;
}

}  // namespace lcsim
