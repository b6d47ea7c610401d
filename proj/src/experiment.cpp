#include "experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <thread>

#include "error.hpp"
#include "flow_model.hpp"

namespace lcsim {

namespace fs = std::filesystem;

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

}  // namespace

std::vector<SweepCell> sweep_amplitude(const SimConfig& cfg, const std::vector<double>& amplitudes,
                                       const std::vector<double>& lambdas, int jobs,
                                       const std::string& out_dir) {
  cfg.validate();
  if (amplitudes.empty()) throw ValidationError("sweep: at least one amplitude is required");
  if (jobs < 1) throw ValidationError("sweep: --jobs must be >= 1");
  const std::vector<double> lams =
      lambdas.empty() ? std::vector<double>{cfg.init.family.lambda} : lambdas;

  std::vector<SweepCell> cells;
  std::vector<SimConfig> configs;
  for (double A : amplitudes)
    for (double lam : lams) {
      SweepCell c;
      c.A = A;
      c.lambda = lam;
      c.dir = (fs::path(out_dir) / ("cell_" + std::to_string(cells.size()))).string();
      SimConfig cc = cfg;
      cc.phys.A = A;
      cc.init.family.lambda = lam;
      cc.validate();  // reject bad lists before any work starts
      cells.push_back(c);
      configs.push_back(cc);
    }

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      SweepCell& c = cells[i];
      try {
        const RunSummary s = run_simulation(configs[i], c.dir);
        c.verdict = s.verdict;
        c.worst_verdict = s.worst_verdict;
        c.peak_grad_n = s.peak_grad_n;
        c.peak_Y_d13 = s.peak_Y_d13;
        c.peak_E = s.peak_E;
        c.t_of_peak = s.t_of_peak;
        c.e_le_2K = s.e_le_2K_throughout;
      } catch (const std::exception& e) {
        c.verdict = "error";
        c.worst_verdict = "error";
        c.error = e.what();
      }
    }
  };
  const int n_threads = std::min<int>(jobs, static_cast<int>(cells.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ofstream table = open_out(fs::path(out_dir) / "phase_table.csv");
  table << "A,lambda,verdict,worst_verdict,peak_grad_n,peak_Y_d13,peak_E,t_of_peak,E_le_2K,cell_dir,"
           "error\n";
  for (const auto& c : cells) {
    std::string err = c.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n') ch = ';';
    table << fmt(c.A) << ',' << fmt(c.lambda) << ',' << c.verdict << ',' << c.worst_verdict << ','
          << fmt(c.peak_grad_n) << ',' << fmt(c.peak_Y_d13) << ',' << fmt(c.peak_E) << ','
          << fmt(c.t_of_peak) << ',' << (c.e_le_2K ? "true" : "false") << ','
          << fs::path(c.dir).filename().string() << ',' << err << '\n';
  }
  if (!table) throw IoError("short write on phase_table.csv");
  return cells;
}

KelvinSolverCheck kelvin_solver_check(const KelvinSolverOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Grid g;
  g.nx = g.ny = opts.n;
  g.validate();
  PhysParams phys;
  phys.A = opts.A;
  phys.nu = opts.nu;
  ModelOptions mo;
  mo.nonlinear = false;
  mo.remap_loss_max = std::numeric_limits<double>::infinity();
  const FlowModel model(g, phys, mo);

  // Random Hermitian vorticity over every in-band label.
  FlowState st = zero_state(g);
  std::mt19937_64 rng(opts.seed);
  const auto uniform = [&rng] { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };
  const int jm = g.nx / 2 - 1, im = g.ny / 2 - 1;
  for (int j = 0; j <= jm; ++j)
    for (int i = -im; i <= im; ++i) {
      if (j == 0 && i < 0) continue;
      cplx c{uniform(), j == 0 && i == 0 ? 0.0 : uniform()};
      st.omega(g.row_of(j), g.col_of(i)) = c;
      st.omega(g.row_of(-j), g.col_of(-i)) = std::conj(c);
    }
  const SpectralField initial = st.omega;
  const double nu_eff = opts.nu / opts.A;

  KelvinSolverCheck out;
  const long n_steps = std::lround(opts.t_end / opts.dt);
  const long every = std::max(1L, std::lround(opts.compare_every / opts.dt));
  for (long n = 1; n <= n_steps; ++n) {
    st = model.step(st, opts.dt).state;
    if (n % every != 0 && n != n_steps) continue;
    const double t = static_cast<double>(n) * opts.dt;
    const double s = st.shear_time();
    for (int p = 0; p < g.nx; ++p) {
      if (g.is_nyquist_row(p)) continue;
      const double k = g.kx(p);
      for (int q = 0; q < g.ny; ++q) {
        if (g.is_nyquist_col(q)) continue;
        const cplx c0 = initial(p, q);
        if (c0 == cplx{}) continue;
        const double xi_in = g.xi(q);
        const long label = std::lround((xi_in - k * (t + s)) / g.dxi());
        if (std::abs(label) > im) {
          ++out.modes_out_of_band;
          continue;
        }
        const cplx num = st.omega(p, g.col_of(static_cast<int>(label)));
        const cplx exact =
            kelvin_exact(KelvinMode{k, xi_in - k * t, c0, nu_eff}, t);
        out.max_rel_error = std::max(out.max_rel_error, std::abs(num - exact) / std::abs(exact));
        ++out.modes_compared;
      }
    }
  }
  out.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

LinearVerifyReport linear_verify(const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

  LinearVerifyReport r;
  r.dissipation = enhanced_dissipation_check({1, 2, 4, 8}, {1e-2, 1e-3, 1e-4});
  r.damping = inviscid_damping_check(KelvinMode{1.0, 0.0, {1.0, 0.0}, 0.0}, 10.0, 100.0);
  r.solver = kelvin_solver_check();
  const bool k_ok = r.dissipation.exponent_k >= 0.63 && r.dissipation.exponent_k <= 0.70;
  const bool nu_ok = r.dissipation.exponent_nu >= 0.30 && r.dissipation.exponent_nu <= 0.37;
  r.dissipation_ok = k_ok && nu_ok;
  r.damping_ok = r.damping.slope >= -2.1 && r.damping.slope <= -1.9;
  r.solver_ok = r.solver.max_rel_error <= 1e-10;

  const fs::path out(out_dir);
  {
    std::ofstream f = open_out(out / "fit_report.csv");
    f << "check,measured,lower,upper,pass\n";
    const auto row = [&](const char* name, double v, double lo, double hi) {
      f << name << ',' << fmt(v) << ',' << fmt(lo) << ',' << fmt(hi) << ','
        << (v >= lo && v <= hi ? "true" : "false") << '\n';
    };
    row("dissipation_exponent_k", r.dissipation.exponent_k, 0.63, 0.70);
    row("dissipation_exponent_nu", r.dissipation.exponent_nu, 0.30, 0.37);
    row("inviscid_damping_slope", r.damping.slope, -2.1, -1.9);
    row("kelvin_solver_max_rel_error", r.solver.max_rel_error, 0.0, 1e-10);
    f << "dissipation_prefactor_c," << fmt(r.dissipation.c) << ",,,\n";
    if (!f) throw IoError("short write on fit_report.csv");
  }
  {
    std::ofstream f = open_out(out / "efold.csv");
    f << "k,nu,tau,residual\n";
    for (const auto& p : r.dissipation.points)
      f << fmt(p.k) << ',' << fmt(p.nu) << ',' << fmt(p.tau) << ',' << fmt(p.residual) << '\n';
  }
  {
    std::ofstream f = open_out(out / "inviscid.csv");
    f << "t,abs_phi\n";
    for (std::size_t i = 0; i < r.damping.t.size(); ++i)
      f << fmt(r.damping.t[i]) << ',' << fmt(r.damping.abs_phi[i]) << '\n';
  }
  return r;
}

}  // namespace lcsim
