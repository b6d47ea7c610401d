#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "checkpoint.hpp"
#include "doctest.h"
#include "error.hpp"
#include "experiment.hpp"
#include "oracles.hpp"
#include "simulation.hpp"

using namespace lcsim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("lcsim_unit_" + name);
  fs::remove_all(p);
  return p;
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

SimConfig small_random() {
  return SimConfig::parse(
      "grid.nx = 16\ngrid.ny = 16\nphys.A = 10\n"
      "init.kind = random\ninit.amplitude = 0.05\nrun.seed = 3\n"
      "time.dt = 0.02\ntime.t_end = 0.4\ntime.diag_every = 5\ntime.checkpoint_every = 10\n");
}

// Single linear vorticity mode cos(k x + xi0 y) on a 32x32 box with lx = ly = 2pi.
SimConfig linear_mode() {
  return SimConfig::parse(
      "grid.nx = 32\ngrid.ny = 32\ngrid.lx = 2pi\ngrid.ly = 2pi\n"
      "phys.A = 2\nphys.nu = 0.05\n"
      "init.kind = single_mode\ninit.field = omega\ninit.k = 1\ninit.xi = 3\ninit.amplitude = 0.2\n"
      "run.nonlinear = false\ntime.dt = 0.01\ntime.t_end = 4\ntime.diag_every = 10\n");
}

double lam_w(double k, const NormParams& p) {
  return std::pow(1.0 + k * k, p.m) * std::pow(1.0 + 1.0 / (k * k), p.eps);
}

}  // namespace

TEST_SUITE("simulation") {
  TEST_CASE("diagnostics header and rows have the same number of columns") {
    const auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ',') + 1; };
    CHECK(count(diagnostics_header()) == count(format_row(DiagnosticsRow{})));
    CHECK(diagnostics_header().rfind("t,Y_d13,", 0) == 0);
  }

  TEST_CASE("single-mode initial state and grid checks") {
    SimConfig c = linear_mode();
    const FlowState s = build_initial_state(c);
    CHECK(oracle::eval_direct(s.omega, 0.3, -0.2) == doctest::Approx(0.2 * std::cos(0.3 - 0.6)));
    c.init.k = 0.7;
    CHECK_THROWS_AS(build_initial_state(c), ValidationError);
    c.init.k = 100.0;
    CHECK_THROWS_AS(build_initial_state(c), ValidationError);
  }

  TEST_CASE("linear mode: Y and X diagnostics against the closed form") {
    const SimConfig c = linear_mode();
    Simulation sim(c);
    std::vector<DiagnosticsRow> rows;
    sim.run(c.time.t_end, [&](const DiagnosticsRow& r) { rows.push_back(r); });
    REQUIRE(rows.size() == 41);
    CHECK(rows.back().t == doctest::Approx(4.0));

    const double k = 1.0, xi0 = 3.0, A = c.phys.A, coef = c.phys.nu / A;
    const NormParams& np = c.norms;
    const double area = c.grid.area();
    // |c(t)|^2 for the pair of coefficients, times the box area
    const auto energy = [&](double t) {
      const double e = coef * (k * k * t + xi0 * xi0 * t - xi0 * k * t * t + k * k * t * t * t / 3.0);
      return 2.0 * 0.01 * std::exp(-2.0 * e) * area;
    };
    const auto weight = [&](double t) {
      return lam_w(k, np) * std::exp(2.0 * np.a / std::cbrt(A) * std::cbrt(k * k) * t);
    };
    const auto xi_at = [&](double t) { return xi0 - k * t; };

    for (const DiagnosticsRow& r : rows)
      CHECK(r.Y_omega == doctest::Approx(std::sqrt(lam_w(k, np) * energy(r.t))).epsilon(1e-10));

    const double T = rows.back().t;
    const double grad = oracle::adaptive_simpson(
        [&](double t) { return weight(t) * energy(t) * (k * k + xi_at(t) * xi_at(t)) / A; }, 0.0, T, 1e-12);
    const double d13 = oracle::adaptive_simpson(
        [&](double t) { return weight(t) * energy(t) * std::cbrt(k * k) / std::cbrt(A); }, 0.0, T, 1e-12);
    const double damp = oracle::adaptive_simpson(
        [&](double t) { return weight(t) * energy(t) * k * k / (k * k + xi_at(t) * xi_at(t)); }, 0.0, T,
        1e-12);
    double sup = 0.0;
    for (const DiagnosticsRow& r : rows) sup = std::max(sup, weight(r.t) * energy(r.t));
    const auto& x = rows.back().X_omega;
    CHECK(x[0] == doctest::Approx(sup).epsilon(1e-10));
    CHECK(x[1] == doctest::Approx(grad).epsilon(0.01));
    CHECK(x[2] == doctest::Approx(d13).epsilon(0.01));
    CHECK(x[3] == doctest::Approx(damp).epsilon(0.01));
    CHECK(rows.back().Y_d13 == 0.0);
    CHECK(sim.snapshot().x_monotone);
  }

  TEST_CASE("nonlinear run: invariants and determinism") {
    const SimConfig c = small_random();
    const auto collect = [&] {
      Simulation sim(c);
      std::string out;
      sim.run(c.time.t_end, [&](const DiagnosticsRow& r) { out += format_row(r) + "\n"; });
      CHECK_FALSE(sim.blown_up());
      CHECK(sim.live().max_sphere_deviation < 1e-8);
      return out;
    };
    const std::string a = collect(), b = collect();
    CHECK(a == b);
    Simulation sim(c);
    sim.run(c.time.t_end, [&](const DiagnosticsRow& r) {
      CHECK(r.max_div_u <= 1e-13);
      CHECK(std::abs(r.min_abs_n - 1.0) < 1e-12);
      CHECK(r.verdict == Verdict::healthy);
    });
    CHECK(sim.step_index() == 20);
  }

  TEST_CASE("initial CFL violation is a validation error") {
    SimConfig c = small_random();
    c.init.amplitude = 50.0;
    c.time.dt = 0.4;
    Simulation sim(c);
    CHECK_THROWS_AS(sim.run(1.0, [](const DiagnosticsRow&) {}), ValidationError);
  }

  TEST_CASE("excessive remap loss ends the run as blow-up") {
    SimConfig c = linear_mode();
    c.grid.nx = c.grid.ny = 16;
    c.init.k = 1.0;
    c.init.xi = -3.5;  // label i = -7 moves to -9 at the first remap (shear time -1)
    c.run.remap_loss_max = 1e-12;
    c.time.t_end = 1.5;
    Simulation sim(c);
    std::vector<DiagnosticsRow> rows;
    sim.run(c.time.t_end, [&](const DiagnosticsRow& r) { rows.push_back(r); });
    CHECK(sim.blown_up());
    CHECK_FALSE(sim.reason().empty());
    CHECK(rows.back().verdict == Verdict::blown_up);
    CHECK(rows.back().t < 1.5);
  }

  TEST_CASE("run writes its outputs and resume reproduces an unbroken run") {
    const fs::path full = scratch("sim_full"), part = scratch("sim_part");
    SimConfig c = small_random();
    const RunSummary s_full = run_simulation(c, full.string());
    for (const char* f : {"config.txt", "diagnostics.csv", "checkpoint.bin", "checkpoint.bin.json", "summary.json"})
      CHECK(fs::exists(full / f));
    CHECK(s_full.verdict == "healthy");
    CHECK(s_full.t_final == doctest::Approx(0.4));
    CHECK(s_full.t_final_original == doctest::Approx(0.04));
    CHECK(SimConfig::load((full / "config.txt").string()).serialize() == c.serialize());

    c.time.t_end = 0.2;
    run_simulation(c, part.string());
    const RunSummary s_res = resume_simulation((part / "checkpoint.bin").string(), 0.4);
    CHECK(read_text(part / "diagnostics.csv") == read_text(full / "diagnostics.csv"));
    CHECK(s_res.peak_grad_n == s_full.peak_grad_n);
    CHECK(s_res.E_final == s_full.E_final);
    const Grid g = c.grid;
    const FlowState a = load_checkpoint((full / "checkpoint.bin").string(), g);
    const FlowState b = load_checkpoint((part / "checkpoint.bin").string(), g);
    CHECK(oracle::max_abs_diff(a.omega, b.omega) <= 1e-12);
    CHECK(oracle::max_abs_diff(a.d[1], b.d[1]) <= 1e-12);

    CHECK_THROWS_AS(resume_simulation((part / "checkpoint.bin").string(), 0.1), ValidationError);
  }

  TEST_CASE("single-cell sweep equals a plain run and job count does not matter") {
    SimConfig c = small_random();
    c.time.t_end = 0.2;
    const fs::path one = scratch("sweep_one"), two = scratch("sweep_two"), plain = scratch("sweep_plain");
    const std::vector<SweepCell> cells = sweep_amplitude(c, {10.0}, {}, 1, one.string());
    REQUIRE(cells.size() == 1);
    const RunSummary s = run_simulation(c, plain.string());
    CHECK(cells[0].verdict == s.verdict);
    CHECK(cells[0].peak_grad_n == s.peak_grad_n);
    CHECK(cells[0].peak_E == s.peak_E);
    CHECK(read_text(one / "cell_0" / "diagnostics.csv") == read_text(plain / "diagnostics.csv"));

    sweep_amplitude(c, {1.0, 10.0, 100.0}, {}, 1, one.string());
    sweep_amplitude(c, {1.0, 10.0, 100.0}, {}, 3, two.string());
    const std::string t1 = read_text(one / "phase_table.csv"), t2 = read_text(two / "phase_table.csv");
    // rows differ only in the directory column
    std::istringstream a(t1), b(t2);
    std::string la, lb;
    while (std::getline(a, la) && std::getline(b, lb)) {
      const auto strip = [](std::string s) {
        const auto p = s.find("lcsim_unit_sweep_");
        if (p != std::string::npos) s.erase(p, std::string("lcsim_unit_sweep_one").size());
        return s;
      };
      CHECK(strip(la) == strip(lb));
    }
    CHECK(t1.rfind("A,lambda,verdict,worst_verdict,peak_grad_n", 0) == 0);
  }

  TEST_CASE("zero initial data stays healthy with zero norms") {
    SimConfig c = small_random();
    c.init.amplitude = 0.0;
    const RunSummary s = run_simulation(c, scratch("sim_zero").string());
    CHECK(s.verdict == "healthy");
    CHECK(s.peak_grad_n == 0.0);
    CHECK(s.peak_Y_d13 == 0.0);
    CHECK(s.E_final == 0.0);
  }

  TEST_CASE("sweep table has one row per cell and records failing cells") {
    SimConfig c = SimConfig::parse(
        "grid.nx = 32\ngrid.ny = 64\ngrid.lx = 16pi\ngrid.ly = 4pi\nphys.A = 100\n"
        "init.kind = director_family\ninit.lambda = 0.3\ninit.N = 4\ninit.theta = 2\n"
        "time.dt = 0.02\ntime.t_end = 0.1\n");
    const fs::path out = scratch("sweep_cells");
    const std::vector<SweepCell> cells = sweep_amplitude(c, {10.0, 100.0}, {0.3, 0.01}, 2, out.string());
    REQUIRE(cells.size() == 4);
    int errors = 0;
    for (const SweepCell& cell : cells) {
      if (cell.lambda == 0.01) {
        CHECK(cell.verdict == "error");
        CHECK_FALSE(cell.error.empty());
        ++errors;
      } else {
        CHECK(cell.verdict == "healthy");
      }
    }
    CHECK(errors == 2);
    std::istringstream table(read_text(out / "phase_table.csv"));
    std::string line;
    int lines = 0;
    while (std::getline(table, line)) ++lines;
    CHECK(lines == 5);
  }

  TEST_CASE("linear solver agrees with Kelvin modes on a small grid") {
    KelvinSolverOptions o;
    o.n = 16;
    o.t_end = 3.0;
    const KelvinSolverCheck r = kelvin_solver_check(o);
    CHECK(r.max_rel_error <= 1e-10);
    CHECK(r.modes_compared > 100);
  }
}
