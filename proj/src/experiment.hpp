#pragma once

// Amplitude sweeps, linear verification and the solver-vs-Kelvin comparison.

#include <string>
#include <vector>

#include "config.hpp"
#include "linear_oracle.hpp"
#include "simulation.hpp"

namespace lcsim {

struct SweepCell {
  double A = 0.0;
  double lambda = 0.0;
  std::string verdict;  // "error" if the cell failed
  std::string worst_verdict;
  double peak_grad_n = 0.0;
  double peak_Y_d13 = 0.0;
  double peak_E = 0.0;
  double t_of_peak = 0.0;
  bool e_le_2K = false;
  std::string dir;
  std::string error;
};

// One run per (A, lambda) cell in out_dir/cell_<i>, jobs at a time; the table
// is written to out_dir/phase_table.csv in cell order. An empty lambda list
// uses the configured init.lambda. Per-cell failures are recorded, not thrown.
std::vector<SweepCell> sweep_amplitude(const SimConfig& cfg, const std::vector<double>& amplitudes,
                                       const std::vector<double>& lambdas, int jobs,
                                       const std::string& out_dir);

struct KelvinSolverOptions {
  int n = 64;
  double nu = 1e-3;
  double A = 1.0;
  double dt = 0.01;
  double t_end = 10.0;
  double compare_every = 1.0;
  unsigned long long seed = 7;
};

struct KelvinSolverCheck {
  double max_rel_error = 0.0;
  long modes_compared = 0;  // (mode, time) pairs
  long modes_out_of_band = 0;
  double seconds = 0.0;
};

// Linear solver on a random band-limited vorticity against the closed-form
// Kelvin amplitude of every mode still inside the band.
KelvinSolverCheck kelvin_solver_check(const KelvinSolverOptions& opts = {});

struct LinearVerifyReport {
  EnhancedDissipationFit dissipation;
  InviscidDampingFit damping;
  KelvinSolverCheck solver;
  bool dissipation_ok = false;
  bool damping_ok = false;
  bool solver_ok = false;
};

// Writes fit_report.csv, efold.csv and inviscid.csv into out_dir.
LinearVerifyReport linear_verify(const std::string& out_dir);

}  // namespace lcsim
