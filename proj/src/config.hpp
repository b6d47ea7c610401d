#pragma once

// Flat key = value run configuration with dotted keys, e.g.
//
//   grid.nx = 128
//   grid.lx = 16pi
//   phys.A = 1000
//   init.kind = director_family
//
// '#' starts a comment. Numbers may carry a trailing "pi" factor.

#include <cstdint>
#include <string>
#include <vector>

#include "flow_model.hpp"
#include "initial_data.hpp"
#include "multiplier_norms.hpp"
#include "spectral.hpp"

namespace lcsim {

struct TimeParams {
  double dt = 0.01;
  double t_end = 1.0;
  int diag_every = 10;
  int checkpoint_every = 0;  // steps; 0 writes a checkpoint at the end only
};

enum class InitKind { director_family, file, single_mode, random };

const char* init_kind_name(InitKind k);

struct InitParams {
  InitKind kind = InitKind::director_family;
  InitialDataParams family;
  std::string path;                 // file: checkpoint to start from
  std::string field = "omega";      // single_mode: omega, d1, d2 or d3
  double k = 1.0;                   // single_mode wavenumbers (physical, on grid)
  double xi = 0.0;
  double amplitude = 1e-3;          // single_mode peak value; random L2 norm
};

struct RunParams {
  bool nonlinear = true;
  bool couple_fluid = true;
  std::uint64_t seed = 0;
  double blowup_factor = 1e3;
  double remap_loss_max = 1e-8;
};

struct SimConfig {
  Grid grid;
  PhysParams phys;
  NormParams norms;
  double C_cal = 1.0;
  TimeParams time;
  InitParams init;
  RunParams run;

  // Throws ValidationError on unknown keys, malformed values or violated
  // constraints.
  static SimConfig parse(const std::string& text);
  static SimConfig load(const std::string& path);  // also IoError
  std::string serialize() const;
  void validate() const;
};

// Comma-separated list of numbers. Throws ValidationError.
std::vector<double> parse_number_list(const std::string& csv);

}  // namespace lcsim
