#pragma once

// Time integration driver: diagnostics cadence, norm accumulators, blow-up
// monitoring and the bootstrap energy bound.

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "config.hpp"
#include "flow_model.hpp"
#include "multiplier_norms.hpp"

namespace lcsim {

struct DiagnosticsRow {
  double t = 0.0;
  double Y_d13 = 0.0;
  double Y_hess_d13 = 0.0;
  double Y_omega = 0.0;
  std::array<double, 4> X_d13{};
  std::array<double, 4> X_hess{};
  std::array<double, 4> X_omega{};
  double E_t = 0.0;
  double sup_grad_n = 0.0;
  double max_div_u = 0.0;
  double min_abs_n = 0.0;
  double remap_loss = 0.0;
  Verdict verdict = Verdict::healthy;
};

std::string diagnostics_header();
std::string format_row(const DiagnosticsRow& r);

// Everything the diagnostics depend on besides the state itself.
struct MonitorState {
  XNormAccumulator::State d13, hess, omega;
  long diag_rows = 0;
  double peak_grad_n = 0.0;
  double t_of_peak = 0.0;
  double peak_Y_d13 = 0.0;
  double peak_E = 0.0;
  double last_E = 0.0;
  bool e_le_2K = true;
  bool x_monotone = true;
  double max_sphere_deviation = 0.0;  // before renormalization, over all steps
  double total_remap_loss = 0.0;
  Verdict worst = Verdict::healthy;
};

FlowState build_initial_state(const SimConfig& cfg);

class Simulation {
 public:
  using RowSink = std::function<void(const DiagnosticsRow&)>;
  using CheckpointSink = std::function<void(const Simulation&)>;

  explicit Simulation(const SimConfig& cfg);
  Simulation(const SimConfig& cfg, FlowState state, long step, const MonitorState& snapshot,
             double initial_grad_n, double K);

  // Integrates to t_end or until blow-up. Rows are emitted at t = 0, every
  // diag_every steps and at the final time; on_checkpoint runs every
  // checkpoint_every steps.
  void run(double t_end, const RowSink& on_row, const CheckpointSink& on_checkpoint = {});

  const SimConfig& config() const { return cfg_; }
  const FlowState& state() const { return state_; }
  long step_index() const { return step_; }
  bool blown_up() const { return blown_up_; }
  const std::string& reason() const { return reason_; }
  double initial_grad_n() const { return initial_grad_; }
  double K() const { return K_; }
  Verdict last_verdict() const { return last_verdict_; }
  // Monitor state as of the latest cadence row; what a checkpoint stores.
  const MonitorState& snapshot() const { return snapshot_; }
  const MonitorState& live() const { return live_; }

 private:
  DiagnosticsRow record_row();
  void init_accumulators(const MonitorState& m);

  SimConfig cfg_;
  FlowModel model_;
  FlowState state_;
  long step_ = 0;
  double initial_grad_ = 0.0;
  double K_ = 0.0;
  BlowUpMonitor monitor_;
  XNormAccumulator acc_d13_, acc_hess_, acc_omega_;
  MonitorState live_, snapshot_;
  double pending_remap_loss_ = 0.0;
  bool blown_up_ = false;
  std::string reason_;
  Verdict last_verdict_ = Verdict::healthy;
};

struct RunSummary {
  std::string out_dir;
  std::string verdict;        // final assessment
  std::string worst_verdict;  // worst over all steps and rows
  std::string reason;
  double t_final = 0.0;
  double t_final_original = 0.0;  // t / A
  long steps = 0;
  double initial_grad_n = 0.0;
  double peak_grad_n = 0.0;
  double t_of_peak = 0.0;
  double peak_Y_d13 = 0.0;
  double E_final = 0.0;
  double peak_E = 0.0;
  double K = 0.0;
  bool e_le_2K_throughout = true;
  bool x_terms_monotone = true;
  double max_sphere_deviation = 0.0;
  double total_remap_loss = 0.0;
  bool blown_up = false;
  std::vector<DiagnosticsRow> rows;  // rows produced by this invocation
};

// Writes config.txt, diagnostics.csv, checkpoint.bin (+ .json sidecar) and
// summary.json into out_dir.
RunSummary run_simulation(const SimConfig& cfg, const std::string& out_dir);

// Continues the run that wrote checkpoint_path up to t_end, in the same
// directory. Diagnostics rows past the checkpoint are discarded first.
RunSummary resume_simulation(const std::string& checkpoint_path, double t_end);

void write_checkpoint_with_sidecar(const Simulation& sim, const std::string& path);

}  // namespace lcsim
