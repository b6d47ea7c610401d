#include "lcsim/lcsim.h"

#include <cstring>
#include <memory>
#include <sstream>
#include <string>

#include "checkpoint.hpp"
#include "config.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "initial_data.hpp"
#include "simulation.hpp"

struct lcsim_config {
  lcsim::SimConfig cfg;
};

struct lcsim_sim {
  std::unique_ptr<lcsim::Simulation> sim;
  lcsim::DiagnosticsRow last;
};

namespace {

thread_local std::string g_last_error;

template <class F>
lcsim_status guard(F&& f) {
  g_last_error.clear();
  try {
    return f();
  } catch (const lcsim::ValidationError& e) {
    g_last_error = e.what();
    return LCSIM_ERR_VALIDATION;
  } catch (const lcsim::IoError& e) {
    g_last_error = e.what();
    return LCSIM_ERR_IO;
  } catch (const lcsim::FormatError& e) {
    g_last_error = e.what();
    return LCSIM_ERR_FORMAT;
  } catch (const lcsim::NumericalError& e) {
    g_last_error = e.what();
    return LCSIM_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LCSIM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return LCSIM_ERR_INTERNAL;
  }
}

lcsim_status null_arg(const char* what) {
  g_last_error = std::string("null argument: ") + what;
  return LCSIM_ERR_NULL_ARG;
}

lcsim_verdict to_c(lcsim::Verdict v) { return static_cast<lcsim_verdict>(static_cast<int>(v)); }

lcsim_verdict verdict_from_name(const std::string& s) {
  if (s == "blown_up") return LCSIM_BLOWN_UP;
  if (s == "warning") return LCSIM_WARNING;
  return LCSIM_HEALTHY;
}

void fill(const lcsim::RunSummary& s, lcsim_run_summary* out) {
  if (!out) return;
  out->verdict = verdict_from_name(s.verdict);
  out->worst_verdict = verdict_from_name(s.worst_verdict);
  out->steps = s.steps;
  out->t_final = s.t_final;
  out->t_final_original = s.t_final_original;
  out->initial_grad_n = s.initial_grad_n;
  out->peak_grad_n = s.peak_grad_n;
  out->t_of_peak = s.t_of_peak;
  out->peak_Y_d13 = s.peak_Y_d13;
  out->E_final = s.E_final;
  out->K = s.K;
  out->e_le_2K_throughout = s.e_le_2K_throughout ? 1 : 0;
  out->x_terms_monotone = s.x_terms_monotone ? 1 : 0;
  out->max_sphere_deviation = s.max_sphere_deviation;
  out->total_remap_loss = s.total_remap_loss;
}

lcsim_status copy_out(const std::string& text, char* buf, size_t cap, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buf) return LCSIM_OK;
  if (cap < text.size() + 1) {
    g_last_error = "buffer too small";
    return LCSIM_ERR_BUFFER_TOO_SMALL;
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return LCSIM_OK;
}

}  // namespace

extern "C" {

const char* lcsim_version(void) { return "0.1.0"; }

const char* lcsim_last_error(void) { return g_last_error.c_str(); }

const char* lcsim_verdict_name(lcsim_verdict v) {
  return lcsim::verdict_name(static_cast<lcsim::Verdict>(static_cast<int>(v)));
}

lcsim_status lcsim_config_load(const char* path, lcsim_config** out) {
  if (!path) return null_arg("path");
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new lcsim_config{lcsim::SimConfig::load(path)};
    return LCSIM_OK;
  });
}

lcsim_status lcsim_config_parse(const char* text, lcsim_config** out) {
  if (!text) return null_arg("text");
  if (!out) return null_arg("out");
  return guard([&] {
    *out = new lcsim_config{lcsim::SimConfig::parse(text)};
    return LCSIM_OK;
  });
}

lcsim_status lcsim_config_set(lcsim_config* cfg, const char* key, const char* value) {
  if (!cfg) return null_arg("cfg");
  if (!key || !value) return null_arg("key/value");
  return guard([&] {
    std::istringstream in(cfg->cfg.serialize());
    std::string text, line;
    const std::string k = key;
    while (std::getline(in, line))
      if (line.compare(0, k.size() + 1, k + " ") != 0) text += line + "\n";
    text += k + " = " + value + "\n";
    cfg->cfg = lcsim::SimConfig::parse(text);
    return LCSIM_OK;
  });
}

lcsim_status lcsim_config_serialize(const lcsim_config* cfg, char* buf, size_t cap, size_t* needed) {
  if (!cfg) return null_arg("cfg");
  return guard([&] { return copy_out(cfg->cfg.serialize(), buf, cap, needed); });
}

void lcsim_config_free(lcsim_config* cfg) { delete cfg; }

lcsim_status lcsim_run(const lcsim_config* cfg, const char* out_dir, lcsim_run_summary* summary) {
  if (!cfg) return null_arg("cfg");
  if (!out_dir) return null_arg("out_dir");
  return guard([&] {
    const lcsim::RunSummary s = lcsim::run_simulation(cfg->cfg, out_dir);
    fill(s, summary);
    return s.blown_up ? LCSIM_BLOWUP : LCSIM_OK;
  });
}

lcsim_status lcsim_resume(const char* checkpoint_path, double t_end, lcsim_run_summary* summary) {
  if (!checkpoint_path) return null_arg("checkpoint_path");
  return guard([&] {
    const lcsim::RunSummary s = lcsim::resume_simulation(checkpoint_path, t_end);
    fill(s, summary);
    return s.blown_up ? LCSIM_BLOWUP : LCSIM_OK;
  });
}

lcsim_status lcsim_sweep(const lcsim_config* cfg, const double* amplitudes, size_t n_amplitudes,
                         const double* lambdas, size_t n_lambdas, int jobs, const char* out_dir) {
  if (!cfg) return null_arg("cfg");
  if (!amplitudes && n_amplitudes > 0) return null_arg("amplitudes");
  if (!lambdas && n_lambdas > 0) return null_arg("lambdas");
  if (!out_dir) return null_arg("out_dir");
  return guard([&] {
    const std::vector<double> as(amplitudes, amplitudes + n_amplitudes);
    const std::vector<double> ls = lambdas ? std::vector<double>(lambdas, lambdas + n_lambdas)
                                           : std::vector<double>{};
    lcsim::sweep_amplitude(cfg->cfg, as, ls, jobs, out_dir);
    return LCSIM_OK;
  });
}

lcsim_status lcsim_linear_verify(const char* out_dir, lcsim_linear_report* report) {
  if (!out_dir) return null_arg("out_dir");
  return guard([&] {
    const lcsim::LinearVerifyReport r = lcsim::linear_verify(out_dir);
    if (report) {
      report->exponent_k = r.dissipation.exponent_k;
      report->exponent_nu = r.dissipation.exponent_nu;
      report->prefactor_c = r.dissipation.c;
      report->damping_slope = r.damping.slope;
      report->solver_max_rel_error = r.solver.max_rel_error;
      report->solver_seconds = r.solver.seconds;
      report->dissipation_ok = r.dissipation_ok;
      report->damping_ok = r.damping_ok;
      report->solver_ok = r.solver_ok;
    }
    return LCSIM_OK;
  });
}

void lcsim_data_params_default(lcsim_data_params* p) {
  if (!p) return;
  const lcsim::NormParams np;
  const lcsim::InitialDataParams ip;
  p->theta = ip.theta;
  p->lambda = ip.lambda;
  p->N = ip.N;
  p->eps = np.eps;
  p->m = np.m;
  p->delta = np.delta;
  p->C_cal = 1.0;
}

lcsim_status lcsim_data_report(const lcsim_data_params* params, char* json_buf, size_t cap,
                               size_t* needed) {
  if (!params) return null_arg("params");
  return guard([&] {
    lcsim::NormParams np;
    np.eps = params->eps;
    np.m = params->m;
    np.delta = params->delta;
    np.corollary_regime = params->eps <= 1.0 / 3.0;
    np.validate();
    lcsim::InitialDataParams ip;
    ip.theta = params->theta;
    ip.lambda = params->lambda;
    ip.N = params->N;
    ip.validate(np);
    const lcsim::DataReport r = lcsim::family_report(ip, np, params->C_cal);
    return copy_out(lcsim::to_json(r, ip, np), json_buf, cap, needed);
  });
}

lcsim_status lcsim_sim_create(const lcsim_config* cfg, lcsim_sim** out) {
  if (!cfg) return null_arg("cfg");
  if (!out) return null_arg("out");
  return guard([&] {
    auto h = std::make_unique<lcsim_sim>();
    h->sim = std::make_unique<lcsim::Simulation>(cfg->cfg);
    h->sim->run(h->sim->state().t, [&](const lcsim::DiagnosticsRow& r) { h->last = r; });
    *out = h.release();
    return LCSIM_OK;
  });
}

lcsim_status lcsim_sim_advance(lcsim_sim* sim, double t_end) {
  if (!sim) return null_arg("sim");
  return guard([&] {
    if (!sim->sim->blown_up())
      sim->sim->run(t_end, [&](const lcsim::DiagnosticsRow& r) { sim->last = r; });
    return sim->sim->blown_up() ? LCSIM_BLOWUP : LCSIM_OK;
  });
}

lcsim_status lcsim_sim_time(const lcsim_sim* sim, double* t) {
  if (!sim) return null_arg("sim");
  if (!t) return null_arg("t");
  *t = sim->sim->state().t;
  return LCSIM_OK;
}

lcsim_status lcsim_sim_last_row(lcsim_sim* sim, lcsim_diag_row* row) {
  if (!sim) return null_arg("sim");
  if (!row) return null_arg("row");
  const lcsim::DiagnosticsRow& r = sim->last;
  row->t = r.t;
  row->Y_d13 = r.Y_d13;
  row->Y_hess_d13 = r.Y_hess_d13;
  row->Y_omega = r.Y_omega;
  for (int i = 0; i < 4; ++i) {
    row->X_d13[i] = r.X_d13[i];
    row->X_hess[i] = r.X_hess[i];
    row->X_omega[i] = r.X_omega[i];
  }
  row->E_t = r.E_t;
  row->sup_grad_n = r.sup_grad_n;
  row->max_div_u = r.max_div_u;
  row->min_abs_n = r.min_abs_n;
  row->remap_loss = r.remap_loss;
  row->verdict = to_c(r.verdict);
  return LCSIM_OK;
}

lcsim_status lcsim_sim_save_checkpoint(const lcsim_sim* sim, const char* path) {
  if (!sim) return null_arg("sim");
  if (!path) return null_arg("path");
  return guard([&] {
    lcsim::write_checkpoint_with_sidecar(*sim->sim, path);
    return LCSIM_OK;
  });
}

void lcsim_sim_free(lcsim_sim* sim) { delete sim; }

lcsim_status lcsim_checkpoint_info_read(const char* path, lcsim_checkpoint_info* info) {
  if (!path) return null_arg("path");
  if (!info) return null_arg("info");
  return guard([&] {
    const lcsim::CheckpointHeader h = lcsim::read_checkpoint_header(path);
    info->version = h.version;
    info->nx = h.nx;
    info->ny = h.ny;
    info->t = h.t;
    info->shear_time = h.shear_time;
    return LCSIM_OK;
  });
}

}  // extern "C"
