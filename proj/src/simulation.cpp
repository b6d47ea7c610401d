#include "simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "checkpoint.hpp"
#include "error.hpp"
#include "initial_data.hpp"
#include "json.hpp"

namespace lcsim {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int on_grid_index(double value, double spacing, const char* what) {
  const double r = value / spacing;
  const double j = std::round(r);
  if (std::abs(r - j) > 1e-9) throw ValidationError(std::string(what) + " is not on the grid");
  return static_cast<int>(j);
}

void set_real_mode(SpectralField& f, int j, int i, double amplitude) {
  const Grid& g = f.grid();
  if (std::abs(j) > g.nx / 2 - 1 || std::abs(i) > g.ny / 2 - 1)
    throw ValidationError("single_mode: wavenumber outside the band");
  if (j == 0 && i == 0) {
    f(0, 0) += amplitude;
    return;
  }
  f(g.row_of(j), g.col_of(i)) += 0.5 * amplitude;
  f(g.row_of(-j), g.col_of(-i)) += 0.5 * amplitude;
}

SpectralField random_field(const Grid& g, std::mt19937_64& rng, double l2) {
  SpectralField f(g);
  const auto uniform = [&rng] { return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0; };
  const int jm = g.nx / 8, im = g.ny / 8;
  for (int j = 0; j <= jm; ++j)
    for (int i = -im; i <= im; ++i) {
      if (j == 0 && i <= 0) continue;
      const cplx c{uniform(), uniform()};
      f(g.row_of(j), g.col_of(i)) = c;
      f(g.row_of(-j), g.col_of(-i)) = std::conj(c);
    }
  const double n = std::sqrt(f.l2_norm_sq());
  if (n > 0.0) f *= l2 / n;
  return f;
}

double compute_K(const SimConfig& cfg, const FlowState& s) {
  const double H = y_norm(std::span<const SpectralField>(s.d), cfg.norms, weight_hess_dx13());
  const double W = y_norm(s.omega, cfg.norms);
  return cfg.C_cal * (H + W + 1.0);
}

ModelOptions model_options(const SimConfig& cfg) {
  ModelOptions o;
  o.nonlinear = cfg.run.nonlinear;
  o.couple_fluid = cfg.run.couple_fluid;
  o.remap_loss_max = cfg.run.remap_loss_max;
  return o;
}

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double from_num(const json& j) { return j.is_null() ? kNaN : j.get<double>(); }

json acc_to_json(const XNormAccumulator::State& s) {
  json j;
  j["terms"] = json::array();
  for (double v : s.terms) j["terms"].push_back(num(v));
  j["last_integrand"] = json::array();
  for (double v : s.last_integrand) j["last_integrand"].push_back(num(v));
  j["last_t"] = s.last_t;
  j["samples"] = s.samples;
  return j;
}

XNormAccumulator::State acc_from_json(const json& j) {
  XNormAccumulator::State s;
  for (std::size_t i = 0; i < 4; ++i) s.terms[i] = from_num(j.at("terms").at(i));
  for (std::size_t i = 0; i < 3; ++i) s.last_integrand[i] = from_num(j.at("last_integrand").at(i));
  s.last_t = j.at("last_t").get<double>();
  s.samples = j.at("samples").get<long>();
  return s;
}

json monitor_to_json(const MonitorState& m) {
  json j;
  j["acc_d13"] = acc_to_json(m.d13);
  j["acc_hess"] = acc_to_json(m.hess);
  j["acc_omega"] = acc_to_json(m.omega);
  j["diag_rows"] = m.diag_rows;
  j["peak_grad_n"] = num(m.peak_grad_n);
  j["t_of_peak"] = m.t_of_peak;
  j["peak_Y_d13"] = num(m.peak_Y_d13);
  j["peak_E"] = num(m.peak_E);
  j["last_E"] = num(m.last_E);
  j["e_le_2K"] = m.e_le_2K;
  j["x_monotone"] = m.x_monotone;
  j["max_sphere_deviation"] = num(m.max_sphere_deviation);
  j["total_remap_loss"] = num(m.total_remap_loss);
  j["worst"] = static_cast<int>(m.worst);
  return j;
}

MonitorState monitor_from_json(const json& j) {
  MonitorState m;
  m.d13 = acc_from_json(j.at("acc_d13"));
  m.hess = acc_from_json(j.at("acc_hess"));
  m.omega = acc_from_json(j.at("acc_omega"));
  m.diag_rows = j.at("diag_rows").get<long>();
  m.peak_grad_n = from_num(j.at("peak_grad_n"));
  m.t_of_peak = j.at("t_of_peak").get<double>();
  m.peak_Y_d13 = from_num(j.at("peak_Y_d13"));
  m.peak_E = from_num(j.at("peak_E"));
  m.last_E = from_num(j.at("last_E"));
  m.e_le_2K = j.at("e_le_2K").get<bool>();
  m.x_monotone = j.at("x_monotone").get<bool>();
  m.max_sphere_deviation = from_num(j.at("max_sphere_deviation"));
  m.total_remap_loss = from_num(j.at("total_remap_loss"));
  m.worst = static_cast<Verdict>(j.at("worst").get<int>());
  return m;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::trunc);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("short write on " + p.string());
}

RunSummary summarize(const Simulation& sim, const std::string& out_dir,
                     std::vector<DiagnosticsRow> rows) {
  RunSummary s;
  const MonitorState& m = sim.live();
  s.out_dir = out_dir;
  s.blown_up = sim.blown_up();
  s.verdict = verdict_name(sim.blown_up() ? Verdict::blown_up : sim.last_verdict());
  s.worst_verdict = verdict_name(m.worst);
  s.reason = sim.reason();
  s.t_final = sim.state().t;
  s.t_final_original = sim.state().t / sim.config().phys.A;
  s.steps = sim.step_index();
  s.initial_grad_n = sim.initial_grad_n();
  s.peak_grad_n = m.peak_grad_n;
  s.t_of_peak = m.t_of_peak;
  s.peak_Y_d13 = m.peak_Y_d13;
  s.E_final = m.last_E;
  s.peak_E = m.peak_E;
  s.K = sim.K();
  s.e_le_2K_throughout = m.e_le_2K;
  s.x_terms_monotone = m.x_monotone;
  s.max_sphere_deviation = m.max_sphere_deviation;
  s.total_remap_loss = m.total_remap_loss;
  s.rows = std::move(rows);
  return s;
}

void write_summary(const RunSummary& s, const fs::path& p) {
  json j;
  j["verdict"] = s.verdict;
  j["worst_verdict"] = s.worst_verdict;
  j["reason"] = s.reason;
  j["t_final"] = s.t_final;
  j["t_final_original"] = s.t_final_original;
  j["steps"] = s.steps;
  j["initial_grad_n"] = num(s.initial_grad_n);
  j["peak_grad_n"] = num(s.peak_grad_n);
  j["t_of_peak"] = s.t_of_peak;
  j["peak_Y_d13"] = num(s.peak_Y_d13);
  j["E_final"] = num(s.E_final);
  j["peak_E"] = num(s.peak_E);
  j["K"] = num(s.K);
  j["E_le_2K_throughout"] = s.e_le_2K_throughout;
  j["x_terms_monotone"] = s.x_terms_monotone;
  j["max_sphere_deviation_before_renorm"] = num(s.max_sphere_deviation);
  j["total_remap_loss"] = num(s.total_remap_loss);
  write_text(p, j.dump(2) + "\n");
}

}  // namespace

std::string diagnostics_header() {
  std::string h = "t,Y_d13,Y_hess_d13,Y_omega";
  for (const char* f : {"d13", "hess", "omega"})
    for (const char* term : {"sup", "grad", "dx13", "damp"}) h += std::string(",X_") + f + "_" + term;
  h += ",E_t,sup_grad_n,max_div_u,min_abs_n,remap_loss,verdict";
  return h;
}

std::string format_row(const DiagnosticsRow& r) {
  std::string s = fmt(r.t) + "," + fmt(r.Y_d13) + "," + fmt(r.Y_hess_d13) + "," + fmt(r.Y_omega);
  for (const auto* x : {&r.X_d13, &r.X_hess, &r.X_omega})
    for (double v : *x) s += "," + fmt(v);
  s += "," + fmt(r.E_t) + "," + fmt(r.sup_grad_n) + "," + fmt(r.max_div_u) + "," +
       fmt(r.min_abs_n) + "," + fmt(r.remap_loss) + "," + verdict_name(r.verdict);
  return s;
}

FlowState build_initial_state(const SimConfig& cfg) {
  cfg.validate();
  const Grid& g = cfg.grid;
  FlowState s = zero_state(g);
  switch (cfg.init.kind) {
    case InitKind::director_family: {
      const SpectralField scalar = make_family_scalar(cfg.init.family, g);
      if (cfg.run.nonlinear) {
        s.d = lift_to_sphere(scalar);
      } else {
        s.d[0] = scalar;
      }
      break;
    }
    case InitKind::file:
      s = load_checkpoint(cfg.init.path, g);
      s.t = 0.0;
      break;
    case InitKind::single_mode: {
      const int j = on_grid_index(cfg.init.k, g.dk(), "init.k");
      const int i = on_grid_index(cfg.init.xi, g.dxi(), "init.xi");
      SpectralField* f = cfg.init.field == "omega" ? &s.omega
                         : cfg.init.field == "d1"  ? &s.d[0]
                         : cfg.init.field == "d2"  ? &s.d[1]
                                                   : &s.d[2];
      set_real_mode(*f, j, i, cfg.init.amplitude);
      break;
    }
    case InitKind::random: {
      std::mt19937_64 rng(cfg.run.seed);
      s.omega = random_field(g, rng, cfg.init.amplitude);
      const SpectralField scalar = random_field(g, rng, cfg.init.amplitude);
      if (cfg.run.nonlinear)
        s.d = lift_to_sphere(scalar);
      else
        s.d[0] = scalar;
      break;
    }
  }
  return s;
}

Simulation::Simulation(const SimConfig& cfg)
    : Simulation(cfg, build_initial_state(cfg), 0, MonitorState{}, kNaN, kNaN) {}

Simulation::Simulation(const SimConfig& cfg, FlowState state, long step,
                       const MonitorState& snapshot, double initial_grad_n, double K)
    : cfg_(cfg),
      model_(cfg.grid, cfg.phys, model_options(cfg)),
      state_(std::move(state)),
      step_(step),
      initial_grad_(std::isnan(initial_grad_n) ? max_grad_n(state_.d) : initial_grad_n),
      K_(std::isnan(K) ? compute_K(cfg, state_) : K),
      monitor_(initial_grad_, cfg.run.blowup_factor),
      acc_d13_(cfg.norms, cfg.phys.A, weight_dx13()),
      acc_hess_(cfg.norms, cfg.phys.A, weight_hess_dx13()),
      acc_omega_(cfg.norms, cfg.phys.A),
      live_(snapshot),
      snapshot_(snapshot) {
  cfg_.validate();
  if (!(state_.omega.grid() == cfg.grid)) throw ValidationError("Simulation: state grid mismatch");
  acc_d13_.restore(snapshot.d13);
  acc_hess_.restore(snapshot.hess);
  acc_omega_.restore(snapshot.omega);
}

DiagnosticsRow Simulation::record_row() {
  DiagnosticsRow r;
  r.t = state_.t;
  const bool bad = state_.has_non_finite();
  const std::span<const SpectralField> d(state_.d);
  const NormParams& np = cfg_.norms;
  r.Y_d13 = y_norm(d, np, weight_dx13());
  r.Y_hess_d13 = y_norm(d, np, weight_hess_dx13());
  r.Y_omega = y_norm(state_.omega, np);

  if (!bad) {
    const auto update = [&](XNormAccumulator& acc, std::span<const SpectralField> f) {
      const auto before = acc.terms();
      acc.update(f, state_.t);
      for (int i = 0; i < 4; ++i)
        if (acc.terms()[i] < before[i]) live_.x_monotone = false;
    };
    update(acc_d13_, d);
    update(acc_hess_, d);
    update(acc_omega_, std::span<const SpectralField>(&state_.omega, 1));
  }
  r.X_d13 = acc_d13_.terms();
  r.X_hess = acc_hess_.terms();
  r.X_omega = acc_omega_.terms();
  r.E_t = bad ? kNaN
              : energy_functional(acc_d13_, acc_hess_, acc_omega_, np, cfg_.phys.A).total;

  r.sup_grad_n = max_grad_n(state_.d);
  r.max_div_u = spectral_divergence(velocity_from_vorticity(state_.omega));
  r.min_abs_n = min_abs_n(state_.d);
  r.remap_loss = pending_remap_loss_;
  pending_remap_loss_ = 0.0;
  r.verdict = blown_up_ ? Verdict::blown_up : monitor_.assess(r.sup_grad_n, bad);

  last_verdict_ = r.verdict;
  live_.worst = std::max(live_.worst, r.verdict);
  if (r.sup_grad_n > live_.peak_grad_n) {
    live_.peak_grad_n = r.sup_grad_n;
    live_.t_of_peak = r.t;
  }
  live_.peak_Y_d13 = std::max(live_.peak_Y_d13, r.Y_d13);
  live_.peak_E = std::max(live_.peak_E, r.E_t);
  live_.last_E = r.E_t;
  if (!(r.E_t <= 2.0 * K_)) live_.e_le_2K = false;
  live_.d13 = acc_d13_.state();
  live_.hess = acc_hess_.state();
  live_.omega = acc_omega_.state();
  ++live_.diag_rows;
  return r;
}

void Simulation::run(double t_end, const RowSink& on_row, const CheckpointSink& on_checkpoint) {
  if (!(t_end >= state_.t))
    throw ValidationError("t_end " + fmt(t_end) + " precedes the current time " + fmt(state_.t));
  const double dt = cfg_.time.dt;
  if (dt > model_.cfl_limit(state_))
    throw ValidationError("time.dt = " + fmt(dt) + " exceeds the CFL limit " +
                          fmt(model_.cfl_limit(state_)) + " of the initial state");

  const auto emit = [&](bool cadence) {
    const DiagnosticsRow row = record_row();
    if (on_row) on_row(row);
    if (cadence) snapshot_ = live_;
  };

  if (step_ == 0 && live_.diag_rows == 0) emit(true);

  const double tol = 1e-12 * std::max(1.0, std::abs(t_end));
  while (!blown_up_ && state_.t < t_end - tol) {
    double t_next = state_.t == static_cast<double>(step_) * dt
                        ? static_cast<double>(step_ + 1) * dt
                        : state_.t + dt;
    bool last = false;
    if (t_next >= t_end - tol) {
      t_next = t_end;
      last = true;
    }
    try {
      StepResult res = model_.step(state_, t_next - state_.t);
      state_ = std::move(res.state);
      state_.t = t_next;
      pending_remap_loss_ += res.report.remap_loss;
      live_.total_remap_loss += res.report.remap_loss;
      live_.max_sphere_deviation =
          std::max(live_.max_sphere_deviation, res.report.sphere_deviation_before);
      ++step_;
      const Verdict v = monitor_.assess(state_);
      live_.worst = std::max(live_.worst, v);
      if (v == Verdict::blown_up) {
        blown_up_ = true;
        reason_ = state_.has_non_finite() ? "non-finite values in the state"
                                          : "director gradient exceeded the blow-up threshold";
      }
    } catch (const NumericalError& e) {
      blown_up_ = true;
      reason_ = e.what();
    } catch (const ValidationError& e) {
      // The CFL limit was checked at the start, so a violation here means the
      // velocity grew past what the configured step can resolve.
      blown_up_ = true;
      reason_ = e.what();
    }
    if (blown_up_) live_.worst = Verdict::blown_up;

    const bool cadence = !blown_up_ && step_ % cfg_.time.diag_every == 0;
    if (cadence || last || blown_up_) emit(cadence);
    if (!blown_up_ && cfg_.time.checkpoint_every > 0 && step_ % cfg_.time.checkpoint_every == 0 &&
        on_checkpoint)
      on_checkpoint(*this);
  }
}

void write_checkpoint_with_sidecar(const Simulation& sim, const std::string& path) {
  save_checkpoint(sim.state(), path);
  json j;
  j["config"] = sim.config().serialize();
  j["step"] = sim.step_index();
  j["initial_grad_n"] = sim.initial_grad_n();
  j["K"] = sim.K();
  j["monitor"] = monitor_to_json(sim.snapshot());
  write_text(path + ".json", j.dump(2) + "\n");
}

RunSummary run_simulation(const SimConfig& cfg, const std::string& out_dir) {
  cfg.validate();
  const fs::path out(out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create " + out.string() + ": " + ec.message());
  write_text(out / "config.txt", cfg.serialize());

  std::ofstream csv(out / "diagnostics.csv", std::ios::trunc);
  if (!csv) throw IoError("cannot write " + (out / "diagnostics.csv").string());
  csv << diagnostics_header() << '\n';

  Simulation sim(cfg);
  std::vector<DiagnosticsRow> rows;
  const std::string ckpt = (out / "checkpoint.bin").string();
  sim.run(
      cfg.time.t_end,
      [&](const DiagnosticsRow& r) {
        csv << format_row(r) << '\n';
        rows.push_back(r);
      },
      [&](const Simulation& s) { write_checkpoint_with_sidecar(s, ckpt); });
  csv.close();
  if (!csv) throw IoError("short write on diagnostics.csv");
  write_checkpoint_with_sidecar(sim, ckpt);
  RunSummary s = summarize(sim, out_dir, std::move(rows));
  write_summary(s, out / "summary.json");
  return s;
}

RunSummary resume_simulation(const std::string& checkpoint_path, double t_end) {
  std::ifstream side(checkpoint_path + ".json");
  if (!side) throw IoError("cannot read checkpoint metadata " + checkpoint_path + ".json");
  json meta;
  try {
    meta = json::parse(side);
  } catch (const json::exception& e) {
    throw FormatError("checkpoint metadata is not valid JSON: " + std::string(e.what()));
  }

  SimConfig cfg;
  long step = 0;
  MonitorState snap;
  double g0 = 0.0, K = 0.0;
  try {
    cfg = SimConfig::parse(meta.at("config").get<std::string>());
    step = meta.at("step").get<long>();
    g0 = meta.at("initial_grad_n").get<double>();
    K = meta.at("K").get<double>();
    snap = monitor_from_json(meta.at("monitor"));
  } catch (const json::exception& e) {
    throw FormatError("checkpoint metadata is incomplete: " + std::string(e.what()));
  }
  cfg.time.t_end = t_end;
  cfg.validate();
  FlowState state = load_checkpoint(checkpoint_path, cfg.grid);

  const fs::path dir = fs::path(checkpoint_path).parent_path();
  const fs::path csv_path = dir / "diagnostics.csv";
  std::vector<std::string> lines;
  {
    std::ifstream in(csv_path);
    if (!in) throw IoError("cannot read " + csv_path.string());
    std::string line;
    while (lines.size() < static_cast<std::size_t>(snap.diag_rows) + 1 && std::getline(in, line))
      lines.push_back(line);
  }
  if (lines.size() != static_cast<std::size_t>(snap.diag_rows) + 1 ||
      lines.front() != diagnostics_header())
    throw FormatError(csv_path.string() + " does not match the checkpoint");

  std::ofstream csv(csv_path, std::ios::trunc);
  if (!csv) throw IoError("cannot write " + csv_path.string());
  for (const auto& l : lines) csv << l << '\n';

  Simulation sim(cfg, std::move(state), step, snap, g0, K);
  std::vector<DiagnosticsRow> rows;
  sim.run(
      t_end,
      [&](const DiagnosticsRow& r) {
        csv << format_row(r) << '\n';
        rows.push_back(r);
      },
      [&](const Simulation& s) { write_checkpoint_with_sidecar(s, checkpoint_path); });
  csv.close();
  if (!csv) throw IoError("short write on " + csv_path.string());
  write_checkpoint_with_sidecar(sim, checkpoint_path);
  write_text(dir / "config.txt", cfg.serialize());
  RunSummary s = summarize(sim, dir.string(), std::move(rows));
  write_summary(s, dir / "summary.json");
  return s;
}

}  // namespace lcsim
