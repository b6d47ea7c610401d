// lcsim command line front end. Exit codes: 0 ok, 2 invalid input, 3 blow-up
// (run only), 1 anything else.

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lcsim/lcsim.h"

namespace {

int fail(lcsim_status s) {
  std::fprintf(stderr, "lcsim: %s\n", lcsim_last_error());
  return s == LCSIM_ERR_VALIDATION ? 2 : 1;
}

bool parse_list(const std::string& csv, std::vector<double>& out) {
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return !out.empty();
}

void print_summary(const lcsim_run_summary& s) {
  std::printf("verdict %s (worst %s) at t = %.6g (original time %.6g) after %ld steps\n",
              lcsim_verdict_name(s.verdict), lcsim_verdict_name(s.worst_verdict), s.t_final,
              s.t_final_original, s.steps);
  std::printf("peak |grad n| %.6g at t = %.6g, E = %.6g, K = %.6g, E <= 2K throughout: %s\n",
              s.peak_grad_n, s.t_of_peak, s.E_final, s.K, s.e_le_2K_throughout ? "yes" : "no");
}

struct ConfigHandle {
  lcsim_config* p = nullptr;
  ~ConfigHandle() { lcsim_config_free(p); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Couette flow liquid-crystal simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, amplitudes, lambdas, checkpoint;
  int jobs = 1;
  double t_end = 0.0;

  auto* run = app.add_subcommand("run", "Run one simulation");
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--out", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Sweep Couette amplitudes (and optionally lambda)");
  sweep->add_option("--config", config_path, "Configuration file")->required();
  sweep->add_option("--amplitudes", amplitudes, "Comma-separated A values")->required();
  sweep->add_option("--lambdas", lambdas, "Comma-separated lambda values");
  sweep->add_option("--jobs", jobs, "Parallel workers")->required();
  sweep->add_option("--out", out_dir, "Output directory")->required();

  auto* verify = app.add_subcommand("linear-verify", "Check the solver against Kelvin modes");
  verify->add_option("--out", out_dir, "Output directory")->required();

  lcsim_data_params dp;
  lcsim_data_params_default(&dp);
  auto* report = app.add_subcommand("data-report", "Norms of the initial-data family as JSON");
  report->add_option("--theta", dp.theta, "Amplitude exponent")->capture_default_str();
  report->add_option("--lambda", dp.lambda, "Horizontal scale")->capture_default_str();
  report->add_option("--n", dp.N, "Vertical frequency")->capture_default_str();
  report->add_option("--eps", dp.eps, "Low-frequency exponent")->capture_default_str();
  report->add_option("--m", dp.m, "High-frequency exponent")->capture_default_str();
  report->add_option("--delta", dp.delta, "Smallness exponent")->capture_default_str();
  report->add_option("--c-cal", dp.C_cal, "Calibration constant")->capture_default_str();

  auto* resume = app.add_subcommand("resume", "Continue a run from its checkpoint");
  resume->add_option("--checkpoint", checkpoint, "checkpoint.bin of a previous run")->required();
  resume->add_option("--t-end", t_end, "New final time")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*run) {
    ConfigHandle cfg;
    if (lcsim_status s = lcsim_config_load(config_path.c_str(), &cfg.p); s != LCSIM_OK)
      return fail(s);
    lcsim_run_summary sum{};
    const lcsim_status s = lcsim_run(cfg.p, out_dir.c_str(), &sum);
    if (s != LCSIM_OK && s != LCSIM_BLOWUP) return fail(s);
    print_summary(sum);
    return s == LCSIM_BLOWUP ? 3 : 0;
  }

  if (*sweep) {
    std::vector<double> as, ls;
    if (!parse_list(amplitudes, as)) {
      std::fprintf(stderr, "lcsim: --amplitudes must be a comma-separated list of numbers\n");
      return 2;
    }
    if (!lambdas.empty() && !parse_list(lambdas, ls)) {
      std::fprintf(stderr, "lcsim: --lambdas must be a comma-separated list of numbers\n");
      return 2;
    }
    ConfigHandle cfg;
    if (lcsim_status s = lcsim_config_load(config_path.c_str(), &cfg.p); s != LCSIM_OK)
      return fail(s);
    const lcsim_status s = lcsim_sweep(cfg.p, as.data(), as.size(), ls.empty() ? nullptr : ls.data(),
                                       ls.size(), jobs, out_dir.c_str());
    if (s != LCSIM_OK) return fail(s);
    std::printf("wrote %s/phase_table.csv (%zu cells)\n", out_dir.c_str(),
                as.size() * (ls.empty() ? 1 : ls.size()));
    return 0;
  }

  if (*verify) {
    lcsim_linear_report r{};
    const lcsim_status s = lcsim_linear_verify(out_dir.c_str(), &r);
    if (s != LCSIM_OK) return fail(s);
    std::printf("enhanced dissipation: k-exponent %.4f, nu-exponent %.4f (%s)\n", r.exponent_k,
                r.exponent_nu, r.dissipation_ok ? "ok" : "out of range");
    std::printf("inviscid damping slope %.4f (%s)\n", r.damping_slope,
                r.damping_ok ? "ok" : "out of range");
    std::printf("linear solver vs Kelvin: max relative error %.3g (%s)\n", r.solver_max_rel_error,
                r.solver_ok ? "ok" : "too large");
    return 0;
  }

  if (*report) {
    size_t needed = 0;
    lcsim_status s = lcsim_data_report(&dp, nullptr, 0, &needed);
    if (s != LCSIM_OK) return fail(s);
    std::string buf(needed, '\0');
    s = lcsim_data_report(&dp, buf.data(), buf.size(), &needed);
    if (s != LCSIM_OK) return fail(s);
    std::printf("%s\n", buf.c_str());
    return 0;
  }

  if (*resume) {
    lcsim_run_summary sum{};
    const lcsim_status s = lcsim_resume(checkpoint.c_str(), t_end, &sum);
    if (s != LCSIM_OK && s != LCSIM_BLOWUP) return fail(s);
    print_summary(sum);
    return 0;
  }
  return 1;
}
