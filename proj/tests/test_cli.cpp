// Runs the lcsim executable and checks exit codes and outputs.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int failures = 0;
fs::path scratch;

int run(const std::string& args) {
  const std::string cmd = std::string(LCSIM_CLI) + " " + args + " > " +
                          (scratch / "last_output.txt").string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void expect_code(const std::string& args, int want) {
  const int got = run(args);
  if (got != want) {
    std::fprintf(stderr, "lcsim %s: exit %d, expected %d\n", args.c_str(), got, want);
    ++failures;
  }
}

void expect(bool cond, const char* what) {
  if (!cond) {
    std::fprintf(stderr, "expected: %s\n", what);
    ++failures;
  }
}

std::string write_config(const std::string& name, const std::string& text) {
  const fs::path p = scratch / name;
  std::ofstream(p) << text;
  return p.string();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: test_cli <scratch dir>\n");
    return 2;
  }
  scratch = argv[1];
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  const std::string s = scratch.string();

  const std::string good = write_config(
      "good.cfg",
      "grid.nx = 16\ngrid.ny = 16\nphys.A = 10\ninit.kind = random\ninit.amplitude = 0.05\n"
      "run.seed = 2\ntime.dt = 0.02\ntime.t_end = 0.2\ntime.diag_every = 5\n");
  const std::string bad = write_config("bad.cfg", "grid.nx = 7\n");
  const std::string blowup = write_config(
      "blowup.cfg",
      "grid.nx = 16\ngrid.ny = 16\ngrid.lx = 2pi\ngrid.ly = 2pi\nphys.nu = 0.05\n"
      "init.kind = single_mode\ninit.k = 1\ninit.xi = -3.5\ninit.amplitude = 0.2\n"
      "run.nonlinear = false\nrun.remap_loss_max = 1e-12\ntime.dt = 0.01\ntime.t_end = 1.5\n");

  expect_code("", 2);
  expect_code("frobnicate", 2);
  expect_code("run --out " + s + "/x", 2);
  expect_code("run --config " + bad + " --out " + s + "/bad", 2);
  expect_code("run --config " + good + " --out " + s + "/good", 0);
  expect(fs::exists(scratch / "good" / "diagnostics.csv"), "run writes diagnostics.csv");
  expect(fs::exists(scratch / "good" / "summary.json"), "run writes summary.json");
  expect_code("run --config " + blowup + " --out " + s + "/blow", 3);
  expect(fs::exists(scratch / "blow" / "summary.json"), "blown-up run still writes its summary");

  expect_code("resume --checkpoint " + s + "/good/checkpoint.bin --t-end 0.3", 0);
  expect_code("resume --checkpoint " + s + "/good/checkpoint.bin --t-end 0.1", 2);
  expect_code("resume --checkpoint " + s + "/good/checkpoint.bin", 2);

  expect_code("sweep --config " + good + " --amplitudes 1,x --jobs 2 --out " + s + "/sw", 2);
  expect_code("sweep --config " + good + " --amplitudes 1,100 --jobs 0 --out " + s + "/sw", 2);
  expect_code("sweep --config " + good + " --amplitudes 1,100 --jobs 2 --out " + s + "/sw", 0);
  expect(fs::exists(scratch / "sw" / "phase_table.csv"), "sweep writes phase_table.csv");

  expect_code("data-report", 0);
  expect_code("data-report --lambda 0.2 --n 16 --theta 1.2", 0);
  expect_code("data-report --lambda 2", 2);
  expect_code("data-report --eps 0.9", 2);

  expect_code("linear-verify --out " + s + "/lv", 0);
  expect(fs::exists(scratch / "lv" / "fit_report.csv"), "linear-verify writes fit_report.csv");

  if (failures) {
    std::fprintf(stderr, "%d CLI expectation(s) failed\n", failures);
    return 1;
  }
  std::printf("CLI checks passed\n");
  return 0;
}
