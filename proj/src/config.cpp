#include "config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "error.hpp"

namespace lcsim {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_number(const std::string& key, std::string v) {
  double factor = 1.0;
  if (v.size() >= 2 && v.compare(v.size() - 2, 2, "pi") == 0) {
    factor = kPi;
    v = trim(v.substr(0, v.size() - 2));
    if (!v.empty() && v.back() == '*') v = trim(v.substr(0, v.size() - 1));
    if (v.empty()) return factor;
  }
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ValidationError("config: " + key + " = '" + v + "' is not a number");
  }
  if (used != v.size()) throw ValidationError("config: " + key + " = '" + v + "' is not a number");
  return x * factor;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_number(key, v);
  if (x != std::floor(x) || std::abs(x) > 2e9)
    throw ValidationError("config: " + key + " must be an integer");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ValidationError("config: " + key + " must be true or false");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

const char* init_kind_name(InitKind k) {
  switch (k) {
    case InitKind::director_family: return "director_family";
    case InitKind::file: return "file";
    case InitKind::single_mode: return "single_mode";
    case InitKind::random: return "random";
  }
  return "unknown";
}

SimConfig SimConfig::parse(const std::string& text) {
  SimConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string v = trim(line.substr(eq + 1));
    if (seen.count(key))
      throw ValidationError("config line " + std::to_string(lineno) + ": duplicate key " + key);
    seen[key] = lineno;

    if (key == "grid.nx") c.grid.nx = to_int(key, v);
    else if (key == "grid.ny") c.grid.ny = to_int(key, v);
    else if (key == "grid.lx") c.grid.lx = to_number(key, v);
    else if (key == "grid.ly") c.grid.ly = to_number(key, v);
    else if (key == "grid.dealias_pad") c.grid.dealias_pad = to_int(key, v);
    else if (key == "phys.A") c.phys.A = to_number(key, v);
    else if (key == "phys.nu") c.phys.nu = to_number(key, v);
    else if (key == "phys.lam") c.phys.lam = to_number(key, v);
    else if (key == "phys.gam") c.phys.gam = to_number(key, v);
    else if (key == "norms.a") c.norms.a = to_number(key, v);
    else if (key == "norms.m") c.norms.m = to_number(key, v);
    else if (key == "norms.eps") c.norms.eps = to_number(key, v);
    else if (key == "norms.delta") c.norms.delta = to_number(key, v);
    else if (key == "norms.corollary") c.norms.corollary_regime = to_bool(key, v);
    else if (key == "norms.C_cal") c.C_cal = to_number(key, v);
    else if (key == "time.dt") c.time.dt = to_number(key, v);
    else if (key == "time.t_end") c.time.t_end = to_number(key, v);
    else if (key == "time.diag_every") c.time.diag_every = to_int(key, v);
    else if (key == "time.checkpoint_every") c.time.checkpoint_every = to_int(key, v);
    else if (key == "init.kind") {
      if (v == "director_family") c.init.kind = InitKind::director_family;
      else if (v == "file") c.init.kind = InitKind::file;
      else if (v == "single_mode") c.init.kind = InitKind::single_mode;
      else if (v == "random") c.init.kind = InitKind::random;
      else throw ValidationError("config: unknown init.kind '" + v + "'");
    } else if (key == "init.lambda") c.init.family.lambda = to_number(key, v);
    else if (key == "init.N") c.init.family.N = to_number(key, v);
    else if (key == "init.theta") c.init.family.theta = to_number(key, v);
    else if (key == "init.path") c.init.path = v;
    else if (key == "init.field") c.init.field = v;
    else if (key == "init.k") c.init.k = to_number(key, v);
    else if (key == "init.xi") c.init.xi = to_number(key, v);
    else if (key == "init.amplitude") c.init.amplitude = to_number(key, v);
    else if (key == "run.nonlinear") c.run.nonlinear = to_bool(key, v);
    else if (key == "run.couple_fluid") c.run.couple_fluid = to_bool(key, v);
    else if (key == "run.seed") {
      const double s = to_number(key, v);
      if (s < 0 || s != std::floor(s)) throw ValidationError("config: run.seed must be a non-negative integer");
      c.run.seed = static_cast<std::uint64_t>(s);
    } else if (key == "run.blowup_factor") c.run.blowup_factor = to_number(key, v);
    else if (key == "run.remap_loss_max") c.run.remap_loss_max = to_number(key, v);
    else throw ValidationError("config line " + std::to_string(lineno) + ": unknown key " + key);
  }
  c.validate();
  return c;
}

SimConfig SimConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string SimConfig::serialize() const {
  std::ostringstream o;
  o << "grid.nx = " << grid.nx << "\n"
    << "grid.ny = " << grid.ny << "\n"
    << "grid.lx = " << fmt(grid.lx) << "\n"
    << "grid.ly = " << fmt(grid.ly) << "\n"
    << "grid.dealias_pad = " << grid.dealias_pad << "\n"
    << "phys.A = " << fmt(phys.A) << "\n"
    << "phys.nu = " << fmt(phys.nu) << "\n"
    << "phys.lam = " << fmt(phys.lam) << "\n"
    << "phys.gam = " << fmt(phys.gam) << "\n"
    << "norms.a = " << fmt(norms.a) << "\n"
    << "norms.m = " << fmt(norms.m) << "\n"
    << "norms.eps = " << fmt(norms.eps) << "\n"
    << "norms.delta = " << fmt(norms.delta) << "\n"
    << "norms.corollary = " << (norms.corollary_regime ? "true" : "false") << "\n"
    << "norms.C_cal = " << fmt(C_cal) << "\n"
    << "time.dt = " << fmt(time.dt) << "\n"
    << "time.t_end = " << fmt(time.t_end) << "\n"
    << "time.diag_every = " << time.diag_every << "\n"
    << "time.checkpoint_every = " << time.checkpoint_every << "\n"
    << "init.kind = " << init_kind_name(init.kind) << "\n"
    << "init.lambda = " << fmt(init.family.lambda) << "\n"
    << "init.N = " << fmt(init.family.N) << "\n"
    << "init.theta = " << fmt(init.family.theta) << "\n";
  if (!init.path.empty()) o << "init.path = " << init.path << "\n";
  o << "init.field = " << init.field << "\n"
    << "init.k = " << fmt(init.k) << "\n"
    << "init.xi = " << fmt(init.xi) << "\n"
    << "init.amplitude = " << fmt(init.amplitude) << "\n"
    << "run.nonlinear = " << (run.nonlinear ? "true" : "false") << "\n"
    << "run.couple_fluid = " << (run.couple_fluid ? "true" : "false") << "\n"
    << "run.seed = " << run.seed << "\n"
    << "run.blowup_factor = " << fmt(run.blowup_factor) << "\n"
    << "run.remap_loss_max = " << fmt(run.remap_loss_max) << "\n";
  return o.str();
}

void SimConfig::validate() const {
  grid.validate();
  phys.validate();
  norms.validate();
  if (!(C_cal > 0.0)) throw ValidationError("norms.C_cal must be > 0");
  if (!(time.dt > 0.0) || !std::isfinite(time.dt)) throw ValidationError("time.dt must be > 0");
  if (!(time.t_end >= 0.0) || !std::isfinite(time.t_end))
    throw ValidationError("time.t_end must be >= 0");
  if (time.diag_every < 1) throw ValidationError("time.diag_every must be >= 1");
  if (time.checkpoint_every < 0) throw ValidationError("time.checkpoint_every must be >= 0");
  if (!(run.blowup_factor > 1.0)) throw ValidationError("run.blowup_factor must be > 1");
  if (!(run.remap_loss_max >= 0.0)) throw ValidationError("run.remap_loss_max must be >= 0");
  switch (init.kind) {
    case InitKind::director_family:
      init.family.validate(norms);
      break;
    case InitKind::file:
      if (init.path.empty()) throw ValidationError("init.path is required for init.kind = file");
      break;
    case InitKind::single_mode:
      if (init.field != "omega" && init.field != "d1" && init.field != "d2" && init.field != "d3")
        throw ValidationError("init.field must be omega, d1, d2 or d3");
      if (!std::isfinite(init.amplitude)) throw ValidationError("init.amplitude must be finite");
      break;
    case InitKind::random:
      if (!(init.amplitude >= 0.0)) throw ValidationError("init.amplitude must be >= 0");
      break;
  }
}

std::vector<double> parse_number_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ValidationError("empty entry in list '" + csv + "'");
    out.push_back(to_number("list", item));
  }
  if (out.empty()) throw ValidationError("empty list");
  return out;
}

}  // namespace lcsim
