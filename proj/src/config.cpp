#include "sipf/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace sipf {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view key, std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ConfigError({std::string(key) + ": not a number: '" + std::string(s) + "'"});
  return v;
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view s) {
  s = trim(s);
  Int v{};
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ConfigError({std::string(key) + ": not an integer: '" + std::string(s) + "'"});
  return v;
}

bool parse_bool(std::string_view key, std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError({std::string(key) + ": not a boolean: '" + std::string(s) + "'"});
}

Vec3 parse_vec3(std::string_view key, std::string_view s) {
  Vec3 v;
  int n = 0;
  while (!s.empty()) {
    const auto comma = s.find(',');
    if (n == 3) throw ConfigError({std::string(key) + ": expected 3 components"});
    v[n++] = parse_double(key, s.substr(0, comma));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  if (n != 3) throw ConfigError({std::string(key) + ": expected 3 components"});
  return v;
}

std::string fmt_vec3(const Vec3& v) {
  return fmt_double(v.x) + "," + fmt_double(v.y) + "," + fmt_double(v.z);
}

void assign(Config& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  auto& p = cfg.phys;
  auto& d = cfg.disc;
  auto& r = cfg.run;
  if (key == "phys.mu") p.mu = parse_double(key, value);
  else if (key == "phys.chi") p.chi = parse_double(key, value);
  else if (key == "phys.epsilon") p.epsilon = parse_double(key, value);
  else if (key == "phys.k") p.k = parse_double(key, value);
  else if (key == "phys.mass") p.mass = parse_double(key, value);
  else if (key == "disc.box_len") d.box_len = parse_double(key, value);
  else if (key == "disc.modes") d.modes = parse_int<int>(key, value);
  else if (key == "disc.particles") d.particles = parse_int<std::size_t>(key, value);
  else if (key == "disc.dt") d.dt = parse_double(key, value);
  else if (key == "disc.horizon") d.horizon = parse_double(key, value);
  else if (key == "disc.seed") d.seed = parse_int<std::uint64_t>(key, value);
  else if (key == "init.rho0") {
    if (value == "ball") {
      cfg.init.shape = DensityShape::Ball;
      if (cfg.init.centers.size() != 1) cfg.init.centers = {Vec3{}};
    } else if (value == "multi-ball") {
      cfg.init.shape = DensityShape::MultiBall;
    } else if (value == "tetrahedron") {
      cfg.init.shape = DensityShape::MultiBall;
      cfg.init.centers = tetrahedron_centers();
    } else {
      throw ConfigError({"init.rho0: unknown shape '" + std::string(value) + "'"});
    }
  } else if (key == "init.center") {
    cfg.init.centers = {parse_vec3(key, value)};
  } else if (key == "init.centers") {
    std::vector<Vec3> centers;
    while (!value.empty()) {
      const auto semi = value.find(';');
      auto item = trim(value.substr(0, semi));
      if (!item.empty()) centers.push_back(parse_vec3(key, item));
      if (semi == std::string_view::npos) break;
      value.remove_prefix(semi + 1);
    }
    cfg.init.centers = std::move(centers);
  } else if (key == "init.radius") cfg.init.radius = parse_double(key, value);
  else if (key == "init.c0") cfg.init.c0 = std::string(value);
  else if (key == "run.threads") r.threads = parse_int<int>(key, value);
  else if (key == "run.snapshot_every") r.snapshot_every = parse_int<long>(key, value);
  else if (key == "run.noise_substeps") r.noise_substeps = parse_int<long>(key, value);
  else if (key == "run.r_min") r.r_min = parse_double(key, value);
  else if (key == "run.refine") r.refine = parse_int<int>(key, value);
  else if (key == "run.snapshot_particles") r.snapshot_particles = parse_bool(key, value);
  else if (key == "run.snapshot_field") r.snapshot_field = parse_bool(key, value);
  else if (key.starts_with("phys.") || key.starts_with("disc.") || key.starts_with("init.") ||
           key.starts_with("run."))
    throw ConfigError({"unknown key '" + std::string(key) + "'"});
  else
    cfg.extra[std::string(key)] = std::string(value);
}

}  // namespace

long Discretization::steps() const { return std::lround(horizon / dt); }

KernelScale KernelScale::from(const PhysParams& phys, double dt) {
  return KernelScale{std::sqrt(phys.k * phys.k + phys.epsilon / dt)};
}

std::vector<Vec3> tetrahedron_centers() {
  const double s3 = std::numbers::sqrt3 / 2.0;
  return {{1.0, 0.0, 0.0}, {-0.5, s3, 0.0}, {-0.5, -s3, 0.0}, {0.0, 0.0, std::numbers::sqrt2}};
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error([&] {
        std::string msg = "invalid configuration:";
        for (const auto& v : violations) msg += "\n  " + v;
        return msg;
      }()),
      violations_(std::move(violations)) {}

ValidationResult validate_config(const PhysParams& phys, const Discretization& disc) {
  ValidationResult out;
  auto& v = out.violations;
  auto positive = [&](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x)) v.push_back(std::string(name) + " must be > 0");
  };
  positive(phys.mu, "phys.mu");
  positive(phys.chi, "phys.chi");
  positive(phys.k, "phys.k");
  positive(phys.mass, "phys.mass");
  if (!(phys.epsilon >= 0.0) || !std::isfinite(phys.epsilon)) v.push_back("phys.epsilon must be >= 0");
  positive(disc.box_len, "disc.box_len");
  positive(disc.dt, "disc.dt");
  positive(disc.horizon, "disc.horizon");
  if (disc.modes <= 0 || disc.modes % 2 != 0) v.push_back("disc.modes must be a positive even integer");
  if (disc.particles < 1) v.push_back("disc.particles must be >= 1");
  if (disc.dt > 0.0 && disc.horizon > 0.0) {
    const double ratio = disc.horizon / disc.dt;
    const double nearest = std::round(ratio);
    if (nearest < 1.0 || std::abs(ratio - nearest) > 1e-9 * std::max(1.0, ratio))
      v.push_back("disc.horizon must be a positive integer multiple of disc.dt");
  }
  if (v.empty()) {
    out.config = ValidatedConfig{phys, disc, KernelScale::from(phys, disc.dt), disc.steps()};
  }
  return out;
}

ValidatedConfig validate_or_throw(const Config& cfg) {
  auto res = validate_config(cfg.phys, cfg.disc);
  auto& v = res.violations;
  const double half = cfg.disc.box_len / 2.0;
  if (!(cfg.init.radius > 0.0)) v.push_back("init.radius must be > 0");
  if (cfg.init.centers.empty()) v.push_back("init.centers must list at least one center");
  for (const auto& c : cfg.init.centers) {
    for (int i = 0; i < 3; ++i) {
      if (c[i] - cfg.init.radius < -half || c[i] + cfg.init.radius > half) {
        v.push_back("initial ball centered at (" + fmt_vec3(c) + ") leaves the domain");
        break;
      }
    }
  }
  if (cfg.disc.particles < cfg.init.centers.size())
    v.push_back("disc.particles must be at least the number of clusters");
  if (cfg.run.noise_substeps < 1) v.push_back("run.noise_substeps must be >= 1");
  if (cfg.run.refine < 1) v.push_back("run.refine must be >= 1");
  if (cfg.run.r_min < 0.0) v.push_back("run.r_min must be >= 0");
  if (!v.empty()) throw ConfigError(v);
  return *res.config;
}

Config parse_config(std::string_view text) {
  Config cfg;
  std::vector<std::string> errors;
  int lineno = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    try {
      assign(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      for (const auto& msg : e.violations()) errors.push_back("line " + std::to_string(lineno) + ": " + msg);
    }
  }
  if (!errors.empty()) throw ConfigError(errors);
  return cfg;
}

std::string serialize_config(const Config& cfg) {
  std::ostringstream os;
  const auto& p = cfg.phys;
  const auto& d = cfg.disc;
  const auto& r = cfg.run;
  os << "phys.mu = " << fmt_double(p.mu) << '\n'
     << "phys.chi = " << fmt_double(p.chi) << '\n'
     << "phys.epsilon = " << fmt_double(p.epsilon) << '\n'
     << "phys.k = " << fmt_double(p.k) << '\n'
     << "phys.mass = " << fmt_double(p.mass) << '\n'
     << "disc.box_len = " << fmt_double(d.box_len) << '\n'
     << "disc.modes = " << d.modes << '\n'
     << "disc.particles = " << d.particles << '\n'
     << "disc.dt = " << fmt_double(d.dt) << '\n'
     << "disc.horizon = " << fmt_double(d.horizon) << '\n'
     << "disc.seed = " << d.seed << '\n';
  if (cfg.init.shape == DensityShape::Ball) {
    os << "init.rho0 = ball\n"
       << "init.center = " << fmt_vec3(cfg.init.centers.empty() ? Vec3{} : cfg.init.centers.front()) << '\n';
  } else {
    os << "init.rho0 = multi-ball\ninit.centers = ";
    for (std::size_t i = 0; i < cfg.init.centers.size(); ++i)
      os << (i ? "; " : "") << fmt_vec3(cfg.init.centers[i]);
    os << '\n';
  }
  os << "init.radius = " << fmt_double(cfg.init.radius) << '\n'
     << "init.c0 = " << cfg.init.c0 << '\n'
     << "run.threads = " << r.threads << '\n'
     << "run.snapshot_every = " << r.snapshot_every << '\n'
     << "run.noise_substeps = " << r.noise_substeps << '\n'
     << "run.r_min = " << fmt_double(r.r_min) << '\n'
     << "run.refine = " << r.refine << '\n'
     << "run.snapshot_particles = " << (r.snapshot_particles ? "true" : "false") << '\n'
     << "run.snapshot_field = " << (r.snapshot_field ? "true" : "false") << '\n';
  for (const auto& [k, v] : cfg.extra) os << k << " = " << v << '\n';
  return os.str();
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void apply_override(Config& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError({"override must be key=value: '" + std::string(assignment) + "'"});
  assign(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

ModeFrequencies::ModeFrequencies(const Discretization& disc)
    : modes_(disc.modes), scale_(2.0 * std::numbers::pi / disc.box_len) {}

ModeFrequencies mode_frequencies(const Discretization& disc) { return ModeFrequencies(disc); }

}  // namespace sipf
