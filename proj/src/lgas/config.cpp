#include "lgas/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lgas/errors.hpp"
#include "lgas/schedule.hpp"

namespace lgas {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(Error::Code::kInvalidArgument, "bad boolean value: " + v);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_vec(const Vec3& v) {
  return fmt(v.x) + "," + fmt(v.y) + "," + fmt(v.z);
}

}  // namespace

Vec3 parse_vec3(const std::string& s) {
  std::stringstream ss(s);
  Vec3 v;
  char c1 = 0, c2 = 0;
  if (!(ss >> v.x >> c1 >> v.y >> c2 >> v.z) || c1 != ',' || c2 != ',')
    throw Error(Error::Code::kInvalidArgument, "bad vector: " + s);
  return v;
}

void RunConfig::apply_kv(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "experiment") experiment = v;
  else if (key == "seed") env.seed = std::stoull(v);
  else if (key == "rho") env.rho = std::stod(v);
  else if (key == "unit_intensity") {
    unit_intensity = parse_bool(v);
    if (unit_intensity) env.rho = 1.0;
  } else if (key == "cell_side") env.cell_side = std::stod(v);
  else if (key == "world_factor") env.world_factor = std::stod(v);
  else if (key == "eps" || key == "epsilon") eps = std::stod(v);
  else if (key == "T") T = std::stod(v);
  else if (key == "N") N = std::stoi(v);
  else if (key == "beta") beta = std::stod(v);
  else if (key == "axis") axis = parse_vec3(v);
  else if (key == "v0") v0 = parse_vec3(v);
  else if (key == "velocities") velocities = v;
  else if (key == "replicas") replicas = std::stoull(v);
  else if (key == "out_dir") out_dir = v;
  else if (key == "threads") threads = std::stoi(v);
  else if (key == "force") force = parse_bool(v);
  else if (key == "dump") dump = parse_bool(v);
  else if (key == "dump_scatterers") dump_scatterers = std::stod(v);
  else if (key == "quenched_env") quenched_env = parse_bool(v);
  else if (key == "event_r") event_r = std::stod(v);
  else if (key == "event_w") event_w = std::stod(v);
  else if (key == "green_x0") green_x0 = std::stod(v);
  else if (key == "green_a") green_a = std::stod(v);
  else if (key == "green_T") green_T = std::stod(v);
  else if (key == "schedule") schedule = v;
  else if (key == "n_min") n_min = std::stoi(v);
  else if (key == "n_max") n_max = std::stoi(v);
  else if (key == "hoeffding_level") hoeffding_level = std::stod(v);
  else if (key == "wiener_paths") wiener_paths = std::stoi(v);
  else if (key == "wiener_steps") wiener_steps = std::stoi(v);
  else if (key == "flight_ref_replicas") flight_ref_replicas = std::stoull(v);
  else
    throw Error(Error::Code::kInvalidArgument, "unknown config key: " + key);
}

void RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Error::Code::kIo, "cannot open config file: " + path);
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    require(eq != std::string::npos, Error::Code::kInvalidArgument,
            "bad config line: " + line);
    apply_kv(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
}

std::vector<Vec3> RunConfig::parsed_velocities() const {
  std::vector<Vec3> out;
  if (velocities.empty()) return out;
  std::stringstream ss(velocities);
  std::string part;
  while (std::getline(ss, part, ';')) {
    const std::string t = trim(part);
    if (!t.empty()) out.push_back(parse_vec3(t));
  }
  return out;
}

void RunConfig::validate() const {
  static const char* kExperiments[] = {"simulate", "couple", "mismatch",
                                       "events", "green", "donsker",
                                       "quenched"};
  bool known = false;
  for (const char* e : kExperiments) known = known || experiment == e;
  require(known, Error::Code::kInvalidArgument,
          "unknown experiment: " + experiment);
  require(eps > 0.0 && eps < 1.0, Error::Code::kInvalidArgument,
          "eps must lie in (0,1)");
  require(T > 0.0, Error::Code::kInvalidArgument, "T must be positive");
  require(beta > 0.0 && beta <= 1.0, Error::Code::kInvalidArgument,
          "beta must lie in (0,1]");
  require(N >= 1, Error::Code::kInvalidArgument, "N must be >= 1");
  require(replicas >= 1, Error::Code::kInvalidArgument,
          "replicas must be >= 1");
  require(env.rho > 0.0 && env.cell_side > 0.0 && env.world_factor > 0.0,
          Error::Code::kInvalidArgument, "bad environment parameters");
  if (experiment == "simulate" || experiment == "couple" ||
      experiment == "mismatch") {
    const double r = radius_of(eps);
    require(force || r * T <= 1.0, Error::Code::kInvalidArgument,
            "r*T > 1 violates the standing scaling assumption (use --force)");
    for (const Vec3& v : parsed_velocities())
      require(std::abs(v.norm() - 1.0) <= 1e-9, Error::Code::kInvalidArgument,
              "velocities must be unit vectors");
  }
  if (experiment == "green")
    require(green_a > 0.0 && green_a < green_x0, Error::Code::kInvalidArgument,
            "green ball must exclude the origin");
  if (experiment == "quenched")
    require(n_min >= 2 && n_max >= n_min, Error::Code::kInvalidArgument,
            "need 2 <= n_min <= n_max");
}

std::map<std::string, std::string> RunConfig::to_kv() const {
  std::map<std::string, std::string> kv;
  kv["experiment"] = experiment;
  kv["seed"] = std::to_string(env.seed);
  kv["rho"] = fmt(env.rho);
  kv["unit_intensity"] = unit_intensity ? "true" : "false";
  kv["cell_side"] = fmt(env.cell_side);
  kv["world_factor"] = fmt(env.world_factor);
  kv["eps"] = fmt(eps);
  kv["T"] = fmt(T);
  kv["N"] = std::to_string(N);
  kv["beta"] = fmt(beta);
  kv["axis"] = fmt_vec(axis);
  kv["v0"] = fmt_vec(v0);
  kv["velocities"] = velocities;
  kv["replicas"] = std::to_string(replicas);
  kv["out_dir"] = out_dir;
  kv["threads"] = std::to_string(threads);
  kv["force"] = force ? "true" : "false";
  kv["dump"] = dump ? "true" : "false";
  kv["dump_scatterers"] = fmt(dump_scatterers);
  kv["quenched_env"] = quenched_env ? "true" : "false";
  kv["event_r"] = fmt(event_r);
  kv["event_w"] = fmt(event_w);
  kv["green_x0"] = fmt(green_x0);
  kv["green_a"] = fmt(green_a);
  kv["green_T"] = fmt(green_T);
  kv["schedule"] = schedule;
  kv["n_min"] = std::to_string(n_min);
  kv["n_max"] = std::to_string(n_max);
  kv["hoeffding_level"] = fmt(hoeffding_level);
  kv["wiener_paths"] = std::to_string(wiener_paths);
  kv["wiener_steps"] = std::to_string(wiener_steps);
  kv["flight_ref_replicas"] = std::to_string(flight_ref_replicas);
  return kv;
}

std::uint64_t RunConfig::hash() const {
  // FNV-1a over the canonical key=value serialization. threads and out_dir
  // are excluded: they must not change results.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& [k, v] : to_kv()) {
    if (k == "threads" || k == "out_dir") continue;
    for (const std::string* s : {&k, &v})
      for (char c : *s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
      }
    h ^= '\n';
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace lgas
