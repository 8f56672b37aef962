#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lgas/geom.hpp"
#include "lgas/statistics.hpp"

namespace lgas {

// Flat key-value run configuration. File keys and CLI flags share the same
// names; CLI flags override file keys.
struct RunConfig {
  std::string experiment;  // simulate|couple|mismatch|events|green|donsker|quenched

  EnvParams env;
  bool unit_intensity = false;  // rho = 1 (flight rate pi) instead of 1/pi

  double eps = 0.05;
  double T = 10.0;
  int N = 1;
  double beta = 1.0;
  Vec3 axis{0.0, 0.0, 1.0};
  Vec3 v0{0.0, 0.0, 1.0};
  std::string velocities;  // "x,y,z; x,y,z; ..." explicit initial velocities

  std::size_t replicas = 1000;
  std::string out_dir = "out";
  int threads = 0;  // 0 = all cores
  bool force = false;
  bool dump = false;             // trajectory CSV (simulate/couple)
  double dump_scatterers = 0.0;  // dump centres within this radius (0 = off)
  bool quenched_env = false;     // mismatch: fixed environment seed

  double event_r = 1e-3;
  double event_w = 0.1;

  double green_x0 = 5.0;
  double green_a = 0.5;
  double green_T = 0.0;  // 0 = auto horizon

  std::string schedule = "geometric";
  int n_min = 8;
  int n_max = 16;
  double hoeffding_level = 0.01;
  int wiener_paths = 100000;
  int wiener_steps = 1000;
  std::size_t flight_ref_replicas = 20000;

  void apply_kv(const std::string& key, const std::string& value);
  void load_file(const std::string& path);
  void validate() const;  // throws Error::kInvalidArgument

  std::vector<Vec3> parsed_velocities() const;
  std::map<std::string, std::string> to_kv() const;  // canonical, sorted
  std::uint64_t hash() const;
};

Vec3 parse_vec3(const std::string& s);

}  // namespace lgas
