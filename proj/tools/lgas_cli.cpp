// Command-line laboratory driver. Subcommands map 1:1 onto experiments;
// flags override keys of an optional --config file. Exit codes: 0 success,
// 2 configuration/usage error, 3 runtime error.

#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "lgas/errors.hpp"
#include "lgas/experiments.hpp"

namespace {

struct KvFlag {
  std::string key;
  std::string value;
};

void add_common(CLI::App* sub, std::vector<KvFlag>& kvs) {
  auto bind = [sub, &kvs](const std::string& flag, const std::string& key,
                          const std::string& help) {
    sub->add_option_function<std::string>(
        flag,
        [&kvs, key](const std::string& v) { kvs.push_back({key, v}); }, help);
  };
  bind("--seed", "seed", "master seed");
  bind("--rho", "rho", "base PPP intensity (default 1/pi)");
  bind("--cell-side", "cell_side", "grid cell side, base units");
  bind("--world-factor", "world_factor", "world radius = factor*T/eps");
  bind("--eps", "eps", "Boltzmann-Grad scale in (0,1)");
  bind("--T", "T", "time horizon");
  bind("--N", "N", "number of coupled trajectories");
  bind("--beta", "beta", "solid-angle cap half-angle in (0,1]");
  bind("--axis", "axis", "cap axis e, e.g. 0,0,1");
  bind("--v0", "v0", "initial velocity, e.g. 1,0,0");
  bind("--velocities", "velocities", "explicit velocities 'x,y,z;x,y,z'");
  bind("--replicas", "replicas", "Monte Carlo replicas");
  bind("--out-dir", "out_dir", "output directory");
  bind("--threads", "threads", "parallelism degree (0 = all cores)");
  bind("--dump-scatterers", "dump_scatterers", "dump centres within radius");
  bind("--event-r", "event_r", "scatterer radius for event estimates");
  bind("--event-w", "event_w", "angle between the two start velocities");
  bind("--green-x0", "green_x0", "ball centre distance");
  bind("--green-a", "green_a", "ball radius");
  bind("--green-T", "green_T", "flight horizon (0 = auto)");
  bind("--schedule", "schedule", "schedule family (geometric)");
  bind("--n-min", "n_min", "first schedule row");
  bind("--n-max", "n_max", "last schedule row");
  bind("--hoeffding-level", "hoeffding_level", "per-row envelope level");
  bind("--wiener-paths", "wiener_paths", "Brownian reference paths");
  bind("--wiener-steps", "wiener_steps", "Brownian reference steps");
  bind("--flight-ref-replicas", "flight_ref_replicas",
       "annealed flight reference replicas");
  sub->add_flag_function(
      "--force", [&kvs](std::int64_t) { kvs.push_back({"force", "true"}); },
      "run despite inadmissible scaling");
  sub->add_flag_function(
      "--dump", [&kvs](std::int64_t) { kvs.push_back({"dump", "true"}); },
      "dump trajectory CSV");
  sub->add_flag_function(
      "--unit-intensity",
      [&kvs](std::int64_t) { kvs.push_back({"unit_intensity", "true"}); },
      "use rho = 1 (flight rate pi) instead of rho = 1/pi");
  sub->add_flag_function(
      "--quenched-env",
      [&kvs](std::int64_t) { kvs.push_back({"quenched_env", "true"}); },
      "fix the environment seed across replicas");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-driven Monte Carlo laboratory for the random Lorentz "
               "gas under Boltzmann-Grad scaling"};
  app.require_subcommand(1);

  std::string config_file;
  app.add_option("--config", config_file, "key=value config file")
      ->expected(1);

  std::vector<KvFlag> kvs;
  const char* subs[] = {"simulate", "couple",  "mismatch", "events",
                        "green",    "donsker", "quenched"};
  const char* descs[] = {
      "single Lorentz trajectory in a fixed environment",
      "one coupled ensemble (N Lorentz + N flights)",
      "Monte Carlo mismatch probability vs the early-stopping bound",
      "flight-only interference event probabilities",
      "Green-function hitting and occupation estimates",
      "diffusive-limit tests of the flight process",
      "triangular-array quenched averages on a scaling schedule"};
  std::vector<CLI::App*> subapps;
  for (int i = 0; i < 7; ++i) {
    CLI::App* sub = app.add_subcommand(subs[i], descs[i]);
    add_common(sub, kvs);
    subapps.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  lgas::RunConfig cfg;
  try {
    if (!config_file.empty()) cfg.load_file(config_file);
    for (int i = 0; i < 7; ++i)
      if (subapps[i]->parsed()) cfg.experiment = subs[i];
    for (const KvFlag& kv : kvs) cfg.apply_kv(kv.key, kv.value);
    if (const char* dir = std::getenv("LGAS_OUT_DIR")) cfg.out_dir = dir;
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto files = lgas::run_experiment(cfg);
    for (const auto& f : files) std::cout << cfg.out_dir << "/" << f << "\n";
  } catch (const lgas::Error& e) {
    const bool usage = e.code() == lgas::Error::Code::kInvalidArgument;
    std::cerr << (usage ? "config error: " : "runtime error: ") << e.what()
              << "\n";
    return usage ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
