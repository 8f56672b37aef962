#include "lgas/experiments.hpp"

#include <chrono>
#include <filesystem>

#include "lgas/dynamics.hpp"
#include "lgas/environment.hpp"
#include "lgas/errors.hpp"
#include "lgas/io.hpp"
#include "lgas/schedule.hpp"
#include "lgas/statistics.hpp"

namespace lgas {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::string fd(double v) { return fmt_double(v); }

std::string fd_or_inf(double v) {
  return std::isinf(v) ? "inf" : fmt_double(v);
}

void dump_trajectory(const std::string& path, const RunConfig& cfg,
                     const LorentzPath& traj) {
  CsvWriter csv(path, cfg, {"t", "x", "y", "z"});
  csv.row({"0", "0", "0", "0"});
  for (const auto& e : traj.events)
    csv.row({fd(e.tau), fd(e.pos.x), fd(e.pos.y), fd(e.pos.z)});
  const Vec3 end = traj.position(traj.horizon);
  csv.row({fd(traj.horizon), fd(end.x), fd(end.y), fd(end.z)});
}

void dump_scatterer_region(const std::string& path, const RunConfig& cfg,
                           const EnvironmentView& view, double radius) {
  CsvWriter csv(path, cfg, {"x", "y", "z"});
  const Vec3 lo{-radius, -radius, -radius};
  const Vec3 hi{radius, radius, radius};
  for (const Vec3& c : view.centres_in_box(lo, hi))
    if (c.norm() <= radius) csv.row({fd(c.x), fd(c.y), fd(c.z)});
}

std::vector<std::string> run_simulate(const RunConfig& cfg) {
  std::vector<std::string> files;
  const BasePointProcess base(cfg.env.seed, cfg.env.rho, cfg.env.cell_side,
                              cfg.env.world_factor * cfg.T / cfg.eps);
  const EnvironmentView view(base, cfg.eps);
  const Vec3 v0 = cfg.v0.normalized();
  const LorentzPath traj = simulate_lorentz(view, v0, cfg.T);

  CsvWriter csv(join(cfg.out_dir, "simulate_summary.csv"), cfg,
                {"eps", "r", "T", "events", "end_x", "end_y", "end_z"});
  const Vec3 end = traj.position(cfg.T);
  csv.row({fd(cfg.eps), fd(view.radius()), fd(cfg.T),
           std::to_string(traj.events.size()), fd(end.x), fd(end.y),
           fd(end.z)});
  files.push_back("simulate_summary.csv");

  if (cfg.dump) {
    dump_trajectory(join(cfg.out_dir, "trajectory.csv"), cfg, traj);
    files.push_back("trajectory.csv");
  }
  if (cfg.dump_scatterers > 0.0) {
    dump_scatterer_region(join(cfg.out_dir, "scatterers.csv"), cfg, view,
                          cfg.dump_scatterers);
    files.push_back("scatterers.csv");
  }
  return files;
}

std::vector<std::string> run_couple_or_mismatch(const RunConfig& cfg) {
  std::vector<std::string> files;
  MismatchParams p;
  p.env = cfg.env;
  p.eps = cfg.eps;
  p.T = cfg.T;
  p.N = cfg.N;
  p.velocities = cfg.parsed_velocities();
  p.beta = cfg.beta;
  p.axis = cfg.axis.normalized();
  p.annealed = !cfg.quenched_env;
  p.threads = cfg.threads;
  const std::size_t m = cfg.experiment == "couple" ? 1 : cfg.replicas;
  const MismatchResult res = estimate_mismatch_probability(p, m);

  const std::string base = cfg.experiment;
  CsvWriter csv(join(cfg.out_dir, base + "_summary.csv"), cfg,
                {"eps", "r", "T", "N", "replicas", "p_hat", "ci_lo", "ci_hi",
                 "mean_w", "bound_value", "fitted_c"});
  csv.row({fd(res.eps), fd(res.r), fd(res.T), std::to_string(res.N),
           std::to_string(res.replicas), fd(res.p_hat.estimate),
           fd(res.p_hat.lo), fd(res.p_hat.hi), fd(res.mean_w),
           fd(res.bound_value), fd(res.fitted_c)});
  files.push_back(base + "_summary.csv");

  JsonlWriter jsonl(join(cfg.out_dir, base + "_replicas.jsonl"), cfg);
  for (const auto& rec : res.records) jsonl.record(replica_json(cfg, rec));
  files.push_back(base + "_replicas.jsonl");
  return files;
}

std::vector<std::string> run_events(const RunConfig& cfg) {
  EventParams p;
  p.seed = cfg.env.seed;
  p.r = cfg.event_r;
  p.T = cfg.T;
  p.w = cfg.event_w;
  p.rate = cfg.env.flight_rate();
  p.threads = cfg.threads;
  const EventEstimates est = estimate_event_probabilities(p, cfg.replicas);

  CsvWriter csv(join(cfg.out_dir, "events_summary.csv"), cfg,
                {"event", "estimate", "ci_lo", "ci_hi", "normalizer",
                 "fitted_c"});
  auto put = [&](const char* name, const Ci& ci, double normalizer) {
    csv.row({name, fd(ci.estimate), fd(ci.lo), fd(ci.hi), fd(normalizer),
             fd(normalizer > 0.0 ? ci.estimate / normalizer : 0.0)});
  };
  put("A1", est.a1, p.r * p.T);
  put("A2", est.a2, p.r * p.T);
  put("B12", est.b12, p.r / p.w);
  put("BI", est.bI, p.r / p.w);
  put("BII", est.bII, p.r);
  put("BIII", est.bIII, p.r);
  put("BIV", est.bIV, p.r);
  csv.row({"coverage_violations", std::to_string(est.coverage_violations), "0",
           "0", "0", "0"});
  return {"events_summary.csv"};
}

std::vector<std::string> run_green(const RunConfig& cfg) {
  GreenParams p;
  p.seed = cfg.env.seed;
  p.centre_dist = cfg.green_x0;
  p.a = cfg.green_a;
  p.r = radius_of(cfg.eps);
  p.rate = cfg.env.flight_rate();
  p.horizon = cfg.green_T;
  p.threads = cfg.threads;
  const GreenResult res = green_occupation(p, cfg.replicas);

  CsvWriter csv(join(cfg.out_dir, "green_summary.csv"), cfg,
                {"x0", "a", "horizon", "replicas", "discrete_mean",
                 "discrete_ci", "occupation_over_r", "occupation_ci",
                 "gamma_integral", "far_field", "ratio_discrete",
                 "ratio_occupation"});
  csv.row({fd(res.centre_dist), fd(res.a), fd(res.horizon),
           std::to_string(res.replicas), fd(res.discrete_visits.mean),
           fd(res.discrete_visits.halfwidth), fd(res.occupation_over_r.mean),
           fd(res.occupation_over_r.halfwidth), fd(res.gamma_integral),
           fd(res.far_field), fd(res.ratio_discrete),
           fd(res.ratio_occupation)});
  return {"green_summary.csv"};
}

std::vector<std::string> run_donsker(const RunConfig& cfg) {
  DonskerParams p;
  p.seed = cfg.env.seed;
  p.rate = cfg.env.flight_rate();
  p.T = cfg.T;
  p.threads = cfg.threads;
  p.wiener_paths = cfg.wiener_paths;
  p.wiener_steps = cfg.wiener_steps;
  const DonskerReport rep = donsker_test(p, cfg.replicas);

  CsvWriter csv(join(cfg.out_dir, "donsker_summary.csv"), cfg,
                {"metric", "value1", "value2", "value3"});
  csv.row({"variance_target", fd(rep.variance), "", ""});
  csv.row({"ks_stat", fd(rep.coord_ks[0].statistic),
           fd(rep.coord_ks[1].statistic), fd(rep.coord_ks[2].statistic)});
  csv.row({"ks_p", fd(rep.coord_ks[0].p_value), fd(rep.coord_ks[1].p_value),
           fd(rep.coord_ks[2].p_value)});
  csv.row({"correlation", fd(rep.correlations[0]), fd(rep.correlations[1]),
           fd(rep.correlations[2])});
  csv.row({"corr_bound", fd(rep.corr_bound), "", ""});
  for (const auto& fc : rep.functionals) {
    csv.row({"functional_" + fc.name + "_flight", fd(fc.flight_mean),
             fd(fc.flight_se), ""});
    csv.row({"functional_" + fc.name + "_wiener", fd(fc.wiener_mean),
             fd(fc.wiener_se), ""});
    csv.row({"functional_" + fc.name + "_diff", fd(fc.diff),
             fd(fc.combined_se), ""});
  }
  return {"donsker_summary.csv"};
}

std::vector<std::string> run_quenched(const RunConfig& cfg) {
  QuenchedParams p;
  p.env = cfg.env;
  require(cfg.schedule == "geometric", Error::Code::kInvalidArgument,
          "only the geometric schedule family is built in");
  p.rows = geometric_schedule(cfg.n_min, cfg.n_max, cfg.axis.normalized());
  p.hoeffding_level = cfg.hoeffding_level;
  p.flight_reference_replicas = cfg.flight_ref_replicas;
  p.wiener_paths = cfg.wiener_paths;
  p.wiener_steps = cfg.wiener_steps;
  p.threads = cfg.threads;
  p.force = cfg.force;
  const QuenchedResult res = quenched_average_experiment(p);

  std::vector<std::string> files;
  {
    CsvWriter csv(join(cfg.out_dir, "schedule_report.csv"), cfg,
                  {"n", "rT", "rT_beta", "term_weak", "term_strong", "rT_ok"});
    for (const auto& rc : res.schedule.rows)
      csv.row({std::to_string(rc.n), fd(rc.rT), fd(rc.rT_beta),
               fd(rc.term_weak), fd(rc.term_strong), rc.rT_ok ? "1" : "0"});
    files.push_back("schedule_report.csv");
  }
  {
    CsvWriter csv(
        join(cfg.out_dir, "quenched_rows.csv"), cfg,
        {"n", "eps", "r", "T", "beta", "N", "w", "alpha", "w_below_alpha",
         "sigma", "mismatch", "prop4_bound", "w_bound", "lorentz_events",
         "flight_events", "shadowed"});
    for (const auto& rr : res.rows)
      csv.row({std::to_string(rr.row.n), fd(rr.row.eps), fd(rr.row.r),
               fd(rr.row.T), fd(rr.row.beta), std::to_string(rr.row.N),
               fd(rr.w), fd(rr.alpha), rr.w_below_alpha ? "1" : "0",
               fd_or_inf(rr.times.sigma), rr.mismatch ? "1" : "0",
               fd(rr.prop4_bound), fd(rr.w_bound),
               std::to_string(rr.lorentz_events),
               std::to_string(rr.flight_events),
               std::to_string(rr.shadowed)});
    files.push_back("quenched_rows.csv");
  }
  {
    CsvWriter csv(join(cfg.out_dir, "quenched_functionals.csv"), cfg,
                  {"n", "functional", "x_avg", "y_avg", "flight_ref",
                   "flight_ref_se", "wiener", "wiener_se", "gap_slln",
                   "gap_donsker", "gap_coupling", "gap_total",
                   "hoeffding_delta", "envelope"});
    const auto& dict = functional_dictionary();
    for (const auto& rr : res.rows)
      for (std::size_t f = 0; f < dict.size(); ++f)
        csv.row({std::to_string(rr.row.n), dict[f].name, fd(rr.x_avg[f]),
                 fd(rr.y_avg[f]), fd(rr.flight_ref_mean[f]),
                 fd(rr.flight_ref_se[f]), fd(rr.wiener_mean[f]),
                 fd(rr.wiener_se[f]), fd(rr.gap_slln[f]),
                 fd(rr.gap_donsker[f]), fd(rr.gap_coupling[f]),
                 fd(rr.gap_total[f]), fd(rr.hoeffding_delta[f]),
                 fd(rr.envelope[f])});
    files.push_back("quenched_functionals.csv");
  }
  {
    JsonlWriter jsonl(join(cfg.out_dir, "quenched_rows.jsonl"), cfg);
    for (const auto& rr : res.rows) {
      nlohmann::json j;
      j["type"] = "row";
      j["n"] = rr.row.n;
      j["eps"] = rr.row.eps;
      j["T"] = rr.row.T;
      j["N"] = rr.row.N;
      j["beta"] = rr.row.beta;
      j["seed"] = cfg.env.seed;
      j["w"] = std::isinf(rr.w) ? nlohmann::json(nullptr)
                                : nlohmann::json(rr.w);
      auto put_time = [&](const char* k, double t) {
        j[k] = std::isinf(t) ? nlohmann::json(nullptr) : nlohmann::json(t);
      };
      put_time("sigma1", rr.times.sigma1);
      put_time("sigma2", rr.times.sigma2);
      put_time("sigma3", rr.times.sigma3);
      put_time("sigma4", rr.times.sigma4);
      put_time("sigma", rr.times.sigma);
      j["mismatch"] = rr.mismatch;
      j["lorentz_events"] = rr.lorentz_events;
      j["flight_events"] = rr.flight_events;
      j["shadowed_events"] = rr.shadowed;
      jsonl.record(j);
    }
    files.push_back("quenched_rows.jsonl");
  }
  return files;
}

}  // namespace

std::vector<std::string> run_experiment(const RunConfig& config) {
  config.validate();
  const auto t0 = std::chrono::steady_clock::now();
  fs::create_directories(config.out_dir);

  std::vector<std::string> files;
  if (config.experiment == "simulate") files = run_simulate(config);
  else if (config.experiment == "couple" || config.experiment == "mismatch")
    files = run_couple_or_mismatch(config);
  else if (config.experiment == "events") files = run_events(config);
  else if (config.experiment == "green") files = run_green(config);
  else if (config.experiment == "donsker") files = run_donsker(config);
  else if (config.experiment == "quenched") files = run_quenched(config);
  else
    throw Error(Error::Code::kInvalidArgument,
                "unknown experiment: " + config.experiment);

  const auto t1 = std::chrono::steady_clock::now();
  const double wall_ms =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  write_manifest(config.out_dir, config, files, wall_ms);
  files.push_back("manifest.json");
  return files;
}

}  // namespace lgas
