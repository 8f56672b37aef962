#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "lgas/coupling.hpp"
#include "lgas/functionals.hpp"
#include "lgas/schedule.hpp"
#include "lgas/stats_util.hpp"

namespace lgas {

// Shared environment convention. rho defaults to 1/pi so the free-flight
// rate rho*pi is exactly 1; --unit-intensity restores the literal
// unit-density convention (rate pi), which then propagates everywhere.
struct EnvParams {
  std::uint64_t seed = 1;
  double rho = 1.0 / M_PI;
  double cell_side = 1.0;
  double world_factor = 4.0;  // world radius = factor * T / eps, base units

  double flight_rate() const { return rho * M_PI; }
};

// N unit vectors on a great circle through the z-axis with pairwise minimum
// angle exactly w.
std::vector<Vec3> fan_velocities(int n, double w);

// ---------------------------------------------------------------------------
// Mismatch probability (early-stopping bound)

struct MismatchParams {
  EnvParams env;
  double eps = 0.05;
  double T = 10.0;
  int N = 2;
  std::vector<Vec3> velocities;  // explicit; empty => sample from the cap
  double beta = M_PI;
  Vec3 axis{0.0, 0.0, 1.0};
  bool annealed = true;  // fresh environment per replica; false = quenched
  int threads = 0;
};

struct ReplicaRecord {
  std::uint64_t env_seed = 0;
  double w = 0.0;
  MismatchTimes times;
  bool mismatch = false;
  std::size_t lorentz_events = 0;
  std::size_t flight_events = 0;
  std::size_t clocks = 0;
  std::size_t shadowed = 0;
};

struct MismatchResult {
  double eps, r, T;
  int N;
  std::size_t replicas;
  Ci p_hat;
  double mean_w;
  double bound_value;  // r (N T + N^2 / w), averaged over replicas
  double fitted_c;     // p_hat / bound_value
  std::vector<ReplicaRecord> records;
};

MismatchResult estimate_mismatch_probability(const MismatchParams& params,
                                             std::size_t replicas);

// ---------------------------------------------------------------------------
// Flight-only event probabilities (A_i, B_ij and the appendix split)

struct EventParams {
  std::uint64_t seed = 1;
  double r = 1e-3;
  double T = 10.0;
  double w = 0.1;     // angle between the two deterministic start velocities
  double rate = 1.0;
  int threads = 0;
};

struct EventEstimates {
  double r, T, w;
  std::size_t replicas;
  Ci a1, a2, b12, bI, bII, bIII, bIV;
  std::size_t coverage_violations;  // B12 fired without any of B_I..B_IV
};

EventEstimates estimate_event_probabilities(const EventParams& params,
                                            std::size_t replicas);

// ---------------------------------------------------------------------------
// Green-function hitting/occupation estimates

struct GreenParams {
  std::uint64_t seed = 1;
  double centre_dist = 5.0;  // |x0|, ball on the x-axis
  double a = 0.5;            // ball radius, must satisfy a < |x0|
  double r = 1e-3;           // fattening radius for the continuous bound
  double rate = 1.0;
  double horizon = 0.0;  // 0 => max(100, 8 (|x0|+a)^2) / rate
  int threads = 0;
};

struct GreenResult {
  double centre_dist, a, horizon;
  std::size_t replicas;
  MeanCi discrete_visits;      // E #{k : Y_k in ball}
  MeanCi occupation_over_r;    // r^{-1} E time{Y(t) in r-fattened ball}
  double gamma_integral;       // adaptive quadrature of gamma over the ball
  double far_field;            // vol * (|x0|^{-2} + |x0|^{-1})
  double ratio_discrete;       // discrete mean / gamma integral
  double ratio_occupation;
};

GreenResult green_occupation(const GreenParams& params, std::size_t replicas);

// Adaptive quadrature of gamma(x) = |x|^{-2} + |x|^{-1} over a ball at
// distance centre_dist from the origin (C = 1).
double gamma_ball_integral(double centre_dist, double a);

// ---------------------------------------------------------------------------
// Donsker test

struct DonskerParams {
  std::uint64_t seed = 1;
  double rate = 1.0;
  double T = 100.0;
  int threads = 0;
  std::size_t functional_replicas = 0;  // 0 => same as KS replicas
  int wiener_paths = 100000;
  int wiener_steps = 1000;
};

struct FunctionalComparison {
  std::string name;
  double flight_mean, flight_se;
  double wiener_mean, wiener_se;
  double diff, combined_se;
};

struct DonskerReport {
  double T;
  std::size_t replicas;
  double variance;  // flight_covariance(rate, T) / T, the KS target
  std::array<KsResult, 3> coord_ks;
  std::array<double, 3> correlations;  // xy, xz, yz
  double corr_bound;                   // 3/sqrt(M)
  std::vector<FunctionalComparison> functionals;

  bool ks_pass(double alpha) const {
    return coord_ks[0].p_value > alpha && coord_ks[1].p_value > alpha &&
           coord_ks[2].p_value > alpha;
  }
};

DonskerReport donsker_test(const DonskerParams& params, std::size_t replicas);

// ---------------------------------------------------------------------------
// Quenched triangular-array experiment

struct QuenchedParams {
  EnvParams env;
  std::vector<ScalingRow> rows;
  double hoeffding_level = 0.01;
  std::size_t flight_reference_replicas = 20000;
  int wiener_paths = 100000;
  int wiener_steps = 1000;
  int threads = 0;
  bool force = false;  // run even if check_schedule(thm3) rejects
};

struct QuenchedRowResult {
  ScalingRow row;
  double w = 0.0;      // min angle among the N_n sampled velocities
  double alpha = 0.0;  // r^{1/3} beta^{2/3}
  bool w_below_alpha = false;
  MismatchTimes times;
  bool mismatch = false;
  double prop4_bound = 0.0;      // N rT + N^2 (r/beta)^{2/3}
  double w_bound = 0.0;          // N^2 (alpha/beta)^2
  std::size_t lorentz_events = 0, flight_events = 0, shadowed = 0;
  // Per functional of the dictionary:
  std::vector<double> x_avg, y_avg;
  std::vector<double> flight_ref_mean, flight_ref_se;  // annealed E F(Y)
  std::vector<double> wiener_mean, wiener_se;
  std::vector<double> gap_slln;     // |y_avg - flight_ref_mean|   (Prop 2)
  std::vector<double> gap_donsker;  // |flight_ref_mean - wiener|  (Prop 3)
  std::vector<double> gap_coupling; // |x_avg - y_avg|             (Prop 4)
  std::vector<double> gap_total;    // |x_avg - wiener|
  std::vector<double> hoeffding_delta;
  std::vector<double> envelope;     // hoeffding_delta + 1.96 * wiener_se
};

struct QuenchedResult {
  ScheduleReport schedule;
  std::vector<QuenchedRowResult> rows;
};

QuenchedResult quenched_average_experiment(const QuenchedParams& params);

}  // namespace lgas
