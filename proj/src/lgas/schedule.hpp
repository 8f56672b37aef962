#pragma once

#include <span>
#include <string>
#include <vector>

#include "lgas/geom.hpp"
#include "lgas/rng.hpp"

namespace lgas {

// One row of the triangular-array schedule.
struct ScalingRow {
  int n = 0;
  double eps = 0.0;
  double r = 0.0;  // eps^{d/(d-1)}
  double T = 0.0;
  double beta = 1.0;
  long long N = 1;
  Vec3 axis{0.0, 0.0, 1.0};

  double alpha() const;  // r^{1/d} beta^{(d-1)/d}, d = 3
};

// r_eps = eps^{d/(d-1)}.
double radius_of(double eps, int d = 3);

// Minimum pairwise angle 2*arcsin(sqrt((1-v_i.v_j)/2)); 0 for duplicates.
double min_angle(std::span<const Vec3> velocities);

// Uniform sample from the solid-angle cap {u: angle(u,e) <= beta}.
Vec3 sample_cap(Stream& stream, const Vec3& e, double beta);

enum class TheoremMode { kThm1, kThm2, kThm3 };

struct RowCheck {
  int n;
  double rT;
  double rT_beta;      // r*(T + 1/beta)
  double term_weak;    // log n * rT + (log n)^2 (r/beta)^{(d-1)/d}
  double term_strong;  // N * rT + N^2 (r/beta)^{(d-1)/d}
  bool rT_ok;          // rT <= 1
};

struct ScheduleReport {
  std::vector<RowCheck> rows;
  double weak_partial_sum = 0.0;
  double strong_partial_sum = 0.0;
  double weak_tail_bound = 0.0;    // geometric tail estimate past the rows
  double strong_tail_bound = 0.0;
  bool n_monotone = true;        // N_n increasing
  bool n_beats_log = true;       // N_n / log n increasing
  bool trend_ok = true;          // mode-relevant terms decreasing on the tail
  bool admissible = false;
  std::vector<std::string> violations;
};

// Finite-horizon admissibility proxy: flags rT > 1 and non-monotone N_n,
// requires the mode-relevant terms to be decreasing over the trailing third
// of the supplied rows with geometric tail estimate below `tail_budget`.
ScheduleReport check_schedule(const std::vector<ScalingRow>& rows,
                              TheoremMode mode, double tail_budget = 1.0);

// The canonical geometric family: eps_n = 2^{-n}, T_n = eps_n^{-1/2},
// beta_n = 2^{-n/2}, N_n = n^2.
std::vector<ScalingRow> geometric_schedule(int n_min, int n_max,
                                           const Vec3& axis = {0.0, 0.0, 1.0});

}  // namespace lgas
