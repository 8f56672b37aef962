#pragma once

#include <cstdint>
#include <vector>

#include "lgas/dynamics.hpp"
#include "lgas/flight.hpp"

namespace lgas {

// Relative tolerance of the tube membership test: a point is "seen" when its
// distance to the truncated path union is <= r*(1+kTubeRelTol). The slack
// catches the exact-touch case (an earlier collision point of the same
// scatterer sits at distance exactly r).
constexpr double kTubeRelTol = 1e-9;

// Polyline with vertex times; unit speed. Evaluation anchors on the last
// vertex at or before t.
struct PolyPath {
  std::vector<double> t;
  std::vector<Vec3> p;

  Vec3 at(double time) const;
};

PolyPath to_poly(const LorentzPath& path);
PolyPath to_poly(const FlightPath& path);

// Chunked-AABB index over a family of polylines for truncated min-distance
// queries. The delta-limit of the freshness/shadow definitions is realized
// by skipping the querying trajectory's final segment when its closest
// point is the segment's far endpoint (the current tangency point).
class PathTube {
 public:
  explicit PathTube(std::vector<PolyPath> paths);

  // Min distance from `point` to all path portions with time <= t_limit.
  // stop_below >= 0 allows an early return once any distance <= stop_below
  // is seen (the verdict "min <= stop_below" is still exact).
  double distance(const Vec3& point, double t_limit, int exclude_traj = -1,
                  double stop_below = -1.0) const;

  const PolyPath& path(int i) const { return paths_[i]; }
  int size() const { return static_cast<int>(paths_.size()); }

 private:
  struct Chunk {
    Vec3 lo, hi;
    int first_seg, last_seg;  // [first, last)
    double t_begin, t_end;
  };
  std::vector<PolyPath> paths_;
  std::vector<std::vector<Chunk>> chunks_;
};

struct FreshnessFlag {
  int traj;
  int k;  // collision number, 1-based (k=0 is the initial condition)
  bool fresh;
  Vec3 centre;
};

struct ShadowEvent {
  int traj;
  int clock_index;
  double time;
  Vec3 proposal;
  bool shadowed;
};

struct ClockSchedule {
  std::vector<double> times;
  std::vector<Vec3> proposals;
};

struct MismatchTimes {
  double sigma1 = kInf;  // first recollision (min tau with a=0)
  double sigma2 = kInf;  // first shadowed scattering (min clock with b=1)
  double sigma3 = kInf;  // first flight entry into an earlier virtual scatterer
  double sigma4 = kInf;  // first flight scattering inside the flight tube
  double sigma = kInf;   // min(sigma3, sigma4)
};

struct CoupledEnsemble {
  double horizon = 0.0;
  double radius = 0.0;
  double rate = 1.0;
  std::vector<LorentzPath> lorentz;
  std::vector<FlightPath> flights;
  std::vector<std::vector<FreshnessFlag>> freshness;
  std::vector<std::vector<ShadowEvent>> shadows;
  MismatchTimes times;

  bool mismatch() const { return times.sigma < horizon; }

  std::size_t lorentz_event_count() const;
  std::size_t flight_event_count() const;
  std::size_t clock_count() const;
  std::size_t shadowed_count() const;
};

// Exact min distance from a point to the union of Lorentz paths truncated at
// t_limit, with the optional delta-limit exclusion.
double tube_distance(const std::vector<LorentzPath>& paths, const Vec3& point,
                     double t_limit, int exclude_traj = -1);

// Freshness indicator of collision k (1-based) of trajectory j; k=0 returns
// fresh by definition.
FreshnessFlag freshness(const std::vector<LorentzPath>& paths, int j, int k,
                        double r);

// Shadow indicator b_j(t, v): 1 when a virtual scatterer causing velocity v
// at time t would be mechanically inconsistent with the past paths.
int shadow_indicator(const std::vector<LorentzPath>& paths, int j, double t,
                     const Vec3& v, const Vec3& v_current, double r);

// Auxiliary clock times (rate lambda) with uniform proposals; gaps landing
// within 1e-12 of a collision time are resampled.
ClockSchedule make_clock_schedule(Stream& stream, double rate, double T,
                                  const std::vector<double>& collision_times);

// The coupling construction: given N Lorentz paths in one environment,
// builds the N coupled Markovian flights and all stopping times.
CoupledEnsemble build_coupled_flights(std::vector<LorentzPath> paths,
                                      const std::vector<ClockSchedule>& clocks,
                                      double rate, double T, double r);

// Convenience wrapper deriving clock schedules from (seed, replica, j).
CoupledEnsemble build_coupled_flights(std::vector<LorentzPath> paths,
                                      std::uint64_t seed,
                                      std::uint64_t replica, double rate,
                                      double T, double r);

// sigma3/sigma4/sigma recomputed from the flight paths alone.
MismatchTimes mismatch_times_from_flights(
    const std::vector<FlightPath>& flights, double r, double T);

inline MismatchTimes mismatch_times(const CoupledEnsemble& e) {
  return e.times;
}

}  // namespace lgas
