#include "lgas/coupling.hpp"

#include <algorithm>
#include <cmath>

#include "lgas/errors.hpp"

namespace lgas {

namespace {
constexpr int kChunkSegs = 32;
constexpr double kParamEndTol = 1e-9;
}  // namespace

Vec3 PolyPath::at(double time) const {
  auto it = std::upper_bound(t.begin(), t.end(), time);
  if (it == t.begin()) return p.front();
  const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
  if (i + 1 >= t.size()) return p.back();
  const Vec3 dir = p[i + 1] - p[i];
  const double dt = t[i + 1] - t[i];
  if (dt <= 0.0) return p[i];
  return p[i] + dir * ((time - t[i]) / dt);
}

PolyPath to_poly(const LorentzPath& path) {
  PolyPath poly;
  poly.t.reserve(path.events.size() + 2);
  poly.p.reserve(path.events.size() + 2);
  poly.t.push_back(0.0);
  poly.p.push_back(Vec3{});
  for (const auto& e : path.events) {
    poly.t.push_back(e.tau);
    poly.p.push_back(e.pos);
  }
  if (poly.t.back() < path.horizon) {
    poly.t.push_back(path.horizon);
    poly.p.push_back(path.position(path.horizon));
  }
  return poly;
}

PolyPath to_poly(const FlightPath& path) {
  PolyPath poly;
  poly.t.reserve(path.events.size() + 2);
  poly.p.reserve(path.events.size() + 2);
  poly.t.push_back(0.0);
  poly.p.push_back(Vec3{});
  for (const auto& e : path.events) {
    poly.t.push_back(e.theta);
    poly.p.push_back(e.pos);
  }
  if (poly.t.back() < path.horizon) {
    poly.t.push_back(path.horizon);
    poly.p.push_back(path.position(path.horizon));
  }
  return poly;
}

PathTube::PathTube(std::vector<PolyPath> paths) : paths_(std::move(paths)) {
  chunks_.resize(paths_.size());
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    const PolyPath& poly = paths_[i];
    const int nseg = static_cast<int>(poly.t.size()) - 1;
    for (int s = 0; s < nseg; s += kChunkSegs) {
      Chunk c;
      c.first_seg = s;
      c.last_seg = std::min(s + kChunkSegs, nseg);
      c.t_begin = poly.t[c.first_seg];
      c.t_end = poly.t[c.last_seg];
      Vec3 lo = poly.p[s], hi = poly.p[s];
      for (int v = s; v <= c.last_seg; ++v) {
        const Vec3& q = poly.p[v];
        lo.x = std::min(lo.x, q.x); lo.y = std::min(lo.y, q.y);
        lo.z = std::min(lo.z, q.z);
        hi.x = std::max(hi.x, q.x); hi.y = std::max(hi.y, q.y);
        hi.z = std::max(hi.z, q.z);
      }
      c.lo = lo;
      c.hi = hi;
      chunks_[i].push_back(c);
    }
  }
}

double PathTube::distance(const Vec3& point, double t_limit, int exclude_traj,
                          double stop_below) const {
  double best = kInf;
  for (int i = 0; i < size(); ++i) {
    const PolyPath& poly = paths_[i];
    const bool excl = (i == exclude_traj);
    for (const Chunk& ch : chunks_[i]) {
      if (ch.t_begin >= t_limit) break;
      const double bd2 = point_box_dist2(point, ch.lo, ch.hi);
      if (bd2 >= best * best) continue;
      const bool whole = ch.t_end <= t_limit && (!excl || ch.t_end < t_limit);
      if (whole) {
        for (int s = ch.first_seg; s < ch.last_seg; ++s) {
          const double d =
              point_segment_distance(point, poly.p[s], poly.p[s + 1]).dist;
          if (d < best) best = d;
        }
      } else {
        for (int s = ch.first_seg; s < ch.last_seg; ++s) {
          if (poly.t[s] >= t_limit) break;
          const bool final_seg = poly.t[s + 1] >= t_limit;
          const Vec3 end =
              final_seg && poly.t[s + 1] > t_limit ? poly.at(t_limit)
                                                   : poly.p[s + 1];
          const SegDist sd = point_segment_distance(point, poly.p[s], end);
          if (excl && final_seg && sd.param >= 1.0 - kParamEndTol) continue;
          if (sd.dist < best) best = sd.dist;
        }
      }
      if (stop_below >= 0.0 && best <= stop_below) return best;
    }
  }
  return best;
}

double tube_distance(const std::vector<LorentzPath>& paths, const Vec3& point,
                     double t_limit, int exclude_traj) {
  require(t_limit >= 0.0, Error::Code::kInvalidArgument,
          "t_limit must be >= 0");
  std::vector<PolyPath> polys;
  polys.reserve(paths.size());
  for (const auto& p : paths) polys.push_back(to_poly(p));
  return PathTube(std::move(polys)).distance(point, t_limit, exclude_traj);
}

namespace {

bool tube_seen(const PathTube& tube, const Vec3& point, double t_limit,
               int exclude_traj, double r) {
  const double thresh = r * (1.0 + kTubeRelTol);
  return tube.distance(point, t_limit, exclude_traj, thresh) <= thresh;
}

}  // namespace

FreshnessFlag freshness(const std::vector<LorentzPath>& paths, int j, int k,
                        double r) {
  if (k == 0) return {j, 0, true, Vec3{}};
  require(j >= 0 && j < static_cast<int>(paths.size()),
          Error::Code::kInvalidArgument, "trajectory index out of range");
  require(k >= 1 && k <= static_cast<int>(paths[j].events.size()),
          Error::Code::kInvalidArgument, "collision (j,k) does not exist");
  const CollisionEvent& e = paths[j].events[k - 1];
  std::vector<PolyPath> polys;
  polys.reserve(paths.size());
  for (const auto& p : paths) polys.push_back(to_poly(p));
  const PathTube tube(std::move(polys));
  const bool seen = tube_seen(tube, e.centre, e.tau, j, r);
  return {j, k, !seen, e.centre};
}

int shadow_indicator(const std::vector<LorentzPath>& paths, int j, double t,
                     const Vec3& v, const Vec3& v_current, double r) {
  const Vec3 d = v - v_current;
  require(d.norm() > 0.0, Error::Code::kDegenerate,
          "proposal equals current velocity");
  const Vec3 centre = paths[j].position(t) + d * (r / d.norm());
  std::vector<PolyPath> polys;
  polys.reserve(paths.size());
  for (const auto& p : paths) polys.push_back(to_poly(p));
  const PathTube tube(std::move(polys));
  return tube_seen(tube, centre, t, j, r) ? 1 : 0;
}

ClockSchedule make_clock_schedule(Stream& stream, double rate, double T,
                                  const std::vector<double>& collision_times) {
  ClockSchedule sched;
  double t = 0.0;
  auto near_collision = [&](double time) {
    auto it = std::lower_bound(collision_times.begin(), collision_times.end(),
                               time);
    if (it != collision_times.end() && std::abs(*it - time) < 1e-12)
      return true;
    if (it != collision_times.begin() && std::abs(*(it - 1) - time) < 1e-12)
      return true;
    return false;
  };
  for (;;) {
    double gap = stream.exponential(rate);
    while (near_collision(t + gap)) gap = stream.exponential(rate);
    if (t + gap >= T) break;
    t += gap;
    sched.times.push_back(t);
    sched.proposals.push_back(sample_uniform_sphere(stream));
  }
  return sched;
}

std::size_t CoupledEnsemble::lorentz_event_count() const {
  std::size_t n = 0;
  for (const auto& p : lorentz) n += p.events.size();
  return n;
}
std::size_t CoupledEnsemble::flight_event_count() const {
  std::size_t n = 0;
  for (const auto& p : flights) n += p.events.size();
  return n;
}
std::size_t CoupledEnsemble::clock_count() const {
  std::size_t n = 0;
  for (const auto& s : shadows) n += s.size();
  return n;
}
std::size_t CoupledEnsemble::shadowed_count() const {
  std::size_t n = 0;
  for (const auto& s : shadows)
    for (const auto& ev : s) n += ev.shadowed ? 1u : 0u;
  return n;
}

CoupledEnsemble build_coupled_flights(std::vector<LorentzPath> paths,
                                      const std::vector<ClockSchedule>& clocks,
                                      double rate, double T, double r) {
  const int n = static_cast<int>(paths.size());
  require(static_cast<int>(clocks.size()) == n, Error::Code::kInvalidArgument,
          "one clock schedule per trajectory required");

  CoupledEnsemble ens;
  ens.horizon = T;
  ens.radius = r;
  ens.rate = rate;

  std::vector<PolyPath> polys;
  polys.reserve(paths.size());
  for (const auto& p : paths) polys.push_back(to_poly(p));
  const PathTube xtube(std::move(polys));

  // Freshness indicators and sigma1.
  ens.freshness.resize(n);
  for (int j = 0; j < n; ++j) {
    const auto& evs = paths[j].events;
    ens.freshness[j].reserve(evs.size());
    for (std::size_t kk = 0; kk < evs.size(); ++kk) {
      const bool seen = tube_seen(xtube, evs[kk].centre, evs[kk].tau, j, r);
      ens.freshness[j].push_back(
          {j, static_cast<int>(kk) + 1, !seen, evs[kk].centre});
      if (seen) ens.times.sigma1 = std::min(ens.times.sigma1, evs[kk].tau);
    }
  }

  // Shadow indicators at the auxiliary clock times and sigma2.
  ens.shadows.resize(n);
  for (int j = 0; j < n; ++j) {
    const auto& sched = clocks[j];
    ens.shadows[j].reserve(sched.times.size());
    for (std::size_t l = 0; l < sched.times.size(); ++l) {
      const double time = sched.times[l];
      const Vec3& prop = sched.proposals[l];
      const Vec3 vcur = paths[j].velocity(time);
      bool shadowed = false;
      const Vec3 diff = prop - vcur;
      if (diff.norm() > 0.0) {
        const Vec3 centre = paths[j].position(time) + diff * (r / diff.norm());
        shadowed = tube_seen(xtube, centre, time, j, r);
      }
      ens.shadows[j].push_back(
          {j, static_cast<int>(l), time, prop, shadowed});
      if (shadowed) ens.times.sigma2 = std::min(ens.times.sigma2, time);
    }
  }

  // Velocity process U_j: adopt fresh Lorentz scatterings, adopt shadowed
  // proposals, constant in between. While a trajectory is still identical to
  // its Lorentz partner, adopted event positions are bit-copies of the
  // Lorentz ones.
  ens.flights.resize(n);
  for (int j = 0; j < n; ++j) {
    const auto& evs = paths[j].events;
    const auto& sched = clocks[j];
    FlightPath& fp = ens.flights[j];
    fp.v0 = paths[j].v0;
    fp.rate = rate;
    fp.horizon = T;

    double y_t = 0.0;
    Vec3 y_pos{};
    Vec3 u = paths[j].v0;
    bool identical = true;

    std::size_t ie = 0, ic = 0;
    while (ie < evs.size() || ic < sched.times.size()) {
      const bool take_ev =
          ic >= sched.times.size() ||
          (ie < evs.size() && evs[ie].tau < sched.times[ic]);
      if (take_ev) {
        const CollisionEvent& e = evs[ie];
        const bool fresh = ens.freshness[j][ie].fresh;
        if (fresh) {
          const Vec3 u_new = e.v_post;
          if (!(u_new == u)) {
            const Vec3 pos = identical ? e.pos : y_pos + u * (e.tau - y_t);
            fp.events.push_back(FlightEvent{e.tau, pos, u, u_new});
            y_pos = pos;
            y_t = e.tau;
            u = u_new;
          }
        } else {
          identical = false;  // Lorentz turns, the flight does not
        }
        ++ie;
      } else {
        const double time = sched.times[ic];
        if (ens.shadows[j][ic].shadowed) {
          const Vec3 u_new = sched.proposals[ic];
          if (!(u_new == u)) {
            const Vec3 pos = y_pos + u * (time - y_t);
            fp.events.push_back(FlightEvent{time, pos, u, u_new});
            y_pos = pos;
            y_t = time;
            u = u_new;
            identical = false;  // the flight turns, Lorentz does not
          }
        }
        ++ic;
      }
    }
  }

  const MismatchTimes from_flights =
      mismatch_times_from_flights(ens.flights, r, T);
  ens.times.sigma3 = from_flights.sigma3;
  ens.times.sigma4 = from_flights.sigma4;
  ens.times.sigma = from_flights.sigma;

  ens.lorentz = std::move(paths);
  return ens;
}

CoupledEnsemble build_coupled_flights(std::vector<LorentzPath> paths,
                                      std::uint64_t seed,
                                      std::uint64_t replica, double rate,
                                      double T, double r) {
  std::vector<ClockSchedule> clocks;
  clocks.reserve(paths.size());
  for (std::size_t j = 0; j < paths.size(); ++j) {
    Stream s = make_stream(seed, Domain::kClock, replica, j);
    std::vector<double> taus;
    taus.reserve(paths[j].events.size());
    for (const auto& e : paths[j].events) taus.push_back(e.tau);
    clocks.push_back(make_clock_schedule(s, rate, T, taus));
  }
  return build_coupled_flights(std::move(paths), clocks, rate, T, r);
}

MismatchTimes mismatch_times_from_flights(
    const std::vector<FlightPath>& flights, double r, double T) {
  MismatchTimes out;
  const int n = static_cast<int>(flights.size());

  std::vector<PolyPath> polys;
  polys.reserve(flights.size());
  for (const auto& f : flights) polys.push_back(to_poly(f));
  const PathTube ytube(std::move(polys));

  // sigma4: first scattering whose virtual centre lies inside the r-tube of
  // the past flight paths.
  struct Scatter {
    double theta;
    int traj;
    Vec3 centre;
  };
  std::vector<Scatter> scatters;
  for (int i = 0; i < n; ++i)
    for (const auto& e : flights[i].events)
      scatters.push_back({e.theta, i, virtual_centre(e, r)});
  std::sort(scatters.begin(), scatters.end(),
            [](const Scatter& a, const Scatter& b) { return a.theta < b.theta; });
  for (const Scatter& s : scatters) {
    if (tube_seen(ytube, s.centre, s.theta, s.traj, r)) {
      out.sigma4 = s.theta;
      break;
    }
  }

  // sigma3: first time a flight enters the r-ball of an earlier virtual
  // centre. Centres are chunked with AABBs for pruning.
  struct CentreChunk {
    Vec3 lo, hi;
    int first, last;
    double theta_min;
  };
  std::vector<CentreChunk> cchunks;
  for (int s = 0; s < static_cast<int>(scatters.size()); s += kChunkSegs) {
    CentreChunk c;
    c.first = s;
    c.last = std::min(s + kChunkSegs, static_cast<int>(scatters.size()));
    c.theta_min = scatters[s].theta;
    Vec3 lo = scatters[s].centre, hi = scatters[s].centre;
    for (int i = s; i < c.last; ++i) {
      const Vec3& q = scatters[i].centre;
      lo.x = std::min(lo.x, q.x); lo.y = std::min(lo.y, q.y);
      lo.z = std::min(lo.z, q.z);
      hi.x = std::max(hi.x, q.x); hi.y = std::max(hi.y, q.y);
      hi.z = std::max(hi.z, q.z);
    }
    c.lo = lo;
    c.hi = hi;
    cchunks.push_back(c);
  }

  double best = kInf;
  for (int j = 0; j < n; ++j) {
    const PolyPath& poly = ytube.path(j);
    const int nseg = static_cast<int>(poly.t.size()) - 1;
    for (int s = 0; s < nseg; ++s) {
      const double t0 = poly.t[s];
      if (t0 >= best) break;
      const double t1 = poly.t[s + 1];
      const Vec3& a = poly.p[s];
      const Vec3& b = poly.p[s + 1];
      const double len = t1 - t0;
      if (len <= 0.0) continue;
      const Vec3 dir = (b - a) / (b - a).norm();
      const Vec3 mid = (a + b) * 0.5;
      const double half = 0.5 * (b - a).norm();
      for (const CentreChunk& ch : cchunks) {
        if (ch.theta_min >= t1 || ch.theta_min >= best) continue;
        const double bd = std::sqrt(point_box_dist2(mid, ch.lo, ch.hi));
        if (bd - half > r) continue;
        for (int ci = ch.first; ci < ch.last; ++ci) {
          const Scatter& sc = scatters[ci];
          if (sc.theta >= t1) continue;
          const Vec3 m = sc.centre - a;
          const double proj = dir.dot(m);
          const double disc = proj * proj - (m.norm2() - r * r);
          if (disc < kTangencyTol * r * r) continue;
          const double sq = std::sqrt(disc);
          const double lo = std::max(proj - sq, 0.0);
          const double hi = std::min(proj + sq, len);
          if (lo >= hi) continue;
          const double cand = std::max(t0 + lo, sc.theta);
          if (cand < t0 + hi && cand <= T && cand < best) best = cand;
        }
      }
    }
  }
  out.sigma3 = best;
  out.sigma = std::min(out.sigma3, out.sigma4);
  return out;
}

}  // namespace lgas
