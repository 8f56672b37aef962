#include "lgas/environment.hpp"

#include <algorithm>
#include <cmath>

#include "lgas/errors.hpp"

namespace lgas {

namespace {

constexpr double kUnitTol = 1e-12;

void require_unit(const Vec3& dir) {
  require(std::abs(dir.norm() - 1.0) <= kUnitTol, Error::Code::kInvalidArgument,
          "direction must be a unit vector");
}

inline std::uint64_t pack_cell(const CellIndex& c) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(c.x));
  h = mix64(h ^ static_cast<std::uint64_t>(c.y));
  return mix64(h ^ static_cast<std::uint64_t>(c.z));
}

// Small ring of recently probed neighbour cells; duplicates past its reach
// are tolerated by all callers (hit aggregation is idempotent).
struct RecentCells {
  std::array<std::uint64_t, 16> slot{};
  int n = 0;
  bool seen(std::uint64_t id) {
    for (int i = 0; i < 16; ++i)
      if (slot[i] == id) return true;
    slot[n & 15] = id;
    ++n;
    return false;
  }
};

}  // namespace

BasePointProcess::BasePointProcess(std::uint64_t seed, double rho,
                                   double cell_side, double world_radius)
    : seed_(seed), rho_(rho), cell_side_(cell_side),
      world_radius_(world_radius) {
  require(rho > 0.0, Error::Code::kInvalidArgument, "rho must be positive");
  require(cell_side > 0.0, Error::Code::kInvalidArgument,
          "cell_side must be positive");
  require(world_radius > 0.0, Error::Code::kInvalidArgument,
          "world_radius must be positive");
  mean_per_cell_ = rho_ * cell_side_ * cell_side_ * cell_side_;
}

bool BasePointProcess::cell_in_bounds(const CellIndex& c) const {
  const Vec3 lo{c.x * cell_side_, c.y * cell_side_, c.z * cell_side_};
  const Vec3 hi{lo.x + cell_side_, lo.y + cell_side_, lo.z + cell_side_};
  return point_box_dist2(Vec3{}, lo, hi) <= world_radius_ * world_radius_;
}

std::vector<Vec3> BasePointProcess::cell_points(const CellIndex& c) const {
  require(cell_in_bounds(c), Error::Code::kOutOfBounds,
          "cell outside world bounds");
  Stream s = make_stream(seed_, Domain::kPpp, static_cast<std::uint64_t>(c.x),
                         static_cast<std::uint64_t>(c.y),
                         static_cast<std::uint64_t>(c.z));
  const int n = s.poisson(mean_per_cell_);
  std::vector<Vec3> pts;
  pts.reserve(n);
  const Vec3 corner{c.x * cell_side_, c.y * cell_side_, c.z * cell_side_};
  for (int i = 0; i < n; ++i) {
    const double ux = s.next_double();
    const double uy = s.next_double();
    const double uz = s.next_double();
    pts.push_back(corner + Vec3{ux, uy, uz} * cell_side_);
  }
  return pts;
}

CellIndex BasePointProcess::cell_of(const Vec3& p) const {
  return {static_cast<std::int64_t>(std::floor(p.x / cell_side_)),
          static_cast<std::int64_t>(std::floor(p.y / cell_side_)),
          static_cast<std::int64_t>(std::floor(p.z / cell_side_))};
}

EnvironmentView::EnvironmentView(const BasePointProcess& base, double eps)
    : base_(base), eps_(eps) {
  require(eps > 0.0 && eps < 1.0, Error::Code::kInvalidArgument,
          "eps must lie in (0,1)");
  r_ = std::pow(eps, 1.5);  // d = 3
  r_base_ = r_ / eps_;
}

// Visits every candidate scatterer whose ball of radius r can touch the
// segment. Walks base-grid cells along the ray and additionally probes
// neighbour cells whenever the in-cell segment passes within r_base of a
// cell face (conservative per-axis test, so the enumerated superset is
// exact for detection purposes). per_candidate(centre, t_enter_base)
// returns false to stop the walk early.
template <typename Fn>
void EnvironmentView::traverse_tube(const Vec3& from, const Vec3& dir,
                                    double length, Fn&& per_candidate) const {
  const double side = base_.cell_side();
  const Vec3 bfrom = from / eps_;
  const double blen = length / eps_;
  const double rb = r_base_;

  CellIndex cell = base_.cell_of(bfrom);
  double t_max[3], t_delta[3];
  std::int64_t step[3];
  const double d[3] = {dir.x, dir.y, dir.z};
  const double f[3] = {bfrom.x, bfrom.y, bfrom.z};
  std::int64_t* cc[3] = {&cell.x, &cell.y, &cell.z};
  for (int a = 0; a < 3; ++a) {
    if (d[a] > 0.0) {
      step[a] = 1;
      t_max[a] = ((*cc[a] + 1) * side - f[a]) / d[a];
      t_delta[a] = side / d[a];
    } else if (d[a] < 0.0) {
      step[a] = -1;
      t_max[a] = (*cc[a] * side - f[a]) / d[a];
      t_delta[a] = -side / d[a];
    } else {
      step[a] = 0;
      t_max[a] = kInf;
      t_delta[a] = kInf;
    }
  }

  RecentCells recent;
  const std::int64_t max_steps =
      static_cast<std::int64_t>(3.0 * (blen / side + 4.0)) + 64;
  double t_prev = 0.0;
  auto probe = [&](const CellIndex& c) -> bool {
    for (const Vec3& q : base_.cell_points(c)) {
      const Vec3 centre = q * eps_;
      if (!accept(centre)) continue;
      if (!per_candidate(centre, t_prev)) return false;
    }
    return true;
  };

  for (std::int64_t it = 0; it < max_steps; ++it) {
    const double t_next =
        std::min(std::min(t_max[0], std::min(t_max[1], t_max[2])), blen);
    // Per-axis extent of the in-cell segment, for neighbour probing.
    int lo_off[3], hi_off[3];
    for (int a = 0; a < 3; ++a) {
      const double pa = f[a] + d[a] * t_prev;
      const double pb = f[a] + d[a] * t_next;
      const double lo_in = std::min(pa, pb);
      const double hi_in = std::max(pa, pb);
      const double cell_lo = *cc[a] * side;
      int k = 0;
      while (lo_in - cell_lo < rb - (k)*side) ++k;
      lo_off[a] = -k;
      k = 0;
      while ((cell_lo + side) - hi_in < rb - (k)*side) ++k;
      hi_off[a] = k;
    }
    for (int ox = lo_off[0]; ox <= hi_off[0]; ++ox)
      for (int oy = lo_off[1]; oy <= hi_off[1]; ++oy)
        for (int oz = lo_off[2]; oz <= hi_off[2]; ++oz) {
          const CellIndex c{cell.x + ox, cell.y + oy, cell.z + oz};
          if (ox == 0 && oy == 0 && oz == 0) {
            if (!probe(c)) return;
          } else {
            if (recent.seen(pack_cell(c))) continue;
            if (!probe(c)) return;
          }
        }
    if (t_next >= blen) return;
    // Advance across the nearest face.
    int axis = 0;
    if (t_max[1] < t_max[axis]) axis = 1;
    if (t_max[2] < t_max[axis]) axis = 2;
    *cc[axis] += step[axis];
    t_prev = t_next;
    t_max[axis] += t_delta[axis];
  }
  throw Error(Error::Code::kInconsistentState, "grid traversal overran");
}

std::optional<Hit> EnvironmentView::first_hit(const Vec3& pos, const Vec3& dir,
                                              double t_max,
                                              const Vec3* exclude) const {
  require_unit(dir);
  require(t_max >= 0.0, Error::Code::kInvalidArgument, "t_max must be >= 0");
  std::optional<Hit> best;
  // Once the walk is past the best entry by this base-length margin, no
  // earlier hit can appear.
  const double margin =
      2.0 * r_base_ + 2.0 * std::sqrt(3.0) * base_.cell_side();
  traverse_tube(pos, dir, t_max, [&](const Vec3& centre, double t_enter_base) {
    if (best && t_enter_base > best->entry / eps_ + margin) return false;
    if (exclude && centre == *exclude) return true;
    const auto e = ray_sphere_entry(pos, dir, centre, r_);
    if (e && *e <= t_max && (!best || *e < best->entry)) best = Hit{centre, *e};
    return true;
  });
  return best;
}

std::vector<Hit> EnvironmentView::scatterers_along(const Vec3& from,
                                                   const Vec3& dir,
                                                   double length) const {
  require_unit(dir);
  require(length >= 0.0, Error::Code::kInvalidArgument,
          "length must be >= 0");
  std::vector<Hit> hits;
  traverse_tube(from, dir, length, [&](const Vec3& centre, double) {
    const Vec3 m = centre - from;
    const double proj = dir.dot(m);
    const double disc = proj * proj - (m.norm2() - r_ * r_);
    if (disc < kTangencyTol * r_ * r_) return true;
    const double sq = std::sqrt(disc);
    const double t_in = proj - sq;
    const double t_out = proj + sq;
    if (t_out < 0.0 || t_in > length) return true;
    hits.push_back(Hit{centre, std::max(t_in, 0.0)});
    return true;
  });
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.entry != b.entry) return a.entry < b.entry;
    if (a.centre.x != b.centre.x) return a.centre.x < b.centre.x;
    if (a.centre.y != b.centre.y) return a.centre.y < b.centre.y;
    return a.centre.z < b.centre.z;
  });
  hits.erase(std::unique(hits.begin(), hits.end(),
                         [](const Hit& a, const Hit& b) {
                           return a.centre == b.centre;
                         }),
             hits.end());
  return hits;
}

std::vector<Vec3> EnvironmentView::centres_in_box(const Vec3& lo,
                                                  const Vec3& hi) const {
  const double side = base_.cell_side();
  const CellIndex clo = base_.cell_of(lo / eps_);
  const CellIndex chi = base_.cell_of(hi / eps_);
  std::vector<Vec3> out;
  for (std::int64_t cx = clo.x; cx <= chi.x; ++cx)
    for (std::int64_t cy = clo.y; cy <= chi.y; ++cy)
      for (std::int64_t cz = clo.z; cz <= chi.z; ++cz) {
        (void)side;
        for (const Vec3& q : base_.cell_points({cx, cy, cz})) {
          const Vec3 c = q * eps_;
          if (!accept(c)) continue;
          if (c.x < lo.x || c.x > hi.x || c.y < lo.y || c.y > hi.y ||
              c.z < lo.z || c.z > hi.z)
            continue;
          out.push_back(c);
        }
      }
  return out;
}

std::optional<Hit> FixtureEnvironment::first_hit(const Vec3& pos,
                                                 const Vec3& dir, double t_max,
                                                 const Vec3* exclude) const {
  require_unit(dir);
  std::optional<Hit> best;
  for (const Vec3& c : centres_) {
    if (exclude && c == *exclude) continue;
    const auto e = ray_sphere_entry(pos, dir, c, r_);
    if (e && *e <= t_max && (!best || *e < best->entry)) best = Hit{c, *e};
  }
  return best;
}

std::vector<Hit> FixtureEnvironment::scatterers_along(const Vec3& from,
                                                      const Vec3& dir,
                                                      double length) const {
  require_unit(dir);
  std::vector<Hit> hits;
  for (const Vec3& c : centres_) {
    const Vec3 m = c - from;
    const double proj = dir.dot(m);
    const double disc = proj * proj - (m.norm2() - r_ * r_);
    if (disc < kTangencyTol * r_ * r_) continue;
    const double sq = std::sqrt(disc);
    if (proj + sq < 0.0 || proj - sq > length) continue;
    hits.push_back(Hit{c, std::max(proj - sq, 0.0)});
  }
  std::sort(hits.begin(), hits.end(),
            [](const Hit& a, const Hit& b) { return a.entry < b.entry; });
  return hits;
}

std::vector<Vec3> FixtureEnvironment::centres_in_box(const Vec3& lo,
                                                     const Vec3& hi) const {
  std::vector<Vec3> out;
  for (const Vec3& c : centres_)
    if (c.x >= lo.x && c.x <= hi.x && c.y >= lo.y && c.y <= hi.y &&
        c.z >= lo.z && c.z <= hi.z)
      out.push_back(c);
  return out;
}

}  // namespace lgas
