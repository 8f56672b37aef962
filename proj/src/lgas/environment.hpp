#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lgas/geom.hpp"
#include "lgas/rng.hpp"

namespace lgas {

struct CellIndex {
  std::int64_t x = 0, y = 0, z = 0;
  bool operator==(const CellIndex&) const = default;
};

// Quenched unit-cell Poisson point process, realized lazily: the points of
// any cell are a pure function of (seed, cell) through a counter-based
// stream, so any traversal order sees the same environment. Base
// coordinates; views rescale.
class BasePointProcess {
 public:
  BasePointProcess(std::uint64_t seed, double rho, double cell_side,
                   double world_radius);

  std::uint64_t seed() const { return seed_; }
  double rho() const { return rho_; }
  double cell_side() const { return cell_side_; }
  double world_radius() const { return world_radius_; }

  // Free-space collision rate of a unit-speed ray against radius-r_eps
  // scatterers of the rescaled view: rho_eps * pi * r^2 = rho * pi under
  // Boltzmann-Grad scaling, independent of epsilon.
  double flight_rate() const { return rho_ * M_PI; }

  bool cell_in_bounds(const CellIndex& c) const;

  // Deterministic point list of one cell. Throws kOutOfBounds outside the
  // configured world.
  std::vector<Vec3> cell_points(const CellIndex& c) const;

  CellIndex cell_of(const Vec3& base_pos) const;

 private:
  std::uint64_t seed_;
  double rho_;
  double cell_side_;
  double world_radius_;
  double mean_per_cell_;
};

struct Hit {
  Vec3 centre;   // scatterer centre, rescaled coordinates
  double entry;  // ray parameter of first sphere crossing
};

// Read-only view of a scatterer field at one scale. Implemented by the
// rescaled Poisson view and by hand-placed fixtures.
class ScattererView {
 public:
  virtual ~ScattererView() = default;

  virtual double radius() const = 0;

  // Earliest sphere entry along a unit ray within (0, t_max], skipping the
  // scatterer centred at `exclude` if given. Entry exactly at 0 means the
  // start is inside a scatterer (reported as Hit{entry=0}; callers treat it
  // as an inconsistent state).
  virtual std::optional<Hit> first_hit(const Vec3& pos, const Vec3& dir,
                                       double t_max,
                                       const Vec3* exclude = nullptr) const = 0;

  // All scatterers within distance r of the segment, ordered by entry
  // parameter.
  virtual std::vector<Hit> scatterers_along(const Vec3& from, const Vec3& dir,
                                            double length) const = 0;

  // Centres inside an axis-aligned box, for dumps and test oracles.
  virtual std::vector<Vec3> centres_in_box(const Vec3& lo,
                                           const Vec3& hi) const = 0;
};

// The rescaled PPP view: scatterers of radius r = eps^{d/(d-1)} centred at
// eps*q for base points q, with centres within r of the origin excluded.
class EnvironmentView : public ScattererView {
 public:
  EnvironmentView(const BasePointProcess& base, double eps);

  double eps() const { return eps_; }
  double radius() const override { return r_; }
  const BasePointProcess& base() const { return base_; }

  std::optional<Hit> first_hit(const Vec3& pos, const Vec3& dir, double t_max,
                               const Vec3* exclude = nullptr) const override;
  std::vector<Hit> scatterers_along(const Vec3& from, const Vec3& dir,
                                    double length) const override;
  std::vector<Vec3> centres_in_box(const Vec3& lo,
                                   const Vec3& hi) const override;

 private:
  const BasePointProcess& base_;
  double eps_;
  double r_;       // scatterer radius, rescaled
  double r_base_;  // radius in base coordinates

  bool accept(const Vec3& centre) const { return centre.norm() > r_; }

  template <typename Fn>
  void traverse_tube(const Vec3& from, const Vec3& dir, double length,
                     Fn&& per_candidate) const;
};

// Explicit scatterer list; used by tests to make rare coupling branches
// deterministically reachable.
class FixtureEnvironment : public ScattererView {
 public:
  FixtureEnvironment(std::vector<Vec3> centres, double r)
      : centres_(std::move(centres)), r_(r) {}

  double radius() const override { return r_; }

  std::optional<Hit> first_hit(const Vec3& pos, const Vec3& dir, double t_max,
                               const Vec3* exclude = nullptr) const override;
  std::vector<Hit> scatterers_along(const Vec3& from, const Vec3& dir,
                                    double length) const override;
  std::vector<Vec3> centres_in_box(const Vec3& lo,
                                   const Vec3& hi) const override;

 private:
  std::vector<Vec3> centres_;
  double r_;
};

}  // namespace lgas
