#pragma once

#include <optional>
#include <vector>

#include "lgas/environment.hpp"
#include "lgas/geom.hpp"

namespace lgas {

struct CollisionEvent {
  double tau;    // collision time
  Vec3 pos;      // particle position at the collision
  Vec3 v_pre;    // incoming unit velocity
  Vec3 v_post;   // outgoing unit velocity
  Vec3 centre;   // centre of the scatterer hit
};

// Piecewise-linear unit-speed trajectory started at the origin. Evaluation
// anchors on the last event at or before t, so event positions are
// reproduced bit-exactly.
struct LorentzPath {
  Vec3 v0;
  double horizon = 0.0;
  std::vector<CollisionEvent> events;

  Vec3 position(double t) const;
  Vec3 velocity(double t) const;  // cadlag
};

// Specular reflection of v about a unit outward normal. Requires v·n < 0.
Vec3 reflect(const Vec3& v, const Vec3& normal);

// Earliest collision within (0, t_max] along the ray, or nothing.
// `exclude` skips the sphere just left (same-centre guard). tau in the
// returned event is relative to `pos`.
std::optional<CollisionEvent> next_collision(const ScattererView& view,
                                             const Vec3& pos, const Vec3& v,
                                             double t_max,
                                             const Vec3* exclude = nullptr);

LorentzPath simulate_lorentz(const ScattererView& view, const Vec3& v0,
                             double T);

}  // namespace lgas
