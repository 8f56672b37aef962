#include "lgas/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "lgas/errors.hpp"

namespace lgas {

namespace {
constexpr std::size_t kEventCap = 10'000'000;
}

Vec3 LorentzPath::position(double t) const {
  if (events.empty() || t < events.front().tau) return v0 * t;
  auto it = std::upper_bound(
      events.begin(), events.end(), t,
      [](double value, const CollisionEvent& e) { return value < e.tau; });
  const CollisionEvent& e = *(it - 1);
  return e.pos + e.v_post * (t - e.tau);
}

Vec3 LorentzPath::velocity(double t) const {
  if (events.empty() || t < events.front().tau) return v0;
  auto it = std::upper_bound(
      events.begin(), events.end(), t,
      [](double value, const CollisionEvent& e) { return value < e.tau; });
  return (it - 1)->v_post;
}

Vec3 reflect(const Vec3& v, const Vec3& normal) {
  require(std::abs(v.norm() - 1.0) <= 1e-12 &&
              std::abs(normal.norm() - 1.0) <= 1e-12,
          Error::Code::kInvalidArgument, "reflect expects unit vectors");
  const double vn = v.dot(normal);
  require(vn < 0.0, Error::Code::kDegenerate,
          "grazing or outgoing velocity, cannot reflect");
  return v - normal * (2.0 * vn);
}

std::optional<CollisionEvent> next_collision(const ScattererView& view,
                                             const Vec3& pos, const Vec3& v,
                                             double t_max,
                                             const Vec3* exclude) {
  const auto hit = view.first_hit(pos, v, t_max, exclude);
  if (!hit) return std::nullopt;
  require(hit->entry > 0.0, Error::Code::kInconsistentState,
          "collision search started inside a scatterer");
  const Vec3 x = pos + v * hit->entry;
  const Vec3 normal = (x - hit->centre).normalized();
  return CollisionEvent{hit->entry, x, v, reflect(v, normal), hit->centre};
}

LorentzPath simulate_lorentz(const ScattererView& view, const Vec3& v0,
                             double T) {
  require(std::abs(v0.norm() - 1.0) <= 1e-12, Error::Code::kInvalidArgument,
          "v0 must be a unit vector");
  require(T > 0.0, Error::Code::kInvalidArgument, "horizon must be positive");

  LorentzPath path;
  path.v0 = v0;
  path.horizon = T;

  const double r = view.radius();
  double t = 0.0;
  Vec3 pos{};
  Vec3 v = v0;
  Vec3 last_centre{};
  const Vec3* exclude = nullptr;

  while (t < T) {
    auto ev = next_collision(view, pos, v, T - t, exclude);
    if (!ev) break;
    ev->tau += t;
    path.events.push_back(*ev);
    require(path.events.size() < kEventCap, Error::Code::kRunaway,
            "event count overflow, runaway trajectory");
    t = ev->tau;
    v = ev->v_post;
    last_centre = ev->centre;
    exclude = &last_centre;
    // Nudge the next search origin off the sphere surface; stored event
    // positions stay on it.
    const Vec3 normal = (ev->pos - ev->centre).normalized();
    pos = ev->pos + normal * (1e-12 * r);
  }
  return path;
}

}  // namespace lgas
