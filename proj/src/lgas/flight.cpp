#include "lgas/flight.hpp"

#include <algorithm>
#include <cmath>

#include "lgas/errors.hpp"

namespace lgas {

Vec3 virtual_centre(const FlightEvent& e, double r) {
  const Vec3 d = e.u_pre - e.u_post;
  const double n = d.norm();
  require(n > 0.0, Error::Code::kDegenerate,
          "virtual centre undefined for equal velocities");
  return e.pos + d * (r / n);
}

Vec3 FlightPath::position(double t) const {
  if (events.empty() || t < events.front().theta) return v0 * t;
  auto it = std::upper_bound(
      events.begin(), events.end(), t,
      [](double value, const FlightEvent& e) { return value < e.theta; });
  const FlightEvent& e = *(it - 1);
  return e.pos + e.u_post * (t - e.theta);
}

Vec3 FlightPath::velocity(double t) const {
  if (events.empty() || t < events.front().theta) return v0;
  auto it = std::upper_bound(
      events.begin(), events.end(), t,
      [](double value, const FlightEvent& e) { return value < e.theta; });
  return (it - 1)->u_post;
}

Vec3 sample_uniform_sphere(Stream& stream) {
  // Archimedes: z uniform on [-1,1], azimuth uniform.
  const double z = 1.0 - 2.0 * stream.next_double();
  const double phi = 2.0 * M_PI * stream.next_double();
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

FlightPath sample_flight(Stream& stream, double rate, const Vec3& v0,
                         double T) {
  require(rate > 0.0 && T > 0.0, Error::Code::kInvalidArgument,
          "rate and horizon must be positive");
  FlightPath path;
  path.v0 = v0;
  path.rate = rate;
  path.horizon = T;
  double t = 0.0;
  Vec3 pos{};
  Vec3 u = v0;
  for (;;) {
    const double gap = stream.exponential(rate);
    if (t + gap >= T) break;
    t += gap;
    pos += u * gap;
    const Vec3 u_new = sample_uniform_sphere(stream);
    path.events.push_back(FlightEvent{t, pos, u, u_new});
    u = u_new;
  }
  return path;
}

double flight_covariance(double rate, double T, int d) {
  require(rate > 0.0 && T > 0.0 && d >= 2, Error::Code::kInvalidArgument,
          "flight_covariance needs rate > 0, T > 0, d >= 2");
  const double x = rate * T;
  // x - 1 + e^{-x} without cancellation for small x.
  const double core = x + std::expm1(-x);
  return 2.0 / (d * rate * rate) * core;
}

}  // namespace lgas
