#pragma once

#include <vector>

#include "lgas/geom.hpp"
#include "lgas/rng.hpp"

namespace lgas {

struct FlightEvent {
  double theta;  // scattering time
  Vec3 pos;      // Y at the scattering
  Vec3 u_pre;    // incoming unit velocity
  Vec3 u_post;   // outgoing unit velocity
};

// Centre of the sphere of radius r that would have caused the scattering.
Vec3 virtual_centre(const FlightEvent& e, double r);

// Markovian random flight: piecewise-linear unit-speed path, exponential
// flight times, uniform scattering. Same evaluation convention as
// LorentzPath.
struct FlightPath {
  Vec3 v0;
  double rate = 1.0;
  double horizon = 0.0;
  std::vector<FlightEvent> events;

  Vec3 position(double t) const;
  Vec3 velocity(double t) const;  // cadlag
};

Vec3 sample_uniform_sphere(Stream& stream);

FlightPath sample_flight(Stream& stream, double rate, const Vec3& v0,
                         double T);

// Exact per-coordinate variance of Y(T): (2/(d rate^2))(rate T - 1 + e^{-rate T}).
double flight_covariance(double rate, double T, int d = 3);

}  // namespace lgas
