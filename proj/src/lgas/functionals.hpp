#pragma once

#include <span>
#include <string>
#include <vector>

#include "lgas/geom.hpp"
#include "lgas/rng.hpp"

namespace lgas {

// Bounded continuous functionals of paths z in C([0,1], R^3), z(0) = 0.
// Paths are piecewise linear, so running sup/max statistics are exact
// functions of the vertex list (norms are convex along segments).
struct PathFunctional {
  enum class Kind {
    kCappedSupNorm,     // min(sup_t |z(t)|, cap)
    kEndpointRadial,    // min(|z(1)|, cap)
    kEndpointGaussian,  // exp(-|z(1)|^2 / 2)
    kCappedCoordMax,    // min(max_t z_coord(t), cap)
  };

  Kind kind;
  double cap;  // bound on |F|
  int coord;   // used by kCappedCoordMax
  std::string name;

  double operator()(std::span<const Vec3> vertices) const;
};

// The fixed 6-functional dictionary used by the Donsker and quenched suites.
const std::vector<PathFunctional>& functional_dictionary();

struct FunctionalEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte Carlo Wiener expectations of the dictionary: Brownian paths with
// per-coordinate diffusivity 2/(d*rate) on a uniform grid over [0,1].
// Deterministic given (seed, rate, paths, steps); results are cached
// in-process.
std::vector<FunctionalEstimate> wiener_reference(
    std::uint64_t seed, double rate,
    const std::vector<PathFunctional>& functionals, int paths = 100000,
    int steps = 1000, int threads = 0);

}  // namespace lgas
