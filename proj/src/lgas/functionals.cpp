#include "lgas/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "lgas/errors.hpp"
#include "lgas/parallel.hpp"

namespace lgas {

double PathFunctional::operator()(std::span<const Vec3> vertices) const {
  require(!vertices.empty(), Error::Code::kInvalidArgument, "empty path");
  switch (kind) {
    case Kind::kCappedSupNorm: {
      double s = 0.0;
      for (const Vec3& v : vertices) s = std::max(s, v.norm());
      return std::min(s, cap);
    }
    case Kind::kEndpointRadial:
      return std::min(vertices.back().norm(), cap);
    case Kind::kEndpointGaussian:
      return std::exp(-0.5 * vertices.back().norm2());
    case Kind::kCappedCoordMax: {
      double s = -kInf;
      for (const Vec3& v : vertices) {
        const double c = coord == 0 ? v.x : (coord == 1 ? v.y : v.z);
        s = std::max(s, c);
      }
      return std::min(s, cap);
    }
  }
  return 0.0;
}

const std::vector<PathFunctional>& functional_dictionary() {
  static const std::vector<PathFunctional> dict = {
      {PathFunctional::Kind::kCappedSupNorm, 1.0, 0, "sup_norm_cap1"},
      {PathFunctional::Kind::kCappedSupNorm, 2.0, 0, "sup_norm_cap2"},
      {PathFunctional::Kind::kEndpointRadial, 2.0, 0, "endpoint_radial_cap2"},
      {PathFunctional::Kind::kEndpointGaussian, 1.0, 0, "endpoint_gaussian"},
      {PathFunctional::Kind::kCappedCoordMax, 1.5, 2, "running_max_z_cap1.5"},
      {PathFunctional::Kind::kCappedCoordMax, 1.0, 0, "running_max_x_cap1"},
  };
  return dict;
}

namespace {

struct WienerKey {
  std::uint64_t seed;
  double rate;
  int paths;
  int steps;
  std::size_t n_fn;
  auto operator<=>(const WienerKey&) const = default;
};

std::mutex g_wiener_mutex;
std::map<WienerKey, std::vector<FunctionalEstimate>> g_wiener_cache;

}  // namespace

std::vector<FunctionalEstimate> wiener_reference(
    std::uint64_t seed, double rate,
    const std::vector<PathFunctional>& functionals, int paths, int steps,
    int threads) {
  require(paths > 1 && steps > 0 && rate > 0.0, Error::Code::kInvalidArgument,
          "bad wiener_reference parameters");
  const WienerKey key{seed, rate, paths, steps, functionals.size()};
  {
    std::lock_guard<std::mutex> lk(g_wiener_mutex);
    auto it = g_wiener_cache.find(key);
    if (it != g_wiener_cache.end()) return it->second;
  }

  const double var_per_step = 2.0 / (3.0 * rate) / steps;
  const double sd = std::sqrt(var_per_step);
  const std::size_t nf = functionals.size();

  std::vector<double> sums(static_cast<std::size_t>(paths) * nf, 0.0);
  parallel_for(paths, threads, [&](std::int64_t p) {
    Stream s = make_stream(seed, Domain::kWiener, static_cast<std::uint64_t>(p));
    std::vector<Vec3> verts(steps + 1);
    verts[0] = Vec3{};
    for (int i = 1; i <= steps; ++i)
      verts[i] = verts[i - 1] +
                 Vec3{sd * s.normal(), sd * s.normal(), sd * s.normal()};
    for (std::size_t f = 0; f < nf; ++f)
      sums[static_cast<std::size_t>(p) * nf + f] = functionals[f](verts);
  });

  std::vector<FunctionalEstimate> out(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    double mean = 0.0;
    for (int p = 0; p < paths; ++p)
      mean += sums[static_cast<std::size_t>(p) * nf + f];
    mean /= paths;
    double ss = 0.0;
    for (int p = 0; p < paths; ++p) {
      const double d = sums[static_cast<std::size_t>(p) * nf + f] - mean;
      ss += d * d;
    }
    out[f].mean = mean;
    out[f].std_error = std::sqrt(ss / (paths - 1) / paths);
  }

  std::lock_guard<std::mutex> lk(g_wiener_mutex);
  g_wiener_cache.emplace(key, out);
  return out;
}

}  // namespace lgas
