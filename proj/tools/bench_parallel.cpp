// Compares the serial reference loop with the OpenMP kernel on the two
// replica-parallel workloads: coupled Lorentz/flight replicas and Brownian
// reference paths. Verifies bit-identical results across thread counts.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <vector>

#include "lgas/functionals.hpp"
#include "lgas/parallel.hpp"
#include "lgas/statistics.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::uint64_t checksum(const std::vector<lgas::ReplicaRecord>& recs) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& r : recs) {
    const double vals[3] = {r.times.sigma, r.w,
                            static_cast<double>(r.lorentz_events)};
    for (double v : vals) {
      std::uint64_t bits;
      static_assert(sizeof bits == sizeof v);
      __builtin_memcpy(&bits, &v, sizeof bits);
      h = (h ^ bits) * 0x100000001b3ULL;
    }
  }
  return h;
}

}  // namespace

int main() {
  const int max_threads = lgas::default_threads();
  std::printf("replica kernel: mismatch eps=0.05 T=20 N=2, 400 replicas\n");

  lgas::MismatchParams params;
  params.env.seed = 42;
  params.eps = 0.05;
  params.T = 20.0;
  params.N = 2;
  params.velocities = lgas::fan_velocities(2, 0.5);

  std::uint64_t ref_sum = 0;
  double t_serial = 0.0;
  for (int threads : {1, 2, max_threads}) {
    params.threads = threads;
    const auto t0 = Clock::now();
    const auto res = lgas::estimate_mismatch_probability(params, 400);
    const double dt = seconds_since(t0);
    const std::uint64_t sum = checksum(res.records);
    if (threads == 1) {
      ref_sum = sum;
      t_serial = dt;
    }
    std::printf("  threads=%2d  %7.3f s  speedup %.2fx  checksum %016" PRIx64
                "  %s\n",
                threads, dt, t_serial / dt, sum,
                sum == ref_sum ? "match" : "MISMATCH");
  }

  std::printf("brownian kernel: 20000 paths x 1000 steps, capped sup norm\n");
  const auto& dict = lgas::functional_dictionary();
  const int paths = 20000, steps = 1000;
  const double sd = std::sqrt(2.0 / 3.0 / steps);
  double ref_mean = 0.0;
  t_serial = 0.0;
  for (int threads : {1, 2, max_threads}) {
    std::vector<double> vals(paths);
    const auto t0 = Clock::now();
    lgas::parallel_for(paths, threads, [&](std::int64_t p) {
      lgas::Stream s = lgas::make_stream(7, lgas::Domain::kWiener,
                                         static_cast<std::uint64_t>(p));
      std::vector<lgas::Vec3> verts(steps + 1);
      for (int i = 1; i <= steps; ++i)
        verts[i] = verts[i - 1] + lgas::Vec3{sd * s.normal(), sd * s.normal(),
                                             sd * s.normal()};
      vals[p] = dict[0](verts);
    });
    const double dt = seconds_since(t0);
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= paths;
    if (threads == 1) {
      ref_mean = mean;
      t_serial = dt;
    }
    std::printf("  threads=%2d  %7.3f s  speedup %.2fx  mean=%.12g  %s\n",
                threads, dt, t_serial / dt, mean,
                mean == ref_mean ? "match" : "MISMATCH");
  }
  return 0;
}
