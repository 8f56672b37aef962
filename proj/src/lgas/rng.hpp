#pragma once

#include <array>
#include <cstdint>

namespace lgas {

// Philox 4x32-10 counter block cipher (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3", SC 2011). Pure function of (counter, key):
// the backbone of every random stream in this project, so that any draw is
// reproducible from its coordinates alone, independent of evaluation order.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

// splitmix64 finalizer; bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

// A logical random stream: 96-bit stream id + 32-bit draw counter, keyed by
// the 64-bit run seed. Distinct (seed, id) pairs give independent streams.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t id_lo, std::uint64_t id_hi)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        id0_(static_cast<std::uint32_t>(id_lo)),
        id1_(static_cast<std::uint32_t>(id_lo >> 32)),
        id2_(static_cast<std::uint32_t>(id_hi)) {}

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  // Uniform on [0,1), 53-bit resolution.
  double next_double();

  // Uniform on [lo,hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  double exponential(double rate);

  // Standard normal, Box-Muller with cached spare.
  double normal();

  // Exact Poisson sample by CDF inversion (large means split into chunks).
  int poisson(double mean);

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint32_t id0_, id1_, id2_;
  std::uint32_t draw_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;
  double spare_normal_ = 0.0;
  bool have_spare_ = false;

  void refill();
  int poisson_small(double mean);
};

// Domain tags for stream derivation. Streams from different domains are
// independent by construction of the id hash.
enum class Domain : std::uint64_t {
  kPpp = 1,        // environment cells
  kVelocity = 2,   // initial velocities
  kClock = 3,      // auxiliary clocks + proposals of the coupling
  kFlight = 4,     // standalone flight sampling
  kWiener = 5,     // Brownian reference paths
  kEnvSeed = 6,    // per-replica environment sub-seeds
  kScratch = 7,    // tests
};

// 96-bit stream id from a domain tag and up to three indices.
struct StreamId {
  std::uint64_t lo;
  std::uint64_t hi;
};

StreamId derive_stream_id(Domain domain, std::uint64_t a = 0,
                          std::uint64_t b = 0, std::uint64_t c = 0);

inline Stream make_stream(std::uint64_t seed, Domain domain,
                          std::uint64_t a = 0, std::uint64_t b = 0,
                          std::uint64_t c = 0) {
  const StreamId id = derive_stream_id(domain, a, b, c);
  return Stream(seed, id.lo, id.hi);
}

// Deterministic sub-seed for annealed replicas (fresh environment each).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replica) {
  return mix64(seed ^ mix64(replica + 0x9e3779b97f4a7c15ULL));
}

}  // namespace lgas
