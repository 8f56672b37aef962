#include "lgas/rng.hpp"

#include <cmath>

namespace lgas {

namespace {

constexpr std::uint32_t kPhiloxW32A = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW32B = 0xBB67AE85u;
constexpr std::uint32_t kPhiloxM4x32A = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM4x32B = 0xCD9E8D57u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo,
                    std::uint32_t& hi) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  lo = static_cast<std::uint32_t>(p);
  hi = static_cast<std::uint32_t>(p >> 32);
}

inline void round_once(std::array<std::uint32_t, 4>& c,
                       const std::array<std::uint32_t, 2>& k) {
  std::uint32_t lo0, hi0, lo1, hi1;
  mulhilo(kPhiloxM4x32A, c[0], lo0, hi0);
  mulhilo(kPhiloxM4x32B, c[2], lo1, hi1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int i = 0; i < 10; ++i) {
    round_once(ctr, key);
    if (i < 9) {
      key[0] += kPhiloxW32A;
      key[1] += kPhiloxW32B;
    }
  }
  return ctr;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

StreamId derive_stream_id(Domain domain, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(domain));
  h = mix64(h ^ mix64(a));
  h = mix64(h ^ mix64(b));
  h = mix64(h ^ mix64(c));
  // Second, independent chain for the high word.
  std::uint64_t g = mix64(static_cast<std::uint64_t>(domain) ^ 0x5851f42d4c957f2dULL);
  g = mix64(g ^ mix64(a ^ 0x14057b7ef767814fULL));
  g = mix64(g ^ mix64(b ^ 0x27bb2ee687b0b0fdULL));
  g = mix64(g ^ mix64(c ^ 0xb504f32d4f086305ULL));
  return {h, g};
}

void Stream::refill() {
  buf_ = philox4x32({draw_, id0_, id1_, id2_}, key_);
  ++draw_;
  buf_pos_ = 0;
}

std::uint32_t Stream::next_u32() {
  if (buf_pos_ >= 4) refill();
  return buf_[buf_pos_++];
}

std::uint64_t Stream::next_u64() {
  const std::uint64_t lo = next_u32();
  const std::uint64_t hi = next_u32();
  return lo | (hi << 32);
}

double Stream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Stream::exponential(double rate) {
  // u in [0,1) so 1-u in (0,1]; log1p keeps precision near u=0.
  const double u = next_double();
  return -std::log1p(-u) / rate;
}

double Stream::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_normal_;
  }
  double u1 = next_double();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double u2 = next_double();
  const double m = std::sqrt(-2.0 * std::log(u1));
  const double two_pi_u2 = 2.0 * M_PI * u2;
  spare_normal_ = m * std::sin(two_pi_u2);
  have_spare_ = true;
  return m * std::cos(two_pi_u2);
}

int Stream::poisson_small(double mean) {
  const double u = next_double();
  double p = std::exp(-mean);
  double cdf = p;
  int k = 0;
  const int cap = static_cast<int>(mean + 40.0 * std::sqrt(mean) + 50.0);
  while (u > cdf && k < cap) {
    ++k;
    p *= mean / k;
    cdf += p;
  }
  return k;
}

int Stream::poisson(double mean) {
  // A sum of independent Poissons is Poisson, so large means are sampled
  // exactly as chunks small enough for CDF inversion.
  int total = 0;
  while (mean > 16.0) {
    total += poisson_small(16.0);
    mean -= 16.0;
  }
  return total + poisson_small(mean);
}

}  // namespace lgas
