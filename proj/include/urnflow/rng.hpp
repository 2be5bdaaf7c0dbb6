#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace urnflow {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Independent stream derived from (master seed, stream index).  Replicas of
// a Monte Carlo run each get their own stream, so results do not depend on
// scheduling order.
inline Rng derive_rng(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + stream * 0x9e3779b97f4a7c15ULL);
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  std::uint64_t c = splitmix64(s);
  std::seed_seq seq{static_cast<unsigned>(a), static_cast<unsigned>(a >> 32),
                    static_cast<unsigned>(b), static_cast<unsigned>(b >> 32),
                    static_cast<unsigned>(c), static_cast<unsigned>(c >> 32)};
  return Rng(seq);
}

// Named stream, used by the verification suites so that adding a check does
// not perturb the draws seen by the others.
inline Rng derive_rng(std::uint64_t seed, std::string_view name, std::uint64_t stream = 0) {
  return derive_rng(seed ^ fnv1a(name), stream);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline bool bernoulli(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01(rng) < p;
}

inline double gamma_draw(Rng& rng, double shape) {
  return std::gamma_distribution<double>(shape, 1.0)(rng);
}

inline double beta_draw(Rng& rng, double a, double b) {
  double x = gamma_draw(rng, a);
  double y = gamma_draw(rng, b);
  return x / (x + y);
}

inline long poisson_draw(Rng& rng, double mean) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<long>(mean)(rng);
}

}  // namespace urnflow
