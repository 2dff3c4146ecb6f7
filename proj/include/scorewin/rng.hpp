#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

// Seeded randomness with pinned sample sequences. The engine is
// std::mt19937_64 (fully specified by the standard); the distribution
// transforms are written out here because std:: distributions are
// implementation-defined and would break byte-identical reruns across
// standard libraries.
namespace scorewin::rng {

using Engine = std::mt19937_64;

// SplitMix64 finalizer.
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream `index` of a batch is seeded with mix(mix(base) + index), so
// replicate streams depend only on (base, index), never on thread layout.
inline std::uint64_t derive_stream_seed(std::uint64_t base, std::uint64_t index) {
  return mix(mix(base) + index);
}

inline Engine make_stream(std::uint64_t base, std::uint64_t index) {
  return Engine(derive_stream_seed(base, index));
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform_unit(Engine& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [lo, hi], both ends included.
inline std::int64_t uniform_int(Engine& g, std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(g());  // full 64-bit range
  const std::uint64_t reject_above = UINT64_MAX - UINT64_MAX % span;
  std::uint64_t x;
  do {
    x = g();
  } while (x >= reject_above);
  return lo + static_cast<std::int64_t>(x % span);
}

// Standard exponential by inversion.
inline double exponential_unit(Engine& g) {
  return -std::log(1.0 - uniform_unit(g));
}

// Gaussian via Box-Muller; every call consumes exactly two engine outputs
// (no cached spare), so sample positions in a stream are stable.
inline double normal(Engine& g, double mu, double sigma) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  const double u1 = 1.0 - uniform_unit(g);  // (0, 1]
  const double u2 = uniform_unit(g);
  return mu + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

// Dirichlet(1,...,1): dim standard exponentials normalized by their sum.
inline void dirichlet_uniform(Engine& g, double* out, int dim) {
  double total = 0.0;
  for (int i = 0; i < dim; ++i) {
    out[i] = exponential_unit(g);
    total += out[i];
  }
  for (int i = 0; i < dim; ++i) out[i] /= total;
}

inline std::vector<double> dirichlet_uniform(Engine& g, int dim) {
  std::vector<double> out(static_cast<std::size_t>(dim));
  dirichlet_uniform(g, out.data(), dim);
  return out;
}

}  // namespace scorewin::rng
