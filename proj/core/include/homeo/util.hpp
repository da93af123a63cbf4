#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace homeo {

// Bad arguments: malformed graphs, out-of-range parameters, contract misuse.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Work refused because it would exceed a configured guard (never truncated
// silently).
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic sub-seed derivation: a master seed combined with stream tags
// (stage id, cell index, trial index, ...) so every cell/trial draws from an
// independent stream regardless of execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = splitmix64(master ^ splitmix64(a));
  s = splitmix64(s ^ splitmix64(b + 0x6a09e667f3bcc909ULL));
  s = splitmix64(s ^ splitmix64(c + 0xbb67ae8584caa73bULL));
  return s;
}

// Uniform integer in [0, m), m >= 1.
inline std::size_t rand_index(Rng& rng, std::size_t m) {
  return std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
}

inline int popcount64(std::uint64_t x) { return std::popcount(x); }

}  // namespace homeo
