#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "charpath/numeric.hpp"

namespace charpath {

/// (seed, stream) fully determines every phase a sampler produces.
struct SeedSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Identifier of the keyed mixer below; recorded in every manifest.
inline constexpr const char* kMixerId = "splitmix64-keyed-v1";

/// Counter reserved for the sign of X_{-1}.
inline constexpr std::uint64_t kSignCounter = 0;
/// Counter reserved for the global phase eta.
inline constexpr std::uint64_t kEtaCounter = 1;

inline constexpr std::size_t kDefaultCapacity = 2'000'000;

/// Keyed 64-bit mixer: a pure function of (seed, stream, counter).
///
///   key = f(f(seed) ^ (stream * 0xD6E8FEB86659FD93))
///   out = f(f(counter) ^ key) then f(out ^ rotl(key, 32))
///
/// where f is the splitmix64 step (add golden gamma, then the finaliser).
/// Changing this function changes every sampled value; bump kMixerId.
std::uint64_t mix_counter(const SeedSpec& spec, std::uint64_t counter);

/// Top 53 bits of mix_counter scaled to [0, 1).
double mix_unit(const SeedSpec& spec, std::uint64_t counter);

/// table[n] = smallest prime factor of n for 2 <= n <= N (0 for n < 2).
std::vector<std::uint32_t> spf_sieve(std::size_t N);

/// Smallest-prime-factor table with factorisation helpers.
class SpfTable {
 public:
  explicit SpfTable(std::size_t N);

  std::size_t limit() const { return spf_.size() - 1; }
  std::uint32_t operator[](std::size_t n) const { return spf_[n]; }
  bool is_prime(std::size_t n) const { return n >= 2 && n <= limit() && spf_[n] == n; }
  /// P+(n), with P+(1) = 1.
  std::uint32_t largest_prime_factor(std::size_t n) const;
  /// Prime factors with multiplicity, ascending.
  std::vector<std::uint32_t> factor(std::size_t n) const;
  const std::vector<std::uint32_t>& primes() const { return primes_; }

 private:
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

/// Process-wide table covering at least [0, N]; reused across samplers.
std::shared_ptr<const SpfTable> shared_spf_table(std::size_t N);

/// Steinhaus random multiplicative function X_n.
///
/// X_p = e(u_p) with u_p = mix_unit(seed_spec, p), so every value depends
/// only on (seed, stream, p) and never on query order. X_{-1} is +1 or -1
/// from the top bit of the mixer at kSignCounter.
class SteinhausSampler {
 public:
  explicit SteinhausSampler(SeedSpec spec, std::size_t capacity = kDefaultCapacity);

  const SeedSpec& seed_spec() const { return spec_; }
  std::size_t capacity() const { return capacity_; }
  int sign_minus_one() const { return sign_; }

  /// X_p for a prime p <= capacity. Throws NotPrime / CapacityExceeded.
  cplx phase(std::uint64_t p) const;
  /// X_n for 1 <= |n| <= capacity. Throws ZeroIndex / CapacityExceeded.
  cplx value(std::int64_t n) const;
  /// X_1..X_N in slots 1..N (slot 0 is zero). Bitwise equal to value(n).
  std::vector<cplx> values(std::size_t N) const;

  /// Copy with X_{-1} pinned to s (+1 or -1).
  SteinhausSampler fix_sign(int s) const;

  /// Global phase eta for this (seed, stream), independent of every X_p.
  cplx eta() const;

  const SpfTable& spf() const { return *spf_; }

 private:
  SeedSpec spec_;
  std::size_t capacity_;
  std::shared_ptr<const SpfTable> spf_;
  int sign_;
};

}  // namespace charpath
