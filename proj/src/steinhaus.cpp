#include "charpath/steinhaus.hpp"

#include <bit>
#include <mutex>

#include <fmt/format.h>

#include "charpath/errors.hpp"

namespace charpath {

namespace {

constexpr std::uint64_t splitmix(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_counter(const SeedSpec& spec, std::uint64_t counter) {
  const std::uint64_t key = splitmix(splitmix(spec.seed) ^ (spec.stream * 0xD6E8FEB86659FD93ull));
  const std::uint64_t out = splitmix(splitmix(counter) ^ key);
  return splitmix(out ^ std::rotl(key, 32));
}

double mix_unit(const SeedSpec& spec, std::uint64_t counter) {
  return static_cast<double>(mix_counter(spec, counter) >> 11) * 0x1.0p-53;
}

std::vector<std::uint32_t> spf_sieve(std::size_t N) {
  if (N < 2) throw InvalidArgument("sieve size must be at least 2");
  if (N > std::size_t{0xFFFFFFFFu}) throw CapacityExceeded("sieve size exceeds 32-bit range");
  std::vector<std::uint32_t> spf(N + 1, 0);
  std::vector<std::uint32_t> primes;
  for (std::size_t i = 2; i <= N; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (std::uint32_t p : primes) {
      if (p > spf[i] || i * p > N) break;
      spf[i * p] = p;
    }
  }
  return spf;
}

SpfTable::SpfTable(std::size_t N) : spf_(spf_sieve(N)) {
  for (std::size_t n = 2; n < spf_.size(); ++n)
    if (spf_[n] == n) primes_.push_back(static_cast<std::uint32_t>(n));
}

std::uint32_t SpfTable::largest_prime_factor(std::size_t n) const {
  std::uint32_t best = 1;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    best = p;  // factors come out ascending
    n /= p;
  }
  return best;
}

std::vector<std::uint32_t> SpfTable::factor(std::size_t n) const {
  std::vector<std::uint32_t> out;
  while (n > 1) {
    out.push_back(spf_[n]);
    n /= spf_[n];
  }
  return out;
}

std::shared_ptr<const SpfTable> shared_spf_table(std::size_t N) {
  static std::mutex mutex;
  static std::shared_ptr<const SpfTable> largest;
  std::lock_guard lock(mutex);
  if (!largest || largest->limit() < N) largest = std::make_shared<const SpfTable>(std::max<std::size_t>(N, 2));
  return largest;
}

SteinhausSampler::SteinhausSampler(SeedSpec spec, std::size_t capacity)
    : spec_(spec), capacity_(capacity), spf_(shared_spf_table(capacity)),
      sign_((mix_counter(spec, kSignCounter) >> 63) ? -1 : 1) {}

cplx SteinhausSampler::phase(std::uint64_t p) const {
  if (p > capacity_) throw CapacityExceeded(fmt::format("prime {} exceeds sampler capacity {}", p, capacity_));
  if (!spf_->is_prime(p)) throw NotPrime(fmt::format("{} is not prime", p));
  return unit_phase(mix_unit(spec_, p));
}

cplx SteinhausSampler::value(std::int64_t n) const {
  if (n == 0) throw ZeroIndex("X_0 is undefined");
  const std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
  if (m > capacity_) throw CapacityExceeded(fmt::format("|n|={} exceeds sampler capacity {}", m, capacity_));
  const auto factors = spf_->factor(m);
  // Multiply from the largest prime down, matching the recurrence in values().
  cplx x{1.0, 0.0};
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) x = x * unit_phase(mix_unit(spec_, *it));
  return n < 0 ? static_cast<double>(sign_) * x : x;
}

std::vector<cplx> SteinhausSampler::values(std::size_t N) const {
  if (N > capacity_) throw CapacityExceeded(fmt::format("N={} exceeds sampler capacity {}", N, capacity_));
  std::vector<cplx> x(N + 1, cplx{0.0, 0.0});
  if (N == 0) return x;
  x[1] = {1.0, 0.0};
  for (std::size_t k = 2; k <= N; ++k) {
    const std::uint32_t p = (*spf_)[k];
    const cplx xp = (p == k) ? unit_phase(mix_unit(spec_, p)) : x[p];
    x[k] = x[k / p] * xp;
  }
  return x;
}

SteinhausSampler SteinhausSampler::fix_sign(int s) const {
  if (s != 1 && s != -1) throw InvalidArgument("X_{-1} must be fixed to +1 or -1");
  SteinhausSampler copy = *this;
  copy.sign_ = s;
  return copy;
}

cplx SteinhausSampler::eta() const { return unit_phase(mix_unit(spec_, kEtaCounter)); }

}  // namespace charpath
