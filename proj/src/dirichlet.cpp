#include "charpath/dirichlet.hpp"

#include <fstream>

#include <fmt/format.h>

#include "charpath/errors.hpp"

namespace charpath {

namespace {

constexpr std::uint32_t kPhaseTableLimit = 1u << 20;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint32_t smallest_primitive_root(std::uint32_t q) {
  const auto factors = distinct_prime_factors(q - 1);
  for (std::uint64_t g = 2; g < q; ++g) {
    bool generator = true;
    for (auto p : factors) {
      if (powmod(g, (q - 1) / p, q) == 1) {
        generator = false;
        break;
      }
    }
    if (generator) return static_cast<std::uint32_t>(g);
  }
  return 1;  // unreachable for odd primes
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

PrimeContext::PrimeContext(std::uint32_t q, std::uint32_t g, std::vector<std::uint32_t> dlog)
    : q_(q), g_(g), dlog_(std::move(dlog)), gauss_once_(new std::once_flag[q - 1]), gauss_(q - 1) {}

void PrimeContext::ensure_tables() const {
  std::call_once(tables_once_, [this] {
    if (q_ > kPhaseTableLimit) return;
    roots_.resize(order());
    for (std::uint32_t k = 0; k < order(); ++k)
      roots_[k] = unit_phase(static_cast<double>(k) / static_cast<double>(order()));
    additive_.resize(q_);
    for (std::uint32_t n = 0; n < q_; ++n)
      additive_[n] = unit_phase(static_cast<double>(n) / static_cast<double>(q_));
  });
}

cplx PrimeContext::root(std::uint64_t k) const {
  ensure_tables();
  if (!roots_.empty()) return roots_[k];
  return unit_phase(static_cast<double>(k) / static_cast<double>(order()));
}

cplx PrimeContext::additive(std::uint64_t n) const {
  ensure_tables();
  if (!additive_.empty()) return additive_[n];
  return unit_phase(static_cast<double>(n) / static_cast<double>(q_));
}

cplx PrimeContext::gauss_sum(std::uint32_t j) const {
  if (j >= order()) throw InvalidArgument(fmt::format("character index {} out of range", j));
  std::call_once(gauss_once_[j], [this, j] {
    cplx acc{0.0, 0.0};
    for (std::uint32_t n = 1; n < q_; ++n) {
      const std::uint64_t k = (static_cast<std::uint64_t>(j) * dlog_[n]) % order();
      acc += root(k) * additive(n);
    }
    gauss_[j] = acc;
  });
  return gauss_[j];
}

ContextPtr build_context(std::uint64_t q, std::uint64_t table_limit) {
  if (q < 3 || !is_prime(q)) throw NotPrime("modulus must be an odd prime");
  if (q > table_limit)
    throw Overflow(fmt::format("modulus {} exceeds the table limit {}", q, table_limit));
  const auto q32 = static_cast<std::uint32_t>(q);
  const std::uint32_t g = smallest_primitive_root(q32);
  std::vector<std::uint32_t> dlog(q32, PrimeContext::kNoLog);
  std::uint64_t power = 1;
  for (std::uint32_t k = 0; k + 1 < q32; ++k) {
    dlog[power] = k;
    power = power * g % q32;
  }
  return ContextPtr(new PrimeContext(q32, g, std::move(dlog)));
}

ContextPtr context_from_dlog(std::vector<std::uint32_t> dlog) {
  const std::uint64_t q = dlog.size();
  if (q < 3 || !is_prime(q)) throw CacheError("dlog table length is not an odd prime");
  if (dlog[0] != PrimeContext::kNoLog) throw CacheError("dlog table entry 0 must be 0xFFFFFFFF");
  const auto q32 = static_cast<std::uint32_t>(q);
  const std::uint32_t g = smallest_primitive_root(q32);
  std::uint64_t power = 1;
  for (std::uint32_t k = 0; k + 1 < q32; ++k) {
    if (dlog[power] != k) throw CacheError(fmt::format("dlog table fails round-trip at n={}", power));
    power = power * g % q32;
  }
  return ContextPtr(new PrimeContext(q32, g, std::move(dlog)));
}

Character::Character(ContextPtr ctx, std::uint32_t index) : ctx_(std::move(ctx)), j_(index) {
  if (!ctx_) throw InvalidArgument("character needs a context");
  if (j_ >= ctx_->order())
    throw InvalidArgument(fmt::format("character index must lie in [0, {}]", ctx_->order() - 1));
}

cplx Character::operator()(std::int64_t n) const {
  const std::int64_t q = ctx_->modulus();
  std::int64_t r = n % q;
  if (r < 0) r += q;
  if (r == 0) return {0.0, 0.0};
  return ctx_->root(phase_index(static_cast<std::uint64_t>(r)));
}

cplx char_value(const Character& chi, std::int64_t n) { return chi(n); }

Parity parity(const Character& chi) { return chi.parity(); }

cplx gauss_sum(const Character& chi) { return chi.context().gauss_sum(chi.index()); }

std::vector<Character> enumerate_characters(const ContextPtr& ctx, CharacterFilter filter) {
  std::vector<Character> out;
  for (std::uint32_t j = 0; j < ctx->order(); ++j) {
    const bool odd = (j % 2 == 1);
    bool keep = true;
    switch (filter) {
      case CharacterFilter::all: break;
      case CharacterFilter::odd: keep = odd; break;
      case CharacterFilter::even: keep = !odd; break;
      case CharacterFilter::nonprincipal: keep = (j != 0); break;
    }
    if (keep) out.emplace_back(ctx, j);
  }
  return out;
}

std::filesystem::path dlog_cache_path(const std::filesystem::path& dir, std::uint64_t q) {
  return dir / fmt::format("q{}.dlog", q);
}

void save_dlog_cache(const PrimeContext& ctx, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto path = dlog_cache_path(dir, ctx.modulus());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError(fmt::format("cannot write {}", tmp.string()));
    for (std::uint32_t v : ctx.dlog_table()) {
      const unsigned char bytes[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                                      static_cast<unsigned char>(v >> 16),
                                      static_cast<unsigned char>(v >> 24)};
      out.write(reinterpret_cast<const char*>(bytes), 4);
    }
    if (!out) throw CacheError(fmt::format("short write to {}", tmp.string()));
  }
  std::filesystem::rename(tmp, path);
}

ContextPtr load_dlog_cache(std::uint64_t q, const std::filesystem::path& dir) {
  const auto path = dlog_cache_path(dir, q);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError(fmt::format("no cache file {}", path.string()));
  std::vector<std::uint32_t> dlog(q);
  for (auto& v : dlog) {
    unsigned char bytes[4];
    if (!in.read(reinterpret_cast<char*>(bytes), 4))
      throw CacheError(fmt::format("cache file {} is truncated", path.string()));
    v = std::uint32_t{bytes[0]} | (std::uint32_t{bytes[1]} << 8) | (std::uint32_t{bytes[2]} << 16) |
        (std::uint32_t{bytes[3]} << 24);
  }
  if (in.peek() != std::ifstream::traits_type::eof())
    throw CacheError(fmt::format("cache file {} has trailing data", path.string()));
  return context_from_dlog(std::move(dlog));
}

ContextPtr cached_context(std::uint64_t q, const std::filesystem::path& dir, std::uint64_t table_limit,
                          bool* hit) {
  if (hit) *hit = false;
  if (dir.empty()) return build_context(q, table_limit);
  if (q < 3 || !is_prime(q)) throw NotPrime("modulus must be an odd prime");
  if (q > table_limit)
    throw Overflow(fmt::format("modulus {} exceeds the table limit {}", q, table_limit));
  if (std::filesystem::exists(dlog_cache_path(dir, q))) {
    try {
      auto ctx = load_dlog_cache(q, dir);
      if (hit) *hit = true;
      return ctx;
    } catch (const CacheError&) {
      // Invalid file: rebuild and overwrite below.
    }
  }
  auto ctx = build_context(q, table_limit);
  save_dlog_cache(*ctx, dir);
  return ctx;
}

}  // namespace charpath
