#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "charpath/numeric.hpp"

namespace charpath {

enum class Parity { even, odd };

enum class CharacterFilter { all, odd, even, nonprincipal };

/// Largest modulus for which a discrete-log table is built.
inline constexpr std::uint64_t kDefaultTableLimit = std::uint64_t{1} << 25;

bool is_prime(std::uint64_t n);

/// Arithmetic substrate for characters modulo an odd prime q.
///
/// Holds the smallest primitive root g and the table dlog[n] = k with
/// g^k = n (mod q). Immutable after construction apart from the lazily
/// filled phase tables and Gauss-sum cache, which are published once per
/// entry and are safe to read from several threads.
class PrimeContext {
 public:
  static constexpr std::uint32_t kNoLog = 0xFFFFFFFFu;

  std::uint32_t modulus() const { return q_; }
  std::uint32_t primitive_root() const { return g_; }
  /// Group order q - 1.
  std::uint32_t order() const { return q_ - 1; }

  /// dlog[n] for n in [1, q-1]; entry 0 is kNoLog.
  std::span<const std::uint32_t> dlog_table() const { return dlog_; }
  std::uint32_t dlog(std::uint64_t n) const { return dlog_[n % q_]; }

  /// e(k / (q-1)) for k in [0, q-2].
  cplx root(std::uint64_t k) const;
  /// e(n / q) for n in [0, q-1].
  cplx additive(std::uint64_t n) const;

  /// tau(chi_j), computed by direct summation on first request.
  cplx gauss_sum(std::uint32_t j) const;

 private:
  friend std::shared_ptr<const PrimeContext> build_context(std::uint64_t, std::uint64_t);
  friend std::shared_ptr<const PrimeContext> context_from_dlog(std::vector<std::uint32_t>);

  PrimeContext(std::uint32_t q, std::uint32_t g, std::vector<std::uint32_t> dlog);
  void ensure_tables() const;

  std::uint32_t q_;
  std::uint32_t g_;
  std::vector<std::uint32_t> dlog_;

  mutable std::once_flag tables_once_;
  mutable std::vector<cplx> roots_;
  mutable std::vector<cplx> additive_;
  std::unique_ptr<std::once_flag[]> gauss_once_;
  mutable std::vector<cplx> gauss_;
};

using ContextPtr = std::shared_ptr<const PrimeContext>;

/// Build the context for an odd prime q. Throws NotPrime for composite q or
/// q < 3 and Overflow when q exceeds `table_limit`.
ContextPtr build_context(std::uint64_t q, std::uint64_t table_limit = kDefaultTableLimit);

/// Rebuild a context from a raw dlog table (entry 0 = kNoLog). The table is
/// validated as a bijection onto powers of its generator. Throws CacheError.
ContextPtr context_from_dlog(std::vector<std::uint32_t> dlog);

/// chi_j(n) = e(j dlog[n] / (q-1)) for (n, q) = 1, and 0 otherwise.
class Character {
 public:
  Character(ContextPtr ctx, std::uint32_t index);

  std::uint32_t index() const { return j_; }
  const PrimeContext& context() const { return *ctx_; }
  const ContextPtr& context_ptr() const { return ctx_; }
  std::uint32_t modulus() const { return ctx_->modulus(); }

  bool is_principal() const { return j_ == 0; }
  Parity parity() const { return (j_ % 2 == 1) ? Parity::odd : Parity::even; }

  cplx operator()(std::int64_t n) const;
  /// Root-table index of chi(n) for n coprime to q.
  std::uint64_t phase_index(std::uint64_t n) const {
    return (static_cast<std::uint64_t>(j_) * ctx_->dlog(n)) % ctx_->order();
  }

  Character conjugate() const { return {ctx_, j_ == 0 ? 0 : ctx_->order() - j_}; }

 private:
  ContextPtr ctx_;
  std::uint32_t j_;
};

cplx char_value(const Character& chi, std::int64_t n);
Parity parity(const Character& chi);
cplx gauss_sum(const Character& chi);

/// Characters in increasing index order.
std::vector<Character> enumerate_characters(const ContextPtr& ctx, CharacterFilter filter);

// dlog cache files: little-endian uint32 array of length q, entry 0 = 0xFFFFFFFF.

std::filesystem::path dlog_cache_path(const std::filesystem::path& dir, std::uint64_t q);
void save_dlog_cache(const PrimeContext& ctx, const std::filesystem::path& dir);
/// Throws CacheError when the file is missing, truncated, or fails validation.
ContextPtr load_dlog_cache(std::uint64_t q, const std::filesystem::path& dir);

/// Load from `dir` when a valid cache exists, else build and write it. An
/// empty `dir` disables caching.
ContextPtr cached_context(std::uint64_t q, const std::filesystem::path& dir,
                          std::uint64_t table_limit = kDefaultTableLimit, bool* hit = nullptr);

}  // namespace charpath
