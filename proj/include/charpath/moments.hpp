#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "charpath/dirichlet.hpp"
#include "charpath/paths.hpp"

namespace charpath {

/// The tuple (t, n, m, parity) indexing a joint moment
///   E prod_i F(t_i)^{n_i} conj(F(t_i))^{m_i}.
struct MomentSpec {
  std::vector<TimePoint> t;
  std::vector<std::uint32_t> n;
  std::vector<std::uint32_t> m;
  Parity parity = Parity::odd;

  std::size_t k() const { return t.size(); }
  std::uint32_t total_n() const;
  std::uint32_t total_m() const;
};

/// Throws InvalidArgument unless t is strictly increasing in [0, 1], the
/// three vectors share one length k >= 1, and |n| + |m| >= 1.
void validate(const MomentSpec& spec);

enum class MomentMethod { direct, sigma_formula, limit, fourier, full };

struct MomentResult {
  cplx value{0.0, 0.0};
  MomentMethod method = MomentMethod::direct;
  std::optional<std::uint64_t> truncation;
  double error_estimate = 0.0;
  std::optional<std::uint64_t> q;
};

std::string to_string(MomentMethod method);

// Divisor machinery -------------------------------------------------------

/// d_N(x): ordered N-tuples with product x. Throws Overflow past 2^64 - 1.
std::uint64_t divisor_dN(std::uint32_t N, std::uint64_t x);

/// d_{N1}(x1) d_{N2}(x2) <= d_{N1+N2}(x1 x2).
bool divisor_lemma_check(std::uint64_t x1, std::uint64_t x2, std::uint32_t N1, std::uint32_t N2);

/// Trigonometric weight of a single factor: 1 - cos(2 pi y t) for odd
/// parity, sin(2 pi y t) for even.
double moment_weight(std::uint64_t y, const TimePoint& t, Parity parity);

/// beta_{N,t}(x) = (1/x) sum_{y_1...y_N = x} prod_j w(y_j, t).
/// With `cap = q` every y_j <= q and the value is 0 when q | x.
double beta(std::uint32_t N, const TimePoint& t, std::uint64_t x, std::optional<std::uint64_t> cap,
            Parity parity);

/// B_{N,t}(x) = sum_{x_1...x_k = x} prod_i beta_{N_i,t_i}(x_i), with
/// x_i <= q^{N_i} and 0 for q | x when capped.
double calB(std::span<const std::uint32_t> N, std::span<const TimePoint> t, std::uint64_t x,
            std::optional<std::uint64_t> cap, Parity parity);

/// Uncapped beta_{N,t}(x) for x = 0..A (slot 0 unused), by Dirichlet powers.
std::vector<double> beta_table(std::uint32_t N, const TimePoint& t, std::uint64_t A, Parity parity);

/// Uncapped B_{N,t}(x) for x = 0..A.
std::vector<double> calB_table(std::span<const std::uint32_t> N, std::span<const TimePoint> t, std::uint64_t A,
                               Parity parity);

// Moments ------------------------------------------------------------------

/// (2/phi(q)) sum over characters of the given parity (principal excluded)
/// of prod_i f_chi(t_i)^{n_i} conj(f_chi(t_i))^{m_i}. Requires q >= 5.
MomentResult Mq_direct(const ContextPtr& ctx, const MomentSpec& spec);

/// Same average with f_chi replaced by its parity-reduced Fourier form
/// truncated at K = q - 1.
MomentResult Mq_fourier(const ContextPtr& ctx, const MomentSpec& spec);

/// Full double-sum expansion over a <= q^n, b <= q^m with capped B and the
/// character average of conj(chi)(a) chi(b) tau^n conj(tau)^m. Algebraically
/// equal to Mq_fourier. Guarded to q <= 11 and n + m <= 3 (TooLarge).
MomentResult Mq_full(const ContextPtr& ctx, const MomentSpec& spec);

struct SigmaTerms {
  double plus = 0.0;   // sum_{1<=a<q} B_n(a) B_m(a)
  double minus = 0.0;  // sum_{1<=a<q} B_n(a) B_m(q-a)
};

/// The two reduced sums with uncapped B. Throws ParityMismatch if |n| != |m|.
SigmaTerms sigma_terms(std::uint64_t q, const MomentSpec& spec);

/// pi^{-2n}(Sigma+ - Sigma-) for odd parity, pi^{-2n}(Sigma+ + Sigma-) for
/// even; error_estimate = (log q)^{2n} / sqrt(q).
MomentResult Mq_sigma(std::uint64_t q, const MomentSpec& spec);

/// Limiting moment pi^{-2n} sum_{a<=A} B_n(a) B_m(a); exactly 0 when
/// |n| != |m|. error_estimate is |partial(2A) - partial(A)|.
MomentResult M_limit(const MomentSpec& spec, std::uint64_t A);

// Exponential sums -----------------------------------------------------------

/// Direct sum of e((x_1+...+x_N)/q) over x_1...x_N = b (mod q).
/// Guarded to N <= 3 and q <= 101 (TooLarge).
cplx hyper_kloosterman(std::uint64_t q, std::uint32_t N, std::uint64_t b);

/// (2/phi(q)) sum_{chi(-1) = sigma} chi(a) tau(chi)^N over every character
/// of that parity, principal included.
cplx twisted_gauss_average(const ContextPtr& ctx, std::uint32_t N, std::uint64_t a, Parity sigma);

/// HK(a^{-1}) + sigma HK(-a^{-1}); equals twisted_gauss_average for N >= 1.
cplx twisted_gauss_average_kloosterman(std::uint64_t q, std::uint32_t N, std::uint64_t a, Parity sigma);

// Zeta and the divisor-square identity ----------------------------------------

/// Riemann zeta for real s > 1 by Euler-Maclaurin (16 direct terms, eight
/// Bernoulli corrections).
double riemann_zeta(double s);

struct RamanujanCheck {
  double partial = 0.0;        // sum_{n<=A} d(n)^2 / n^s
  double exact = 0.0;          // zeta(s)^4 / zeta(2s)
  double tail_estimate = 0.0;  // model of sum_{n>A}, from D(x) ~ c x log^3 x fitted at A
};

RamanujanCheck ramanujan_check(double s, std::uint64_t A);

}  // namespace charpath
