#include "charpath/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "charpath/errors.hpp"

namespace charpath {

namespace {

std::vector<std::uint64_t> divisors(std::uint64_t x) {
  std::vector<std::uint64_t> small, large;
  for (std::uint64_t d = 1; d * d <= x; ++d) {
    if (x % d == 0) {
      small.push_back(d);
      if (d != x / d) large.push_back(x / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

std::vector<std::pair<std::uint64_t, std::uint32_t>> factorize(std::uint64_t x) {
  std::vector<std::pair<std::uint64_t, std::uint32_t>> out;
  for (std::uint64_t p = 2; p * p <= x; ++p) {
    if (x % p != 0) continue;
    std::uint32_t a = 0;
    while (x % p == 0) {
      x /= p;
      ++a;
    }
    out.emplace_back(p, a);
  }
  if (x > 1) out.emplace_back(x, 1);
  return out;
}

std::optional<std::uint64_t> checked_pow(std::uint64_t base, std::uint32_t exp) {
  unsigned __int128 r = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    r *= base;
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::nullopt;
  }
  return static_cast<std::uint64_t>(r);
}

// g_N(x) = sum over ordered y_1...y_N = x (each y_j <= cap) of prod w(y_j).
double weighted_factorisations(std::uint32_t N, const TimePoint& t, std::uint64_t x,
                               std::optional<std::uint64_t> cap, Parity parity) {
  if (N == 0) return x == 1 ? 1.0 : 0.0;
  double acc = 0.0;
  for (std::uint64_t d : divisors(x)) {
    if (cap && d > *cap) break;
    const double w = moment_weight(d, t, parity);
    if (w == 0.0) continue;
    acc += w * weighted_factorisations(N - 1, t, x / d, cap, parity);
  }
  return acc;
}

double calB_rec(std::span<const std::uint32_t> N, std::span<const TimePoint> t, std::uint64_t x,
                std::optional<std::uint64_t> cap, Parity parity) {
  if (N.empty()) return x == 1 ? 1.0 : 0.0;
  if (N.size() == 1) {
    if (cap) {
      const auto limit = checked_pow(*cap, N[0]);
      if (limit && x > *limit) return 0.0;
    }
    return beta(N[0], t[0], x, cap, parity);
  }
  std::optional<std::uint64_t> limit;
  if (cap) limit = checked_pow(*cap, N[0]);
  double acc = 0.0;
  for (std::uint64_t d : divisors(x)) {
    if (limit && d > *limit) break;
    const double b = beta(N[0], t[0], d, cap, parity);
    if (b == 0.0) continue;
    acc += b * calB_rec(N.subspan(1), t.subspan(1), x / d, cap, parity);
  }
  return acc;
}

std::vector<double> dirichlet_convolve(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t A = a.size() - 1;
  std::vector<double> c(A + 1, 0.0);
  for (std::size_t d = 1; d <= A; ++d) {
    if (a[d] == 0.0) continue;
    for (std::size_t e = 1; d * e <= A; ++e) c[d * e] += a[d] * b[e];
  }
  return c;
}

std::vector<double> dirichlet_unit(std::uint64_t A) {
  std::vector<double> u(A + 1, 0.0);
  if (A >= 1) u[1] = 1.0;
  return u;
}

/// Characters averaged in M_q: the parity class with the principal removed.
std::vector<Character> moment_family(const ContextPtr& ctx, Parity parity) {
  auto chars = enumerate_characters(ctx, parity == Parity::odd ? CharacterFilter::odd : CharacterFilter::even);
  std::erase_if(chars, [](const Character& c) { return c.is_principal(); });
  return chars;
}

cplx ipow(cplx z, std::uint32_t e) {
  cplx r{1.0, 0.0};
  for (std::uint32_t i = 0; i < e; ++i) r = r * z;
  return r;
}

cplx moment_product(std::span<const cplx> f, const MomentSpec& spec) {
  cplx acc{1.0, 0.0};
  for (std::size_t i = 0; i < spec.k(); ++i) acc = acc * (ipow(f[i], spec.n[i]) * ipow(std::conj(f[i]), spec.m[i]));
  return acc;
}

template <typename PathFn>
MomentResult character_average(const ContextPtr& ctx, const MomentSpec& spec, MomentMethod method, PathFn path) {
  validate(spec);
  if (ctx->modulus() < 5) throw InvalidArgument("moment averages need q >= 5");
  const auto family = moment_family(ctx, spec.parity);
  const auto terms = parallel_map<cplx>(family.size(), [&](std::size_t c) {
    std::vector<cplx> f(spec.k());
    for (std::size_t i = 0; i < spec.k(); ++i) f[i] = path(family[c], spec.t[i]);
    return moment_product(f, spec);
  });
  MomentResult r;
  r.value = tree_sum(terms) * (2.0 / static_cast<double>(ctx->order()));
  r.method = method;
  r.q = ctx->modulus();
  return r;
}

}  // namespace

std::uint32_t MomentSpec::total_n() const { return std::accumulate(n.begin(), n.end(), 0u); }
std::uint32_t MomentSpec::total_m() const { return std::accumulate(m.begin(), m.end(), 0u); }

void validate(const MomentSpec& spec) {
  if (spec.t.empty()) throw InvalidArgument("moment spec needs k >= 1 time points");
  if (spec.n.size() != spec.t.size() || spec.m.size() != spec.t.size())
    throw InvalidArgument(fmt::format("moment shape mismatch: k={} but |n|={} and |m|={} entries",
                                      spec.t.size(), spec.n.size(), spec.m.size()));
  for (std::size_t i = 0; i < spec.t.size(); ++i) {
    const double ti = spec.t[i].value;
    if (!(ti >= 0.0 && ti <= 1.0)) throw InvalidArgument(fmt::format("time {} outside [0, 1]", ti));
    if (i > 0 && !(ti > spec.t[i - 1].value)) throw InvalidArgument("moment times must be strictly increasing");
  }
  if (spec.total_n() + spec.total_m() == 0) throw InvalidArgument("moment spec needs |n| + |m| >= 1");
}

std::string to_string(MomentMethod method) {
  switch (method) {
    case MomentMethod::direct: return "direct";
    case MomentMethod::sigma_formula: return "sigma";
    case MomentMethod::limit: return "limit";
    case MomentMethod::fourier: return "fourier";
    case MomentMethod::full: return "full";
  }
  return "direct";
}

std::uint64_t divisor_dN(std::uint32_t N, std::uint64_t x) {
  if (x == 0) throw InvalidArgument("d_N(x) needs x >= 1");
  if (N == 0) return x == 1 ? 1 : 0;
  unsigned __int128 total = 1;
  for (auto [p, a] : factorize(x)) {
    // C(a + N - 1, N - 1) = C(a + N - 1, a), built incrementally to stay exact.
    unsigned __int128 c = 1;
    for (std::uint32_t i = 1; i <= a; ++i) {
      c = c * (N - 1 + i) / i;
      if (c > std::numeric_limits<std::uint64_t>::max()) throw Overflow("d_N(x) exceeds 64 bits");
    }
    total *= c;
    if (total > std::numeric_limits<std::uint64_t>::max()) throw Overflow("d_N(x) exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(total);
}

bool divisor_lemma_check(std::uint64_t x1, std::uint64_t x2, std::uint32_t N1, std::uint32_t N2) {
  const unsigned __int128 lhs = static_cast<unsigned __int128>(divisor_dN(N1, x1)) * divisor_dN(N2, x2);
  const unsigned __int128 product = static_cast<unsigned __int128>(x1) * x2;
  if (product > std::numeric_limits<std::uint64_t>::max()) throw Overflow("x1 * x2 exceeds 64 bits");
  return lhs <= divisor_dN(N1 + N2, static_cast<std::uint64_t>(product));
}

double moment_weight(std::uint64_t y, const TimePoint& t, Parity parity) {
  const cplx e = unit_phase(frac_at(y, t));
  return parity == Parity::odd ? 1.0 - e.real() : e.imag();
}

double beta(std::uint32_t N, const TimePoint& t, std::uint64_t x, std::optional<std::uint64_t> cap,
            Parity parity) {
  if (x == 0) throw InvalidArgument("beta needs x >= 1");
  if (cap && x % *cap == 0) return 0.0;
  return weighted_factorisations(N, t, x, cap, parity) / static_cast<double>(x);
}

double calB(std::span<const std::uint32_t> N, std::span<const TimePoint> t, std::uint64_t x,
            std::optional<std::uint64_t> cap, Parity parity) {
  if (N.size() != t.size()) throw InvalidArgument("calB needs one time per exponent");
  if (x == 0) throw InvalidArgument("calB needs x >= 1");
  if (cap && x % *cap == 0) return 0.0;
  return calB_rec(N, t, x, cap, parity);
}

std::vector<double> beta_table(std::uint32_t N, const TimePoint& t, std::uint64_t A, Parity parity) {
  std::vector<double> h(A + 1, 0.0);
  for (std::uint64_t y = 1; y <= A; ++y) h[y] = moment_weight(y, t, parity) / static_cast<double>(y);
  std::vector<double> out = dirichlet_unit(A);
  for (std::uint32_t i = 0; i < N; ++i) out = (i == 0) ? h : dirichlet_convolve(out, h);
  return out;
}

std::vector<double> calB_table(std::span<const std::uint32_t> N, std::span<const TimePoint> t, std::uint64_t A,
                               Parity parity) {
  if (N.size() != t.size()) throw InvalidArgument("calB needs one time per exponent");
  std::vector<double> out = dirichlet_unit(A);
  bool first = true;
  for (std::size_t i = 0; i < N.size(); ++i) {
    if (N[i] == 0) continue;
    auto b = beta_table(N[i], t[i], A, parity);
    out = first ? std::move(b) : dirichlet_convolve(out, b);
    first = false;
  }
  return out;
}

MomentResult Mq_direct(const ContextPtr& ctx, const MomentSpec& spec) {
  return character_average(ctx, spec, MomentMethod::direct,
                           [](const Character& chi, const TimePoint& t) { return path_value(chi, t); });
}

MomentResult Mq_fourier(const ContextPtr& ctx, const MomentSpec& spec) {
  const std::uint64_t K = ctx->modulus() - 1;
  auto r = character_average(ctx, spec, MomentMethod::fourier, [K](const Character& chi, const TimePoint& t) {
    return fourier_path_parity(chi, t, K);
  });
  r.truncation = K;
  return r;
}

MomentResult Mq_full(const ContextPtr& ctx, const MomentSpec& spec) {
  validate(spec);
  const std::uint64_t q = ctx->modulus();
  const std::uint32_t n = spec.total_n();
  const std::uint32_t m = spec.total_m();
  if (q > 11 || n + m > 3) throw TooLarge("full double-sum moment is limited to q <= 11 and n + m <= 3");
  if (q < 5) throw InvalidArgument("moment averages need q >= 5");

  const std::uint64_t a_max = *checked_pow(q, n);
  const std::uint64_t b_max = *checked_pow(q, m);
  std::vector<double> Bn(a_max + 1, 0.0), Bm(b_max + 1, 0.0);
  for (std::uint64_t a = 1; a <= a_max; ++a) Bn[a] = calB(spec.n, spec.t, a, q, spec.parity);
  for (std::uint64_t b = 1; b <= b_max; ++b) Bm[b] = calB(spec.m, spec.t, b, q, spec.parity);

  // Character average of conj(chi)(a) chi(b) tau^n conj(tau)^m for each pair
  // of residues (a mod q, b mod q).
  const auto family = moment_family(ctx, spec.parity);
  std::vector<cplx> avg(q * q, cplx{0.0, 0.0});
  for (std::uint64_t ra = 1; ra < q; ++ra) {
    for (std::uint64_t rb = 1; rb < q; ++rb) {
      cplx acc{0.0, 0.0};
      for (const auto& chi : family) {
        const cplx tau = gauss_sum(chi);
        acc += std::conj(chi(static_cast<std::int64_t>(ra))) * chi(static_cast<std::int64_t>(rb)) *
               ipow(tau, n) * ipow(std::conj(tau), m);
      }
      avg[ra * q + rb] = acc * (2.0 / static_cast<double>(q - 1));
    }
  }

  cplx total{0.0, 0.0};
  for (std::uint64_t a = 1; a <= a_max; ++a) {
    if (Bn[a] == 0.0) continue;
    for (std::uint64_t b = 1; b <= b_max; ++b) {
      if (Bm[b] == 0.0) continue;
      total += Bn[a] * Bm[b] * avg[(a % q) * q + (b % q)];
    }
  }
  const double scale = std::pow(std::numbers::pi * std::sqrt(static_cast<double>(q)), n + m);
  cplx prefactor{1.0 / scale, 0.0};
  if (spec.parity == Parity::odd) prefactor /= ipow(cplx{0.0, 1.0}, n) * ipow(cplx{0.0, -1.0}, m);

  MomentResult r;
  r.value = prefactor * total;
  r.method = MomentMethod::full;
  r.q = q;
  r.truncation = q - 1;
  return r;
}

SigmaTerms sigma_terms(std::uint64_t q, const MomentSpec& spec) {
  validate(spec);
  if (spec.total_n() != spec.total_m()) throw ParityMismatch("sigma formula requires |n| = |m|");
  if (q < 3 || !is_prime(q)) throw NotPrime("modulus must be an odd prime");
  const auto Bn = calB_table(spec.n, spec.t, q, spec.parity);
  const auto Bm = calB_table(spec.m, spec.t, q, spec.parity);
  SigmaTerms s;
  for (std::uint64_t a = 1; a < q; ++a) {
    s.plus += Bn[a] * Bm[a];
    s.minus += Bn[a] * Bm[q - a];
  }
  return s;
}

MomentResult Mq_sigma(std::uint64_t q, const MomentSpec& spec) {
  const SigmaTerms s = sigma_terms(q, spec);
  const std::uint32_t n = spec.total_n();
  const double scale = std::pow(std::numbers::pi, -2.0 * n);
  const double combined = spec.parity == Parity::odd ? s.plus - s.minus : s.plus + s.minus;
  MomentResult r;
  r.value = {scale * combined, 0.0};
  r.method = MomentMethod::sigma_formula;
  r.q = q;
  r.truncation = q - 1;
  r.error_estimate = std::pow(std::log(static_cast<double>(q)), 2.0 * n) / std::sqrt(static_cast<double>(q));
  return r;
}

MomentResult M_limit(const MomentSpec& spec, std::uint64_t A) {
  validate(spec);
  if (A < 1) throw InvalidArgument("cutoff A must be at least 1");
  MomentResult r;
  r.method = MomentMethod::limit;
  r.truncation = A;
  if (spec.total_n() != spec.total_m()) return r;  // E(eta^n conj(eta)^m) = 0

  const std::uint64_t A2 = 2 * A;
  const auto Bn = calB_table(spec.n, spec.t, A2, spec.parity);
  const auto Bm = spec.n == spec.m ? Bn : calB_table(spec.m, spec.t, A2, spec.parity);
  double partial = 0.0;
  double doubled = 0.0;
  for (std::uint64_t a = 1; a <= A2; ++a) {
    doubled += Bn[a] * Bm[a];
    if (a == A) partial = doubled;
  }
  const double scale = std::pow(std::numbers::pi, -2.0 * spec.total_n());
  r.value = {scale * partial, 0.0};
  r.error_estimate = scale * std::abs(doubled - partial);
  return r;
}

cplx hyper_kloosterman(std::uint64_t q, std::uint32_t N, std::uint64_t b) {
  if (q < 3 || !is_prime(q)) throw NotPrime("modulus must be an odd prime");
  if (N < 1) throw InvalidArgument("hyper-Kloosterman sums need N >= 1");
  if (N > 3 || q > 101) throw TooLarge("hyper-Kloosterman enumeration is limited to N <= 3 and q <= 101");
  if (b % q == 0) throw InvalidArgument("hyper-Kloosterman sums need (b, q) = 1");
  const auto ctx = build_context(q);
  std::vector<std::uint64_t> inverse(q, 0);
  for (std::uint64_t x = 1; x < q; ++x)
    for (std::uint64_t y = 1; y < q; ++y)
      if (x * y % q == 1) {
        inverse[x] = y;
        break;
      }
  cplx acc{0.0, 0.0};
  std::vector<std::uint64_t> xs(N - 1, 1);
  while (true) {
    std::uint64_t prod = 1, sum = 0;
    for (auto x : xs) {
      prod = prod * x % q;
      sum += x;
    }
    const std::uint64_t last = (b % q) * inverse[prod] % q;
    sum = (sum + last) % q;
    acc += ctx->additive(sum);
    std::size_t i = 0;
    while (i < xs.size() && ++xs[i] == q) xs[i++] = 1;
    if (i == xs.size()) break;
  }
  return acc;
}

cplx twisted_gauss_average(const ContextPtr& ctx, std::uint32_t N, std::uint64_t a, Parity sigma) {
  const std::uint64_t q = ctx->modulus();
  if (a % q == 0) throw InvalidArgument("twisted Gauss average needs (a, q) = 1");
  const auto family =
      enumerate_characters(ctx, sigma == Parity::odd ? CharacterFilter::odd : CharacterFilter::even);
  std::vector<cplx> terms(family.size());
  for (std::size_t i = 0; i < family.size(); ++i)
    terms[i] = family[i](static_cast<std::int64_t>(a % q)) * ipow(gauss_sum(family[i]), N);
  return tree_sum(terms) * (2.0 / static_cast<double>(ctx->order()));
}

cplx twisted_gauss_average_kloosterman(std::uint64_t q, std::uint32_t N, std::uint64_t a, Parity sigma) {
  if (a % q == 0) throw InvalidArgument("twisted Gauss average needs (a, q) = 1");
  std::uint64_t inv = 1;
  while (inv * (a % q) % q != 1) ++inv;
  const double s = sigma == Parity::odd ? -1.0 : 1.0;
  return hyper_kloosterman(q, N, inv) + s * hyper_kloosterman(q, N, q - inv);
}

double riemann_zeta(double s) {
  if (!(s > 1.0)) throw InvalidArgument("riemann_zeta is implemented for real s > 1");
  constexpr int kTerms = 16;
  // B_{2k} / (2k)! for k = 1..8.
  static constexpr double kBernoulliOverFactorial[] = {
      1.0 / 6.0 / 2.0,
      -1.0 / 30.0 / 24.0,
      1.0 / 42.0 / 720.0,
      -1.0 / 30.0 / 40320.0,
      5.0 / 66.0 / 3628800.0,
      -691.0 / 2730.0 / 479001600.0,
      7.0 / 6.0 / 87178291200.0,
      -3617.0 / 510.0 / 20922789888000.0,
  };
  double sum = 0.0;
  for (int n = kTerms - 1; n >= 1; --n) sum += std::pow(static_cast<double>(n), -s);
  const double M = kTerms;
  sum += std::pow(M, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(M, -s);
  // Rising product s (s+1) ... (s+2k-2), times M^{-s-2k+1}.
  double rising = s;
  double power = std::pow(M, -s - 1.0);
  for (int k = 1; k <= 8; ++k) {
    sum += kBernoulliOverFactorial[k - 1] * rising * power;
    rising *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
    power /= M * M;
  }
  return sum;
}

RamanujanCheck ramanujan_check(double s, std::uint64_t A) {
  if (!(s > 1.0)) throw InvalidArgument("the divisor-square identity needs s > 1");
  if (A < 2) throw InvalidArgument("cutoff A must be at least 2");
  std::vector<std::uint32_t> d(A + 1, 0);
  for (std::uint64_t i = 1; i <= A; ++i)
    for (std::uint64_t j = i; j <= A; j += i) ++d[j];
  RamanujanCheck r;
  double count = 0.0;  // D(A) = sum_{n<=A} d(n)^2
  for (std::uint64_t n = A; n >= 1; --n) {
    const double dn = d[n];
    r.partial += dn * dn * std::pow(static_cast<double>(n), -s);
    count += dn * dn;
  }
  const double zs = riemann_zeta(s);
  r.exact = zs * zs * zs * zs / riemann_zeta(2.0 * s);

  // Model D(x) = c x L^3 with c fitted at A; then the tail is
  // c * int_A^inf x^{-s} (L^3 + 3L^2) dx.
  const double L = std::log(static_cast<double>(A));
  const double sigma = s - 1.0;
  const double c = count / (static_cast<double>(A) * L * L * L);
  auto log_moment = [&](int k) {
    // int_A^inf x^{-s} (log x)^k dx = A^{-sigma} sum_j k!/(k-j)! L^{k-j} / sigma^{j+1}
    double acc = 0.0;
    double falling = 1.0;
    for (int j = 0; j <= k; ++j) {
      acc += falling * std::pow(L, k - j) / std::pow(sigma, j + 1);
      falling *= (k - j);
    }
    return std::pow(static_cast<double>(A), -sigma) * acc;
  };
  r.tail_estimate = c * (log_moment(3) + 3.0 * log_moment(2));
  return r;
}

}  // namespace charpath
