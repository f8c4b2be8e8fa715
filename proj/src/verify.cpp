#include "charpath/verify.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "charpath/dirichlet.hpp"
#include "charpath/errors.hpp"
#include "charpath/moments.hpp"
#include "charpath/randomseries.hpp"
#include "charpath/steinhaus.hpp"

namespace charpath {

namespace {

Check upper(std::string name, double value, double bound) {
  return {std::move(name), value, bound, value <= bound};
}

double median(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

std::vector<Check> verify_orthogonality(const SuiteOptions&) {
  std::vector<Check> out;
  for (std::uint64_t q : {5, 7, 11, 13, 101}) {
    const auto ctx = build_context(q);
    const auto chars = enumerate_characters(ctx, CharacterFilter::all);
    // Row relation: sum_n chi_i(n) conj(chi_j(n)) = (q - 1) [i == j].
    const auto errs = parallel_map<double>(chars.size(), [&](std::size_t i) {
      double worst = 0.0;
      for (std::size_t j = 0; j < chars.size(); ++j) {
        cplx s{0.0, 0.0};
        for (std::uint64_t n = 1; n < q; ++n) {
          const auto a = static_cast<std::int64_t>(n);
          s += chars[i](a) * std::conj(chars[j](a));
        }
        const double expect = i == j ? static_cast<double>(q - 1) : 0.0;
        worst = std::max(worst, std::abs(s - expect));
      }
      return worst;
    });
    out.push_back(upper(fmt::format("rows q={}", q), *std::max_element(errs.begin(), errs.end()), 1e-10 * q));
    // Column relation: sum_chi chi(a) = (q - 1) [a == 1].
    double worst = 0.0;
    for (std::uint64_t a = 1; a < q; ++a) {
      cplx s{0.0, 0.0};
      for (const auto& chi : chars) s += chi(static_cast<std::int64_t>(a));
      worst = std::max(worst, std::abs(s - (a == 1 ? static_cast<double>(q - 1) : 0.0)));
    }
    out.push_back(upper(fmt::format("columns q={}", q), worst, 1e-10 * q));
  }
  return out;
}

std::vector<Check> verify_gauss(const SuiteOptions&) {
  std::vector<Check> out;
  for (std::uint64_t q : {5, 7, 101, 1009}) {
    const auto ctx = build_context(q);
    const auto chars = enumerate_characters(ctx, CharacterFilter::nonprincipal);
    const auto errs = parallel_map<double>(chars.size(), [&](std::size_t i) {
      const cplx tau = gauss_sum(chars[i]);
      const double norm_err = std::abs(std::norm(tau) - static_cast<double>(q));
      // tau(conj chi) = chi(-1) conj(tau(chi)).
      const cplx conj_tau = gauss_sum(chars[i].conjugate());
      const double sign = chars[i].parity() == Parity::odd ? -1.0 : 1.0;
      return std::max(norm_err, std::abs(conj_tau - sign * std::conj(tau)));
    });
    out.push_back(upper(fmt::format("|tau|^2 = q, q={}", q), *std::max_element(errs.begin(), errs.end()), 1e-8 * q));
  }
  const auto ctx = build_context(5);
  out.push_back(upper("principal tau = -1, q=5", std::abs(gauss_sum(Character(ctx, 0)) + 1.0), 1e-12));
  return out;
}

std::vector<Check> verify_divisor(const SuiteOptions& opts) {
  std::vector<Check> out;
  out.push_back(upper("d_4(60) = 160", std::abs(static_cast<double>(divisor_dN(4, 60)) - 160.0), 0.0));
  out.push_back(upper("d_3(4) = 6", std::abs(static_cast<double>(divisor_dN(3, 4)) - 6.0), 0.0));
  out.push_back(upper("d_2(6) = 4", std::abs(static_cast<double>(divisor_dN(2, 6)) - 4.0), 0.0));
  const SeedSpec seed{opts.seed, 0x646976};
  std::size_t violations = 0;
  constexpr std::uint64_t kTuples = 10000;
  for (std::uint64_t i = 0; i < kTuples; ++i) {
    const std::uint64_t x1 = 1 + mix_counter(seed, 4 * i) % 10000;
    const std::uint64_t x2 = 1 + mix_counter(seed, 4 * i + 1) % 10000;
    const auto N1 = static_cast<std::uint32_t>(1 + mix_counter(seed, 4 * i + 2) % 4);
    const auto N2 = static_cast<std::uint32_t>(1 + mix_counter(seed, 4 * i + 3) % 4);
    if (!divisor_lemma_check(x1, x2, N1, N2)) ++violations;
  }
  out.push_back(upper("multiplication lemma violations (10^4 tuples)", static_cast<double>(violations), 0.0));
  return out;
}

std::vector<Check> verify_deligne(const SuiteOptions&) {
  std::vector<Check> out;
  for (std::uint64_t q : {7, 11, 13}) {
    const auto ctx = build_context(q);
    for (std::uint32_t N = 1; N <= 3; ++N) {
      const double bound = 2.0 * N * std::pow(static_cast<double>(q), (N - 1) / 2.0);
      double worst = 0.0, worst_cross = 0.0;
      for (Parity sigma : {Parity::odd, Parity::even}) {
        for (std::uint64_t a = 1; a < q; ++a) {
          const cplx avg = twisted_gauss_average(ctx, N, a, sigma);
          worst = std::max(worst, std::abs(avg));
          worst_cross = std::max(worst_cross, std::abs(avg - twisted_gauss_average_kloosterman(q, N, a, sigma)));
        }
      }
      out.push_back(upper(fmt::format("max |avg| q={} N={}", q, N), worst, bound));
      out.push_back(upper(fmt::format("Kloosterman form q={} N={}", q, N), worst_cross, 1e-8));
    }
  }
  return out;
}

std::vector<Check> verify_tail(const SuiteOptions& opts) {
  constexpr std::size_t kSeeds = 50;
  constexpr std::uint64_t kTerms = 10000;
  const auto grid = PathGrid::uniform(512);
  std::vector<double> medians;
  for (std::uint64_t y : {10, 100, 1000}) {
    const auto norms = parallel_map<double>(kSeeds, [&](std::size_t i) {
      const SteinhausSampler sampler(SeedSpec{opts.seed, i}, kTerms);
      return rough_norm(sampler, y, kTerms, grid);
    });
    medians.push_back(median(norms));
  }
  std::vector<Check> out;
  out.push_back({fmt::format("median rough norm y=10 -> 100 ({:.4g} > {:.4g})", medians[0], medians[1]),
                 medians[1], medians[0], medians[1] < medians[0]});
  out.push_back({fmt::format("median rough norm y=100 -> 1000 ({:.4g} > {:.4g})", medians[1], medians[2]),
                 medians[2], medians[1], medians[2] < medians[1]});
  return out;
}

std::vector<Check> verify_ramanujan(const SuiteOptions&) {
  std::vector<Check> out;
  const auto r2 = ramanujan_check(2.0, 100000);
  out.push_back(upper("s=2 zeta(2)^4/zeta(4) = 5 pi^4/72",
                      std::abs(r2.exact - 5.0 * std::pow(std::numbers::pi, 4) / 72.0), 1e-10));
  out.push_back(upper("s=2, A=1e5, partial + tail model", std::abs(r2.partial + r2.tail_estimate - r2.exact), 1e-3));
  const auto r3 = ramanujan_check(3.0, 100000);
  out.push_back(upper("s=3, A=1e5", std::abs(r3.partial - r3.exact), 1e-6));
  return out;
}

std::vector<std::string> suite_names() { return {"orthogonality", "gauss", "divisor", "deligne", "tail", "ramanujan"}; }

std::vector<Check> run_suite(const std::string& name, const SuiteOptions& opts) {
  if (name == "orthogonality") return verify_orthogonality(opts);
  if (name == "gauss") return verify_gauss(opts);
  if (name == "divisor") return verify_divisor(opts);
  if (name == "deligne") return verify_deligne(opts);
  if (name == "tail") return verify_tail(opts);
  if (name == "ramanujan") return verify_ramanujan(opts);
  throw InvalidArgument(fmt::format("unknown verify suite '{}'", name));
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string format_table(const std::vector<Check>& checks) {
  std::size_t width = 5;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  std::string out = fmt::format("{:<{}}  {:>14}  {:>14}  {}\n", "check", width, "value", "bound", "result");
  for (const auto& c : checks)
    out += fmt::format("{:<{}}  {:>14.6e}  {:>14.6e}  {}\n", c.name, width, c.value, c.bound, c.pass ? "PASS" : "FAIL");
  return out;
}

}  // namespace charpath
