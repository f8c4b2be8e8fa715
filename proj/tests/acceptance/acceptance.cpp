// Acceptance harness: one PASS/FAIL line per criterion.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "charpath/dirichlet.hpp"
#include "charpath/moments.hpp"
#include "charpath/paths.hpp"
#include "charpath/randomseries.hpp"
#include "charpath/stats.hpp"
#include "charpath/steinhaus.hpp"
#include "charpath/verify.hpp"

using namespace charpath;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void run(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, fmt::format("exception: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!o.pass) ++failures;
  fmt::print("{} {:>2} {} | {} | {:.1f}s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail, secs);
  std::fflush(stdout);
}

std::string failing(const std::vector<Check>& checks) {
  std::string out;
  for (const auto& c : checks)
    if (!c.pass) out += fmt::format("[{}: {:.3g} > {:.3g}] ", c.name, c.value, c.bound);
  return out;
}

Outcome from_checks(const std::vector<Check>& checks, const std::string& summary) {
  const bool ok = all_pass(checks);
  return {ok, ok ? summary : failing(checks)};
}

double mc_second_moment(SeriesForm form, double t) {
  SeriesSpec spec;
  spec.form = form;
  spec.truncation = Truncation::symmetric(10000);
  spec.grid = PathGrid::points({t});
  spec.method = EvalMethod::direct;
  const auto sq = ensemble_map(spec, 10000, 2024, [](const SeriesSample& s) { return std::norm(s.values[0]); });
  return tree_sum(sq) / 10000.0;
}

#ifdef CHARPATH_CLI_PATH
std::string capture(const std::string& cmd) {
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = ::pclose(pipe);
  if (status != 0) throw std::runtime_error("command failed: " + cmd);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}
#endif

}  // namespace

int main() {
  run(1, "exact identities", [] {
    auto checks = verify_orthogonality();
    for (std::uint64_t q : {5, 101, 1009}) {
      const auto ctx = build_context(q);
      double worst_tau = 0.0, worst_closure = 0.0;
      for (const auto& chi : enumerate_characters(ctx, CharacterFilter::nonprincipal)) {
        worst_tau = std::max(worst_tau, std::abs(std::norm(gauss_sum(chi)) - static_cast<double>(q)));
        worst_closure = std::max({worst_closure, std::abs(path_value(chi, 0.0)), std::abs(path_value(chi, 1.0))});
      }
      checks.push_back({fmt::format("|tau|^2 q={}", q), worst_tau, 1e-8 * q, worst_tau <= 1e-8 * q});
      checks.push_back({fmt::format("closure q={}", q), worst_closure, 1e-12, worst_closure <= 1e-12});
    }
    double worst_plus = 0.0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const SteinhausSampler s(SeedSpec{seed, 0}, 20000);
      for (std::uint64_t N : {1, 10, 1000, 10007, 20000})
        worst_plus = std::max(worst_plus, std::abs(eval_F_plus(s, s.eta(), 0.5, N)));
    }
    SeriesSpec spec;
    spec.form = SeriesForm::plus;
    spec.grid = PathGrid::uniform(4097);
    for (std::uint64_t i = 0; i < 10; ++i)
      worst_plus = std::max(worst_plus, std::abs(sample_series(spec, SeedSpec{i, 0}).values[2048]));
    checks.push_back({"F+(1/2)", worst_plus, 0.0, worst_plus == 0.0});
    return from_checks(checks, "orthogonality <= 1e-10, |tau|^2 = q, f(0) = f(1) = 0 within 1e-12, F+(1/2) = 0 exactly");
  });

  run(2, "Fourier expansion accuracy", [] {
    const std::uint64_t q = 1009;
    const auto ctx = build_context(q);
    const auto grid = PathGrid::uniform(256);
    const SeedSpec pick{2, 0};
    double worst = 0.0;
    for (std::uint64_t i = 0; i < 20; ++i) {
      const Character chi(ctx, static_cast<std::uint32_t>(1 + mix_counter(pick, i) % (q - 2)));
      for (std::size_t g = 0; g < grid.size(); ++g)
        worst = std::max(worst, std::abs(fourier_path(chi, grid.time(g), q - 1) - path_value(chi, grid.time(g))));
    }
    const double bound = 10.0 * std::log(q) / std::sqrt(q);
    return Outcome{worst <= bound, fmt::format("max error {:.4f} <= {:.4f}", worst, bound)};
  });

  run(3, "limiting moment oracle", [] {
    const MomentSpec spec{{Fraction{1, 2}}, {1}, {1}, Parity::odd};
    const auto r = M_limit(spec, 100000);
    double oracle = 0.0;
    for (std::uint64_t a = 1; a <= 100000; ++a) {
      const double w = 1.0 - std::cos(std::numbers::pi * static_cast<double>(a));
      oracle += w * w / (static_cast<double>(a) * static_cast<double>(a));
    }
    oracle /= std::numbers::pi * std::numbers::pi;
    const double v = r.value.real();
    const bool ok = std::abs(v - 0.5) <= 1e-3 && std::abs(v - oracle) <= 1e-10;
    return Outcome{ok, fmt::format("M = {:.10f}, |M - 0.5| = {:.2e}, |M - oracle| = {:.2e}", v, std::abs(v - 0.5),
                                   std::abs(v - oracle))};
  });

  run(4, "Monte-Carlo second moments", [] {
    const double m = mc_second_moment(SeriesForm::minus, 0.5);
    const double p = mc_second_moment(SeriesForm::plus, 0.25);
    const bool ok = std::abs(m - 0.5) <= 0.02 && std::abs(p - 0.125) <= 0.01;
    return Outcome{ok, fmt::format("E|F-(1/2)|^2 = {:.4f}, E|F+(1/4)|^2 = {:.4f}", m, p)};
  });

  std::array<double, 3> err{}, off{};
  const std::array<std::uint64_t, 3> ladder{101, 1009, 10007};
  run(5, "moment convergence trend", [&] {
    for (std::size_t i = 0; i < ladder.size(); ++i) {
      const auto ctx = build_context(ladder[i]);
      err[i] = std::abs(Mq_direct(ctx, MomentSpec{{Fraction{1, 2}}, {1}, {1}, Parity::odd}).value - 0.5);
      off[i] = std::abs(Mq_direct(ctx, MomentSpec{{Fraction{1, 2}}, {1}, {2}, Parity::odd}).value);
    }
    const bool ok = err[0] > err[1] && err[1] > err[2] && err[2] <= 0.05;
    return Outcome{ok, fmt::format("|Mq - 0.5| = {:.3e}, {:.3e}, {:.3e}", err[0], err[1], err[2])};
  });

  run(6, "n != m decay", [&] {
    const bool ok = off[0] > off[1] && off[1] > off[2];
    return Outcome{ok, fmt::format("|Mq((1),(2))| = {:.4f}, {:.4f}, {:.4f}", off[0], off[1], off[2])};
  });

  run(7, "twisted Gauss averages", [] {
    return from_checks(verify_deligne(), "bound 2N q^((N-1)/2) holds; Kloosterman form within 1e-8");
  });

  run(8, "divisor lemma and Ramanujan identity", [] {
    auto checks = verify_divisor();
    const auto r = verify_ramanujan();
    checks.insert(checks.end(), r.begin(), r.end());
    return from_checks(checks, fmt::format("0 violations; s=2 residual {:.2e}, s=3 residual {:.2e}", r[1].value,
                                           r[2].value));
  });

  run(9, "rough-tail trend", [] {
    const auto checks = verify_tail();
    return from_checks(checks, fmt::format("medians {:.4f} > {:.4f} > {:.4f}", checks[0].bound, checks[0].value,
                                           checks[1].value));
  });

  run(10, "tightness statistic", [] {
    const auto ctx = build_context(1009);
    const std::vector<double> gaps{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    const auto r = increment_report(ctx, gaps);
    bool bound_ok = true;
    for (std::size_t i = 0; i < gaps.size(); ++i)
      bound_ok = bound_ok && r.fourth_moments[i] <= 1009.0 * 1009.0 * std::pow(gaps[i], 4);
    return Outcome{r.slope >= 1.5 && bound_ok,
                   fmt::format("slope {:.3f} >= 1.5, trivial bound {}", r.slope, bound_ok ? "holds" : "violated")};
  });

  run(11, "distribution match", [] {
    std::vector<double> taus;
    for (int i = 1; i <= 8; ++i) taus.push_back(0.25 * i);
    const auto exact = phi_q(build_context(10007), taus, CharacterFilter::odd);
    PhiLimitConfig cfg;
    cfg.samples = 10000;
    cfg.terms = 10000;
    cfg.grid = 4096;
    cfg.form = SeriesForm::minus;
    cfg.seed = 7;
    const auto mc = phi_limit(taus, cfg);
    const double d = ecdf_distance(exact, mc);
    return Outcome{d <= 0.05, fmt::format("sup |Phi_q - Phi_MC| = {:.4f} <= 0.05", d)};
  });

  run(12, "determinism", [] {
#ifdef CHARPATH_CLI_PATH
    const std::string bin = CHARPATH_CLI_PATH;
    const auto dir = std::filesystem::temp_directory_path() / fmt::format("charpath_accept_{}", ::getpid());
    std::filesystem::create_directories(dir);
    const std::vector<std::string> commands{
        "path --q 1009 --chi 3 --grid vertex --format csv",
        "path --q 101 --chi 2 --grid 300 --format svg",
        "moment --method direct --q 1009 --t 1/3,1/2 --n 1,1 --m 1,1 --parity even",
        "moment --method limit --t 0.25 --n 2 --m 2 --truncate 20000",
        "phi --q 1009 --parity odd --taus 0.25:2.0:8",
        "phi --limit --samples 300 --terms 3000 --grid 1024 --parity minus --taus 0.25:2.0:8 --seed 7",
        "increment --q 1009",
    };
    std::size_t compared = 0;
    for (const auto& c : commands) {
      const auto a = capture(fmt::format("{} --threads 1 {}", bin, c));
      const auto b = capture(fmt::format("{} --threads 4 {}", bin, c));
      const auto again = capture(fmt::format("{} --threads 4 {}", bin, c));
      if (a != b || b != again || a.empty()) return Outcome{false, "output differs for: " + c};
      ++compared;
    }
    for (unsigned threads : {1u, 4u}) {
      capture(fmt::format("{} --threads {} --seed 42 sample-f --parity minus --terms 10007 --grid 2048 --count 3 --out {}",
                          bin, threads, (dir / fmt::format("s{}", threads)).string()));
    }
    for (const char* suffix : {"_0.csv", "_1.csv", "_2.csv", ".json"}) {
      const auto a = slurp(dir / (std::string("s1") + suffix));
      const auto b = slurp(dir / (std::string("s4") + suffix));
      if (a != b || a.empty()) return Outcome{false, fmt::format("sample-f file {} differs", suffix)};
      ++compared;
    }
    std::filesystem::remove_all(dir);
    return Outcome{true, fmt::format("{} outputs byte-identical across runs and thread counts 1/4", compared)};
#else
    SeriesSpec spec;
    set_thread_count(1);
    const auto a = sample_ensemble(spec, 4, 42);
    set_thread_count(4);
    const auto b = sample_ensemble(spec, 4, 42);
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].values != b[i].values) return Outcome{false, "ensemble differs across thread counts"};
    return Outcome{true, "library ensembles identical across thread counts (CLI not built)"};
#endif
  });

  fmt::print("{} of 12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
