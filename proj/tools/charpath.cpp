// charpath: character paths, random multiplicative series and their moments.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "charpath/config.hpp"
#include "charpath/dirichlet.hpp"
#include "charpath/errors.hpp"
#include "charpath/io.hpp"
#include "charpath/moments.hpp"
#include "charpath/paths.hpp"
#include "charpath/randomseries.hpp"
#include "charpath/stats.hpp"
#include "charpath/verify.hpp"

using namespace charpath;

namespace {

constexpr std::uint64_t kFamilyScanLimit = 1'000'000;

void emit(const std::string& out, const std::string& contents) {
  if (out.empty() || out == "-") {
    std::fwrite(contents.data(), 1, contents.size(), stdout);
    std::fflush(stdout);
  } else {
    write_file_atomic(out, contents);
  }
}

ContextPtr context_for(std::uint64_t q, const RunConfig& config, bool family_scan) {
  if (q < 3 || !is_prime(q)) throw NotPrime("modulus must be an odd prime");
  if (family_scan && q > kFamilyScanLimit)
    throw TooLarge(fmt::format("q = {} exceeds the full-family scan limit {}", q, kFamilyScanLimit));
  if (!config.cache_dir.empty()) std::filesystem::create_directories(config.cache_dir);
  return cached_context(q, config.cache_dir);
}

PathGrid grid_from_string(const std::string& text, std::uint64_t q) {
  if (text == "vertex") return PathGrid::vertex(q);
  const auto count = parse_u64(text, "grid size");
  if (count < 2) throw InvalidArgument("grid needs at least two points");
  return PathGrid::uniform(count);
}

Parity parity_from_string(const std::string& s) {
  if (s == "odd") return Parity::odd;
  if (s == "even") return Parity::even;
  throw InvalidArgument(fmt::format("parity must be odd or even, got '{}'", s));
}

MomentMethod method_from_string(const std::string& s) {
  if (s == "direct") return MomentMethod::direct;
  if (s == "sigma") return MomentMethod::sigma_formula;
  if (s == "limit") return MomentMethod::limit;
  if (s == "fourier") return MomentMethod::fourier;
  if (s == "full") return MomentMethod::full;
  throw InvalidArgument(fmt::format("unknown moment method '{}'", s));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Character paths, random multiplicative series and their moments"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed_flag;
  std::optional<unsigned> threads_flag;
  std::optional<std::string> cache_flag;
  std::string config_path;
  app.add_option("--seed", seed_flag, "Base seed (default: CHARPATH_SEED or 0)");
  app.add_option("--threads", threads_flag, "Worker threads (output does not depend on it)")
      ->check(CLI::PositiveNumber);
  app.add_option("--cache-dir", cache_flag, "Directory for discrete-log caches (empty disables)");
  app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);

  // path
  auto* path_cmd = app.add_subcommand("path", "Sample the polygonal character path f_chi");
  std::uint64_t path_q = 0, path_chi = 0;
  std::string path_grid = "vertex", path_format, path_out = "-";
  path_cmd->add_option("--q", path_q, "Odd prime modulus")->required();
  path_cmd->add_option("--chi", path_chi, "Character index j in [0, q-2]")->required();
  path_cmd->add_option("--grid", path_grid, "'vertex' or a uniform point count")->capture_default_str();
  path_cmd->add_option("--format", path_format, "csv or svg (default from config)");
  path_cmd->add_option("--out", path_out, "Output file, '-' for stdout")->capture_default_str();

  // sample-f
  auto* sample_cmd = app.add_subcommand("sample-f", "Sample the random series F on a uniform grid");
  std::string sample_parity = "minus", sample_format, sample_prefix = "sample_f";
  std::optional<std::uint64_t> sample_terms, sample_smooth;
  std::optional<std::size_t> sample_grid;
  std::size_t sample_count = 1;
  sample_cmd->add_option("--parity", sample_parity, "plus, minus or general")->capture_default_str();
  sample_cmd->add_option("--terms", sample_terms, "Truncation N (default from config)");
  sample_cmd->add_option("--grid", sample_grid, "Uniform grid size G (default from config)");
  sample_cmd->add_option("--count", sample_count, "Number of samples (streams 0..count-1)")->capture_default_str();
  sample_cmd->add_option("--smooth", sample_smooth, "Keep only y-smooth indices");
  sample_cmd->add_option("--format", sample_format, "csv or svg (default from config)");
  sample_cmd->add_option("--out", sample_prefix, "Output prefix for <prefix>[_i].csv and <prefix>.json")
      ->capture_default_str();

  // moment
  auto* moment_cmd = app.add_subcommand("moment", "Joint moment of the path or of the limit");
  std::optional<std::uint64_t> moment_q;
  std::string moment_t, moment_n, moment_m, moment_parity = "odd", moment_method = "direct", moment_out = "-";
  std::uint64_t moment_truncate = 100000;
  moment_cmd->add_option("--q", moment_q, "Odd prime modulus (not needed for --method limit)");
  moment_cmd->add_option("--t", moment_t, "Comma-separated times, e.g. 0.5 or 1/4,1/2")->required();
  moment_cmd->add_option("--n", moment_n, "Comma-separated exponents of f")->required();
  moment_cmd->add_option("--m", moment_m, "Comma-separated exponents of conj(f)")->required();
  moment_cmd->add_option("--parity", moment_parity, "odd or even")->capture_default_str();
  moment_cmd->add_option("--method", moment_method, "direct, sigma, limit, fourier or full")->capture_default_str();
  moment_cmd->add_option("--truncate", moment_truncate, "Cutoff A for the limit method")->capture_default_str();
  moment_cmd->add_option("--out", moment_out, "Output file, '-' for stdout")->capture_default_str();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Run an invariant suite");
  std::string verify_suite;
  verify_cmd->add_option("suite", verify_suite, "orthogonality, gauss, divisor, deligne, tail or ramanujan")
      ->required()
      ->check(CLI::IsMember(suite_names()));

  // phi
  auto* phi_cmd = app.add_subcommand("phi", "Tail curve of the maximal character sum or of the limit");
  std::optional<std::uint64_t> phi_q;
  bool phi_limit_mode = false;
  std::string phi_parity, phi_taus = "0.25:2.0:8", phi_out = "-";
  std::size_t phi_samples = 10000, phi_grid = 4096;
  std::optional<std::uint64_t> phi_terms;
  phi_cmd->add_option("--q", phi_q, "Odd prime modulus (character mode)");
  phi_cmd->add_flag("--limit", phi_limit_mode, "Monte-Carlo curve of the random series");
  phi_cmd->add_option("--parity", phi_parity,
                      "Character mode: odd, even or all (default odd). Limit mode: minus or plus (default minus)");
  phi_cmd->add_option("--taus", phi_taus, "start:end:count, inclusive")->capture_default_str();
  phi_cmd->add_option("--samples", phi_samples, "Monte-Carlo samples")->capture_default_str();
  phi_cmd->add_option("--terms", phi_terms, "Series truncation N (default from config)");
  phi_cmd->add_option("--grid", phi_grid, "Grid size for the series maximum")->capture_default_str();
  phi_cmd->add_option("--out", phi_out, "Output file, '-' for stdout")->capture_default_str();

  // increment
  auto* inc_cmd = app.add_subcommand("increment", "Fourth increment moments of the character paths");
  std::uint64_t inc_q = 0;
  std::string inc_gaps = "1/2,1/4,1/8,1/16,1/32,1/64", inc_out = "-";
  double inc_base = 0.1;
  bool inc_json = false;
  inc_cmd->add_option("--q", inc_q, "Odd prime modulus")->required();
  inc_cmd->add_option("--gaps", inc_gaps, "Comma-separated gaps |t - s|")->capture_default_str();
  inc_cmd->add_option("--base", inc_base, "Left endpoint s of every pair")->capture_default_str();
  inc_cmd->add_flag("--json", inc_json, "Print the JSON summary with the fitted slope instead of CSV");
  inc_cmd->add_option("--out", inc_out, "Output file, '-' for stdout")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig config;
    config.threads = std::max(1u, std::thread::hardware_concurrency());
    apply_environment(config);
    if (!config_path.empty()) apply_config_file(config, config_path);
    if (seed_flag) config.seed = *seed_flag;
    if (threads_flag) config.threads = *threads_flag;
    if (cache_flag) config.cache_dir = *cache_flag;
    validate(config);
    set_thread_count(config.threads);

    if (*path_cmd) {
      const auto ctx = context_for(path_q, config, false);
      if (path_chi > ctx->order() - 1) throw InvalidArgument(fmt::format("character index must lie in [0, {}]", path_q - 2));
      const Character chi(ctx, static_cast<std::uint32_t>(path_chi));
      const auto path = sample_path(chi, grid_from_string(path_grid, path_q));
      const auto format = path_format.empty() ? config.format : output_format_from_string(path_format);
      std::ostringstream os;
      if (format == OutputFormat::svg)
        write_path_svg(os, path.values);
      else if (format == OutputFormat::csv)
        write_path_csv(os, path.grid.points(), path.values);
      else
        throw InvalidArgument("path supports csv or svg output");
      emit(path_out, os.str());
      return 0;
    }

    if (*sample_cmd) {
      SeriesSpec spec;
      spec.form = series_form_from_string(sample_parity);
      const auto terms = sample_terms.value_or(config.terms);
      spec.truncation = sample_smooth ? Truncation::smooth(*sample_smooth, terms) : Truncation::symmetric(terms);
      spec.grid = PathGrid::uniform(sample_grid.value_or(config.grid));
      validate(spec);
      if (sample_count < 1) throw InvalidArgument("count must be at least 1");
      const auto format = sample_format.empty() ? config.format : output_format_from_string(sample_format);
      if (format == OutputFormat::json) throw InvalidArgument("sample-f writes csv or svg samples");
      const auto samples = sample_ensemble(spec, sample_count, config.seed);
      const std::string ext = format == OutputFormat::svg ? "svg" : "csv";
      for (std::size_t i = 0; i < samples.size(); ++i) {
        std::ostringstream os;
        if (format == OutputFormat::svg)
          write_path_svg(os, samples[i].values);
        else
          write_path_csv(os, spec.grid.points(), samples[i].values);
        const std::string name =
            sample_count == 1 ? fmt::format("{}.{}", sample_prefix, ext) : fmt::format("{}_{}.{}", sample_prefix, i, ext);
        write_file_atomic(name, os.str());
      }
      write_file_atomic(sample_prefix + ".json", ensemble_manifest(spec, config.seed, sample_count) + "\n");
      return 0;
    }

    if (*moment_cmd) {
      MomentSpec spec{parse_time_list(moment_t), parse_index_list(moment_n), parse_index_list(moment_m),
                      parity_from_string(moment_parity)};
      validate(spec);
      const auto method = method_from_string(moment_method);
      MomentResult result;
      if (method == MomentMethod::limit) {
        result = M_limit(spec, moment_truncate);
      } else {
        if (!moment_q) throw InvalidArgument(fmt::format("--q is required for method {}", moment_method));
        if (method == MomentMethod::sigma_formula) {
          if (spec.total_n() != spec.total_m()) throw ParityMismatch("sigma method requires |n| = |m|");
          context_for(*moment_q, config, false);
          result = Mq_sigma(*moment_q, spec);
        } else {
          const auto ctx = context_for(*moment_q, config, true);
          result = method == MomentMethod::direct    ? Mq_direct(ctx, spec)
                   : method == MomentMethod::fourier ? Mq_fourier(ctx, spec)
                                                     : Mq_full(ctx, spec);
        }
      }
      emit(moment_out, moment_json(spec, result) + "\n");
      return 0;
    }

    if (*verify_cmd) {
      const auto checks = run_suite(verify_suite, SuiteOptions{config.seed});
      std::cout << format_table(checks);
      const bool ok = all_pass(checks);
      std::cout << (ok ? "all checks passed\n" : "some checks FAILED\n");
      return ok ? 0 : 1;
    }

    if (*phi_cmd) {
      const auto taus = parse_tau_grid(phi_taus);
      TailCurve curve;
      if (phi_limit_mode) {
        PhiLimitConfig pc;
        pc.samples = phi_samples;
        pc.terms = phi_terms.value_or(config.terms);
        pc.grid = phi_grid;
        pc.seed = config.seed;
        const std::string p = phi_parity.empty() ? "minus" : phi_parity;
        pc.form = p == "odd" ? SeriesForm::minus : p == "even" ? SeriesForm::plus : series_form_from_string(p);
        curve = phi_limit(taus, pc);
      } else {
        if (!phi_q) throw InvalidArgument("--q is required unless --limit is given");
        const std::string p = phi_parity.empty() ? "odd" : phi_parity;
        CharacterFilter filter;
        if (p == "odd" || p == "minus")
          filter = CharacterFilter::odd;
        else if (p == "even" || p == "plus")
          filter = CharacterFilter::even;
        else if (p == "all")
          filter = CharacterFilter::nonprincipal;
        else
          throw InvalidArgument(fmt::format("unknown parity '{}'", p));
        curve = charpath::phi_q(context_for(*phi_q, config, true), taus, filter);
      }
      std::ostringstream os;
      write_tail_csv(os, curve);
      emit(phi_out, os.str());
      return 0;
    }

    if (*inc_cmd) {
      const auto ctx = context_for(inc_q, config, true);
      std::vector<double> gaps;
      for (const auto& g : parse_time_list(inc_gaps)) gaps.push_back(g.value);
      const auto report = increment_report(ctx, gaps, inc_base);
      if (inc_json) {
        emit(inc_out, increment_json(report) + "\n");
      } else {
        std::ostringstream os;
        write_increment_csv(os, report);
        emit(inc_out, os.str());
      }
      return 0;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const LimitExceeded& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
