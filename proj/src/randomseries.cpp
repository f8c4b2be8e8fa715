#include "charpath/randomseries.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <fftw3.h>
#include <fmt/format.h>

#include "charpath/errors.hpp"

namespace charpath {

namespace {

constexpr std::size_t kFftMinGrid = 32;
constexpr std::size_t kDirectWeightBudget = std::size_t{1} << 22;

enum class Kernel { plus, minus };

// FFTW plans keyed by size. Planning is serialised; fftw_execute_dft on
// fftw_malloc'd buffers is thread-safe and deterministic for a fixed plan.
fftw_plan backward_plan(int size) {
  static std::mutex mutex;
  static std::map<int, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto it = plans.find(size);
  if (it != plans.end()) return it->second;
  auto* in = fftw_alloc_complex(size);
  auto* out = fftw_alloc_complex(size);
  fftw_plan plan = fftw_plan_dft_1d(size, in, out, FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  plans.emplace(size, plan);
  return plan;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(fftw_alloc_complex(n)), size(n) {}
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
  std::size_t size;
};

double kernel_weight(Kernel kernel, const cplx& ek) { return kernel == Kernel::minus ? 1.0 - ek.real() : ek.imag(); }

bool use_fft(EvalMethod method, const PathGrid& grid) {
  switch (method) {
    case EvalMethod::fft:
      if (grid.kind() != GridKind::uniform) throw InvalidArgument("FFT evaluation needs a uniform grid");
      return true;
    case EvalMethod::direct: return false;
    case EvalMethod::automatic: return grid.kind() == GridKind::uniform && grid.size() >= kFftMinGrid;
  }
  return false;
}

/// Evaluates sum_k c_k w(k t_i) on a fixed grid for a fixed kernel. Built once
/// per SeriesSpec and shared read-only by every sample.
class GridEvaluator {
 public:
  GridEvaluator(const PathGrid& grid, Kernel kernel, std::uint64_t N, EvalMethod method)
      : grid_(grid), kernel_(kernel), N_(N), fft_(use_fft(method, grid)) {
    if (fft_) {
      plan_ = backward_plan(static_cast<int>(grid.size() - 1));
    } else if (grid.size() * N <= kDirectWeightBudget) {
      weights_.resize(grid.size() * N);
      for (std::size_t i = 0; i < grid.size(); ++i) {
        const TimePoint t = grid.time(i);
        for (std::uint64_t k = 1; k <= N; ++k)
          weights_[i * N + (k - 1)] = kernel_weight(kernel, unit_phase(frac_at(k, t)));
      }
    }
  }

  /// coeffs[k] for k in [1, N]; coeffs[0] ignored.
  std::vector<cplx> evaluate(const std::vector<cplx>& coeffs) const {
    return fft_ ? evaluate_fft(coeffs) : evaluate_direct(coeffs);
  }

 private:
  std::vector<cplx> evaluate_direct(const std::vector<cplx>& coeffs) const {
    std::vector<cplx> out(grid_.size());
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      cplx acc{0.0, 0.0};
      if (!weights_.empty()) {
        const double* w = &weights_[i * N_];
        for (std::uint64_t k = 1; k <= N_; ++k) acc += coeffs[k] * w[k - 1];
      } else {
        const TimePoint t = grid_.time(i);
        for (std::uint64_t k = 1; k <= N_; ++k)
          acc += coeffs[k] * kernel_weight(kernel_, unit_phase(frac_at(k, t)));
      }
      out[i] = acc;
    }
    return out;
  }

  std::vector<cplx> evaluate_fft(const std::vector<cplx>& coeffs) const {
    const std::size_t M = grid_.size() - 1;
    FftwBuffer in(M), out(M);
    for (std::size_t r = 0; r < M; ++r) in.data[r][0] = in.data[r][1] = 0.0;
    for (std::uint64_t k = 1; k <= N_; ++k) {
      const std::size_t r = k % M;
      in.data[r][0] += coeffs[k].real();
      in.data[r][1] += coeffs[k].imag();
    }
    fftw_execute_dft(plan_, in.data, out.data);
    auto A = [&](std::size_t j) { return cplx{out.data[j][0], out.data[j][1]}; };
    std::vector<cplx> values(grid_.size());
    for (std::size_t i = 0; i <= M; ++i) {
      const std::size_t j = i % M;
      const std::size_t mirror = (M - j) % M;
      if (kernel_ == Kernel::minus) {
        values[i] = A(0) - (A(j) + A(mirror)) * 0.5;
      } else {
        values[i] = (A(j) - A(mirror)) * cplx{0.0, -0.5};
      }
    }
    return values;
  }

  const PathGrid& grid_;
  Kernel kernel_;
  std::uint64_t N_;
  bool fft_;
  fftw_plan plan_ = nullptr;
  std::vector<double> weights_;
};

Kernel kernel_for(SeriesForm form, int sign) {
  if (form == SeriesForm::plus) return Kernel::plus;
  if (form == SeriesForm::minus) return Kernel::minus;
  return sign < 0 ? Kernel::minus : Kernel::plus;
}

/// Extra factor relating the general form to the parity kernels.
cplx general_factor(SeriesForm form, int sign) {
  if (form == SeriesForm::general && sign > 0) return {0.0, -1.0};
  return {1.0, 0.0};
}

std::vector<cplx> coefficients(const SteinhausSampler& sampler, const Truncation& tr) {
  auto x = sampler.values(tr.terms);
  for (std::uint64_t k = 1; k <= tr.terms; ++k) {
    const bool keep = tr.kind == Truncation::Kind::symmetric ||
                      sampler.spf().largest_prime_factor(k) <= tr.smooth_bound;
    x[k] = keep ? x[k] / static_cast<double>(k) : cplx{0.0, 0.0};
  }
  return x;
}

void check_terms(const SteinhausSampler& sampler, std::uint64_t N) {
  if (N < 1) throw InvalidArgument("truncation must keep at least one term");
  if (N > sampler.capacity())
    throw CapacityExceeded(fmt::format("truncation {} exceeds sampler capacity {}", N, sampler.capacity()));
}

cplx kernel_sum(const SteinhausSampler& sampler, Kernel kernel, const TimePoint& t, std::uint64_t N,
                std::uint64_t y) {
  check_terms(sampler, N);
  const auto x = sampler.values(N);
  cplx acc{0.0, 0.0};
  for (std::uint64_t k = 1; k <= N; ++k) {
    if (y != 0 && sampler.spf().largest_prime_factor(k) > y) continue;
    acc += x[k] / static_cast<double>(k) * kernel_weight(kernel, unit_phase(frac_at(k, t)));
  }
  return acc;
}

cplx general_sum(const SteinhausSampler& sampler, const TimePoint& t, std::uint64_t N, std::uint64_t y) {
  check_terms(sampler, N);
  const auto x = sampler.values(N);
  const double sign = sampler.sign_minus_one();
  const cplx one{1.0, 0.0};
  cplx acc{0.0, 0.0};
  for (std::uint64_t k = 1; k <= N; ++k) {
    if (y != 0 && sampler.spf().largest_prime_factor(k) > y) continue;
    const cplx ek = unit_phase(frac_at(k, t));
    const double kd = static_cast<double>(k);
    acc += x[k] / kd * (one - ek);                         // +k
    acc += sign * x[k] / (-kd) * (one - std::conj(ek));    // -k
  }
  return acc;
}

}  // namespace

void validate(const SeriesSpec& spec) {
  if (spec.truncation.terms < 1) throw InvalidArgument("truncation must keep at least one term");
  if (spec.truncation.kind == Truncation::Kind::smooth && spec.truncation.smooth_bound < 2)
    throw InvalidArgument("smoothness bound y must be at least 2");
  if (spec.fixed_eta && std::abs(std::abs(*spec.fixed_eta) - 1.0) > 1e-12)
    throw InvalidArgument("fixed eta must lie on the unit circle");
}

double SeriesSample::sup_norm() const {
  double best = 0.0;
  for (double m : moduli) best = std::max(best, m);
  return best;
}

cplx eval_F_plus(const SteinhausSampler& sampler, cplx eta, const TimePoint& t, std::uint64_t N) {
  return eta / std::numbers::pi * kernel_sum(sampler, Kernel::plus, t, N, 0);
}

cplx eval_F_minus(const SteinhausSampler& sampler, cplx eta, const TimePoint& t, std::uint64_t N) {
  return eta / std::numbers::pi * kernel_sum(sampler, Kernel::minus, t, N, 0);
}

cplx eval_F_general(const SteinhausSampler& sampler, cplx eta, const TimePoint& t, std::uint64_t N) {
  return eta / (2.0 * std::numbers::pi) * general_sum(sampler, t, N, 0);
}

cplx smooth_truncation_eval(const SteinhausSampler& sampler, cplx eta, const TimePoint& t, std::uint64_t y,
                            std::uint64_t N, SeriesForm form) {
  if (y < 2) throw InvalidArgument("smoothness bound y must be at least 2");
  switch (form) {
    case SeriesForm::plus: return eta / std::numbers::pi * kernel_sum(sampler, Kernel::plus, t, N, y);
    case SeriesForm::minus: return eta / std::numbers::pi * kernel_sum(sampler, Kernel::minus, t, N, y);
    case SeriesForm::general: return eta / (2.0 * std::numbers::pi) * general_sum(sampler, t, N, y);
  }
  return {};
}

double rough_norm(const SteinhausSampler& sampler, std::uint64_t y, std::uint64_t N, const PathGrid& grid,
                  EvalMethod method) {
  check_terms(sampler, N);
  if (y >= N) return 0.0;
  auto x = sampler.values(N);
  for (std::uint64_t k = 1; k <= N; ++k) {
    const bool rough = sampler.spf().largest_prime_factor(k) > y;
    x[k] = rough ? x[k] / static_cast<double>(k) : cplx{0.0, 0.0};
  }
  const GridEvaluator evaluator(grid, kernel_for(SeriesForm::general, sampler.sign_minus_one()), N, method);
  double best = 0.0;
  for (const cplx& v : evaluator.evaluate(x)) best = std::max(best, std::abs(v));
  return best / std::numbers::pi;
}

namespace {

SeriesSample draw(const SeriesSpec& spec, const GridEvaluator* plus, const GridEvaluator* minus,
                  const SeedSpec& seed) {
  const SteinhausSampler sampler(seed, std::max<std::size_t>(spec.truncation.terms, 2));
  SeriesSample s;
  s.seed = seed;
  s.eta = spec.fixed_eta.value_or(sampler.eta());
  s.sign_minus_one = sampler.sign_minus_one();
  const Kernel kernel = kernel_for(spec.form, s.sign_minus_one);
  const GridEvaluator& evaluator = kernel == Kernel::plus ? *plus : *minus;
  const auto sums = evaluator.evaluate(coefficients(sampler, spec.truncation));
  const cplx prefactor = s.eta * general_factor(spec.form, s.sign_minus_one) / std::numbers::pi;
  s.values.resize(sums.size());
  s.moduli.resize(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) {
    s.values[i] = prefactor * sums[i];
    s.moduli[i] = std::abs(sums[i]) / std::numbers::pi;
  }
  return s;
}

struct EvaluatorPair {
  std::optional<GridEvaluator> plus;
  std::optional<GridEvaluator> minus;

  explicit EvaluatorPair(const SeriesSpec& spec) {
    const auto N = spec.truncation.terms;
    if (spec.form != SeriesForm::minus) plus.emplace(spec.grid, Kernel::plus, N, spec.method);
    if (spec.form != SeriesForm::plus) minus.emplace(spec.grid, Kernel::minus, N, spec.method);
  }
  const GridEvaluator* p() const { return plus ? &*plus : nullptr; }
  const GridEvaluator* m() const { return minus ? &*minus : nullptr; }
};

}  // namespace

SeriesSample sample_series(const SeriesSpec& spec, const SeedSpec& seed) {
  validate(spec);
  const EvaluatorPair evaluators(spec);
  return draw(spec, evaluators.p(), evaluators.m(), seed);
}

std::vector<SeriesSample> sample_ensemble(const SeriesSpec& spec, std::size_t count, std::uint64_t base_seed) {
  validate(spec);
  if (count < 1) throw InvalidArgument("ensemble needs at least one sample");
  const EvaluatorPair evaluators(spec);
  std::vector<SeriesSample> out(count);
  parallel_for(count, [&](std::size_t i) {
    out[i] = draw(spec, evaluators.p(), evaluators.m(), SeedSpec{base_seed, i});
  });
  return out;
}

std::vector<double> ensemble_map(const SeriesSpec& spec, std::size_t count, std::uint64_t base_seed,
                                 const std::function<double(const SeriesSample&)>& reduce) {
  validate(spec);
  if (count < 1) throw InvalidArgument("ensemble needs at least one sample");
  const EvaluatorPair evaluators(spec);
  std::vector<double> out(count);
  parallel_for(count, [&](std::size_t i) {
    out[i] = reduce(draw(spec, evaluators.p(), evaluators.m(), SeedSpec{base_seed, i}));
  });
  return out;
}

std::string to_string(SeriesForm form) {
  switch (form) {
    case SeriesForm::plus: return "plus";
    case SeriesForm::minus: return "minus";
    case SeriesForm::general: return "general";
  }
  return "minus";
}

SeriesForm series_form_from_string(const std::string& name) {
  if (name == "plus") return SeriesForm::plus;
  if (name == "minus") return SeriesForm::minus;
  if (name == "general") return SeriesForm::general;
  throw InvalidArgument(fmt::format("unknown series parity '{}' (expected plus, minus or general)", name));
}

}  // namespace charpath
