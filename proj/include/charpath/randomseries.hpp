#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "charpath/paths.hpp"
#include "charpath/steinhaus.hpp"

namespace charpath {

/// Which random Fourier series to evaluate.
///
///  plus:    F+(t) = (eta/pi) sum_{k>=1} X_k/k sin(2 pi k t)
///  minus:   F-(t) = (eta/pi) sum_{k>=1} X_k/k (1 - cos(2 pi k t))
///  general: F(t)  = (eta/2pi) sum_{0<|k|} X_k/k (1 - e(kt)), with X_{-1}
///           taken from the sampler. Equals F- when X_{-1} = -1 and -i F+
///           when X_{-1} = +1.
enum class SeriesForm { plus, minus, general };

struct Truncation {
  enum class Kind { symmetric, smooth };
  Kind kind = Kind::symmetric;
  std::uint64_t terms = 10007;  // N: hard cap on |k|
  std::uint64_t smooth_bound = 0;  // y, used when kind == smooth

  static Truncation symmetric(std::uint64_t N) { return {Kind::symmetric, N, 0}; }
  static Truncation smooth(std::uint64_t y, std::uint64_t N) { return {Kind::smooth, N, y}; }
};

enum class EvalMethod { automatic, direct, fft };

struct SeriesSpec {
  SeriesForm form = SeriesForm::minus;
  Truncation truncation = Truncation::symmetric(10007);
  PathGrid grid = PathGrid::uniform(2048);
  /// Fixed eta; sampled from the keyed mixer when empty.
  std::optional<cplx> fixed_eta;
  EvalMethod method = EvalMethod::automatic;
};

void validate(const SeriesSpec& spec);

struct SeriesSample {
  SeedSpec seed;
  cplx eta{1.0, 0.0};
  int sign_minus_one = 1;
  /// F(t_i), eta applied.
  std::vector<cplx> values;
  /// |F(t_i)| computed without eta, so rotating eta leaves it unchanged.
  std::vector<double> moduli;

  /// Grid maximum of |F|; the true supremum is not computable.
  double sup_norm() const;
};

/// Partial sums at a single time, with the displayed prefactors.
cplx eval_F_plus(const SteinhausSampler& sampler, cplx eta, const TimePoint& t, std::uint64_t N);
cplx eval_F_minus(const SteinhausSampler& sampler, cplx eta, const TimePoint& t, std::uint64_t N);
cplx eval_F_general(const SteinhausSampler& sampler, cplx eta, const TimePoint& t, std::uint64_t N);

/// Sum restricted to indices with P+(|n|) <= y and |n| <= N.
cplx smooth_truncation_eval(const SteinhausSampler& sampler, cplx eta, const TimePoint& t,
                            std::uint64_t y, std::uint64_t N, SeriesForm form = SeriesForm::minus);

/// Grid maximum of the y-rough part at truncation N: indices k <= N with
/// P+(k) > y. The parity form follows the sampler's X_{-1} (minus for -1).
/// eta is omitted since only the modulus is measured.
double rough_norm(const SteinhausSampler& sampler, std::uint64_t y, std::uint64_t N, const PathGrid& grid,
                  EvalMethod method = EvalMethod::automatic);

/// One sample on spec.grid drawn from (seed, stream).
SeriesSample sample_series(const SeriesSpec& spec, const SeedSpec& seed);

/// count samples; sample i uses stream i of base_seed.
std::vector<SeriesSample> sample_ensemble(const SeriesSpec& spec, std::size_t count, std::uint64_t base_seed);

/// Apply `reduce` to every ensemble sample without keeping them all in
/// memory; out[i] belongs to stream i regardless of thread count.
std::vector<double> ensemble_map(const SeriesSpec& spec, std::size_t count, std::uint64_t base_seed,
                                 const std::function<double(const SeriesSample&)>& reduce);

std::string to_string(SeriesForm form);
SeriesForm series_form_from_string(const std::string& name);

}  // namespace charpath
