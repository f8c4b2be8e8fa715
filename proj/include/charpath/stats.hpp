#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "charpath/dirichlet.hpp"
#include "charpath/moments.hpp"
#include "charpath/randomseries.hpp"

namespace charpath {

/// Tail probabilities P(max |path| > scaled tau) on a tau grid.
struct TailCurve {
  enum class Kind { character, montecarlo };

  std::vector<double> taus;
  std::vector<double> probs;
  /// Binomial standard errors; zero for exact character curves.
  std::vector<double> stderrs;
  Kind kind = Kind::character;

  // character curves
  std::optional<std::uint64_t> q;
  CharacterFilter filter = CharacterFilter::odd;
  std::size_t family_size = 0;

  // Monte-Carlo curves
  std::size_t samples = 0;
  std::uint64_t truncation = 0;
  std::size_t grid_size = 0;
  SeriesForm form = SeriesForm::minus;
  std::uint64_t seed = 0;
};

/// e^gamma / pi: the threshold scale of the character-side tail.
inline constexpr double kTailScale = 0.56693295865554880;  // exp(0.57721566490153286) / pi

/// Exact fraction of nonprincipal characters in `filter` whose maximal
/// partial sum max_t |S_chi(t)| exceeds (e^gamma/pi) tau.
TailCurve phi_q(const ContextPtr& ctx, std::span<const double> taus, CharacterFilter filter = CharacterFilter::odd);

struct PhiLimitConfig {
  std::size_t samples = 10000;
  std::uint64_t terms = 10000;
  std::size_t grid = 4096;
  SeriesForm form = SeriesForm::minus;
  std::uint64_t seed = 0;
};

/// Monte-Carlo estimate of P(2 pi max_t |F(t)| > 2 e^gamma tau), the limit of
/// phi_q under the same tau scaling. max_t is a grid maximum.
TailCurve phi_limit(std::span<const double> taus, const PhiLimitConfig& config);

/// Sup distance between two tail curves on the same tau grid.
double ecdf_distance(const TailCurve& a, const TailCurve& b);

/// Mean of |f_chi(t) - f_chi(s)|^order over nonprincipal characters mod q.
/// order is 2 or 4; the pair is unordered.
double increment_moment(const ContextPtr& ctx, const TimePoint& s, const TimePoint& t, unsigned order);

struct IncrementReport {
  std::uint64_t q = 0;
  std::vector<std::pair<double, double>> pairs;
  std::vector<double> fourth_moments;
  /// Least-squares slope of log moment against log |t - s|.
  double slope = 0.0;
};

/// Fourth increment moments on the pairs (base, base + h) for each gap h.
IncrementReport increment_report(const ContextPtr& ctx, std::span<const double> gaps, double base = 0.1);

struct MonteCarloConfig {
  std::size_t samples = 0;  // 0 disables the Monte-Carlo column
  std::uint64_t terms = 10000;
  std::uint64_t seed = 0;
  std::uint64_t limit_cutoff = 10000;  // A for M_limit
};

struct MomentComparison {
  std::vector<std::uint32_t> n;
  std::vector<std::uint32_t> m;
  cplx finite{0.0, 0.0};
  cplx limit{0.0, 0.0};
  std::optional<cplx> montecarlo;
  double discrepancy = 0.0;  // |finite - limit|
};

struct FiniteDimReport {
  std::uint64_t q = 0;
  std::vector<TimePoint> t;
  Parity parity = Parity::odd;
  std::uint32_t max_degree = 0;
  std::vector<MomentComparison> rows;

  double max_discrepancy() const;
};

/// Mq_direct against M_limit (and optionally a Monte-Carlo average of the
/// random series) for every multi-index pair with |n| = |m| in 1..D.
FiniteDimReport finite_dim_compare(const ContextPtr& ctx, const std::vector<TimePoint>& t, std::uint32_t D,
                                   Parity parity, const MonteCarloConfig& mc = {});

/// Parity of the random series matching the characters: odd <-> minus, even <-> plus.
SeriesForm series_form_for(Parity parity);

}  // namespace charpath
