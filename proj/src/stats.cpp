#include "charpath/stats.hpp"

#include <algorithm>
#include <cmath>

#include "charpath/errors.hpp"
#include "charpath/paths.hpp"

namespace charpath {

namespace {

void check_taus(std::span<const double> taus) {
  if (taus.empty()) throw InvalidArgument("tau grid is empty");
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!std::isfinite(taus[i]) || taus[i] < 0.0) throw InvalidArgument("tau values must be finite and >= 0");
    if (i > 0 && !(taus[i] > taus[i - 1])) throw InvalidArgument("tau grid must be strictly increasing");
  }
}

// All multi-indices in N^k with total exactly `total`.
void compositions(std::size_t k, std::uint32_t total, std::vector<std::uint32_t>& cur,
                  std::vector<std::vector<std::uint32_t>>& out) {
  if (cur.size() + 1 == k) {
    cur.push_back(total);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (std::uint32_t v = total + 1; v-- > 0;) {
    cur.push_back(v);
    compositions(k, total - v, cur, out);
    cur.pop_back();
  }
}

cplx ipow(cplx z, std::uint32_t e) {
  cplx r{1.0, 0.0};
  for (std::uint32_t i = 0; i < e; ++i) r = r * z;
  return r;
}

}  // namespace

SeriesForm series_form_for(Parity parity) { return parity == Parity::odd ? SeriesForm::minus : SeriesForm::plus; }

TailCurve phi_q(const ContextPtr& ctx, std::span<const double> taus, CharacterFilter filter) {
  check_taus(taus);
  auto family = enumerate_characters(ctx, filter);
  std::erase_if(family, [](const Character& c) { return c.is_principal(); });
  if (family.empty()) throw InvalidArgument("character family is empty");
  const auto maxima = parallel_map<double>(family.size(), [&](std::size_t i) { return max_abs_sum(family[i]); });

  TailCurve curve;
  curve.kind = TailCurve::Kind::character;
  curve.q = ctx->modulus();
  curve.filter = filter;
  curve.family_size = family.size();
  curve.taus.assign(taus.begin(), taus.end());
  for (double tau : taus) {
    const double threshold = kTailScale * tau;
    const auto count = std::count_if(maxima.begin(), maxima.end(), [&](double m) { return m > threshold; });
    curve.probs.push_back(static_cast<double>(count) / static_cast<double>(family.size()));
    curve.stderrs.push_back(0.0);
  }
  return curve;
}

TailCurve phi_limit(std::span<const double> taus, const PhiLimitConfig& config) {
  check_taus(taus);
  if (config.samples < 1) throw InvalidArgument("phi_limit needs at least one sample");
  SeriesSpec spec;
  spec.form = config.form;
  spec.truncation = Truncation::symmetric(config.terms);
  spec.grid = PathGrid::uniform(config.grid);
  validate(spec);
  // sup_norm is |sum| / pi, so the event 2 pi max|F| > 2 e^gamma tau reads
  // max|F| > (e^gamma / pi) tau, the same scale as the character side.
  const auto sups = ensemble_map(spec, config.samples, config.seed,
                                 [](const SeriesSample& s) { return s.sup_norm(); });

  TailCurve curve;
  curve.kind = TailCurve::Kind::montecarlo;
  curve.samples = config.samples;
  curve.truncation = config.terms;
  curve.grid_size = config.grid;
  curve.form = config.form;
  curve.seed = config.seed;
  curve.taus.assign(taus.begin(), taus.end());
  const double n = static_cast<double>(config.samples);
  for (double tau : taus) {
    const double threshold = kTailScale * tau;
    const auto count = std::count_if(sups.begin(), sups.end(), [&](double m) { return m > threshold; });
    const double p = static_cast<double>(count) / n;
    curve.probs.push_back(p);
    curve.stderrs.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  return curve;
}

double ecdf_distance(const TailCurve& a, const TailCurve& b) {
  if (a.taus != b.taus || a.probs.size() != a.taus.size() || b.probs.size() != b.taus.size())
    throw GridMismatch("tail curves must share one tau grid");
  double best = 0.0;
  for (std::size_t i = 0; i < a.probs.size(); ++i) best = std::max(best, std::abs(a.probs[i] - b.probs[i]));
  return best;
}

double increment_moment(const ContextPtr& ctx, const TimePoint& s, const TimePoint& t, unsigned order) {
  if (order != 2 && order != 4) throw InvalidArgument("increment order must be 2 or 4");
  for (const auto* p : {&s, &t})
    if (!(p->value >= 0.0 && p->value <= 1.0)) throw InvalidArgument("increment times must lie in [0, 1]");
  const TimePoint& lo = s.value <= t.value ? s : t;
  const TimePoint& hi = s.value <= t.value ? t : s;
  if (lo.value == hi.value) return 0.0;
  auto family = enumerate_characters(ctx, CharacterFilter::nonprincipal);
  const auto terms = parallel_map<double>(family.size(), [&](std::size_t i) {
    const double d = std::norm(path_value(family[i], hi) - path_value(family[i], lo));
    return order == 2 ? d : d * d;
  });
  return tree_sum(terms) / static_cast<double>(family.size());
}

IncrementReport increment_report(const ContextPtr& ctx, std::span<const double> gaps, double base) {
  if (gaps.size() < 2) throw InvalidArgument("increment ladder needs at least two gaps");
  IncrementReport report;
  report.q = ctx->modulus();
  std::vector<double> lx, ly;
  for (double h : gaps) {
    if (!(h > 0.0) || base + h > 1.0) throw InvalidArgument("increment pair leaves [0, 1]");
    report.pairs.emplace_back(base, base + h);
    const double m4 = increment_moment(ctx, base, base + h, 4);
    report.fourth_moments.push_back(m4);
    lx.push_back(std::log(h));
    ly.push_back(std::log(m4));
  }
  report.slope = fit_slope(lx, ly);
  return report;
}

double FiniteDimReport::max_discrepancy() const {
  double best = 0.0;
  for (const auto& r : rows) best = std::max(best, r.discrepancy);
  return best;
}

FiniteDimReport finite_dim_compare(const ContextPtr& ctx, const std::vector<TimePoint>& t, std::uint32_t D,
                                   Parity parity, const MonteCarloConfig& mc) {
  if (D < 1 || D > 3) throw InvalidArgument("finite-dimensional comparison supports 1 <= D <= 3");
  if (t.empty()) throw InvalidArgument("finite-dimensional comparison needs at least one time");
  FiniteDimReport report;
  report.q = ctx->modulus();
  report.t = t;
  report.parity = parity;
  report.max_degree = D;

  std::vector<SeriesSample> samples;
  if (mc.samples > 0) {
    SeriesSpec spec;
    spec.form = series_form_for(parity);
    spec.truncation = Truncation::symmetric(mc.terms);
    std::vector<double> pts;
    for (const auto& tp : t) pts.push_back(tp.value);
    spec.grid = PathGrid::points(pts);
    spec.method = EvalMethod::direct;
    samples = sample_ensemble(spec, mc.samples, mc.seed);
  }

  for (std::uint32_t total = 1; total <= D; ++total) {
    std::vector<std::vector<std::uint32_t>> idx;
    std::vector<std::uint32_t> cur;
    compositions(t.size(), total, cur, idx);
    for (const auto& n : idx) {
      for (const auto& m : idx) {
        MomentSpec spec{t, n, m, parity};
        MomentComparison row;
        row.n = n;
        row.m = m;
        row.finite = Mq_direct(ctx, spec).value;
        row.limit = M_limit(spec, mc.limit_cutoff).value;
        row.discrepancy = std::abs(row.finite - row.limit);
        if (!samples.empty()) {
          std::vector<cplx> terms(samples.size());
          for (std::size_t s = 0; s < samples.size(); ++s) {
            cplx acc{1.0, 0.0};
            for (std::size_t i = 0; i < t.size(); ++i)
              acc = acc * ipow(samples[s].values[i], n[i]) * ipow(std::conj(samples[s].values[i]), m[i]);
            terms[s] = acc;
          }
          row.montecarlo = tree_sum(terms) / static_cast<double>(samples.size());
        }
        report.rows.push_back(std::move(row));
      }
    }
  }
  return report;
}

}  // namespace charpath
