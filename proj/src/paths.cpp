#include "charpath/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "charpath/errors.hpp"

namespace charpath {

namespace {

void check_time(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument(fmt::format("time {} outside [0, 1]", t));
}

}  // namespace

double frac_at(std::uint64_t k, const TimePoint& t) {
  if (t.exact) {
    const auto& f = *t.exact;
    const auto r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(k) * f.num) % f.den);
    return static_cast<double>(r) / static_cast<double>(f.den);
  }
  return frac_mul(k, t.value);
}

VertexPosition locate(std::uint64_t q, const TimePoint& t) {
  check_time(t.value);
  if (t.exact) {
    const auto& f = *t.exact;
    const auto scaled = static_cast<unsigned __int128>(q) * f.num;
    return {static_cast<std::uint64_t>(scaled / f.den),
            static_cast<double>(static_cast<std::uint64_t>(scaled % f.den)) / static_cast<double>(f.den)};
  }
  const double x = static_cast<double>(q) * t.value;
  const double nearest = std::nearbyint(x);
  const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, x);
  if (std::abs(x - nearest) <= slack) return {static_cast<std::uint64_t>(nearest), 0.0};
  const double fl = std::floor(x);
  return {static_cast<std::uint64_t>(fl), x - fl};
}

PathGrid PathGrid::vertex(std::uint64_t q) {
  if (q == 0) throw InvalidArgument("vertex grid needs q >= 1");
  PathGrid g;
  g.kind_ = GridKind::vertex;
  g.den_ = q;
  g.points_.resize(q + 1);
  for (std::uint64_t j = 0; j <= q; ++j) g.points_[j] = static_cast<double>(j) / static_cast<double>(q);
  return g;
}

PathGrid PathGrid::uniform(std::size_t count) {
  if (count < 2) throw InvalidArgument("uniform grid needs at least 2 points");
  PathGrid g;
  g.kind_ = GridKind::uniform;
  g.den_ = count - 1;
  g.points_.resize(count);
  for (std::size_t i = 0; i < count; ++i)
    g.points_[i] = static_cast<double>(i) / static_cast<double>(count - 1);
  return g;
}

PathGrid PathGrid::points(std::vector<double> ts) {
  if (ts.empty()) throw InvalidArgument("grid must contain at least one point");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    check_time(ts[i]);
    if (i > 0 && !(ts[i] > ts[i - 1])) throw InvalidArgument("grid points must be strictly increasing");
  }
  PathGrid g;
  g.kind_ = GridKind::explicit_points;
  g.points_ = std::move(ts);
  return g;
}

TimePoint PathGrid::time(std::size_t i) const {
  if (den_ != 0) return TimePoint(Fraction{i, den_});
  return TimePoint(points_[i]);
}

std::vector<cplx> prefix_sums(const Character& chi) {
  const std::uint64_t q = chi.modulus();
  const auto& ctx = chi.context();
  std::vector<cplx> out(q + 1);
  cplx acc{0.0, 0.0};
  out[0] = acc;
  for (std::uint64_t n = 1; n < q; ++n) {
    acc += ctx.root(chi.phase_index(n));
    out[n] = acc;
  }
  out[q] = acc;
  return out;
}

cplx prefix_sum(const Character& chi, std::uint64_t m) {
  const std::uint64_t q = chi.modulus();
  const auto& ctx = chi.context();
  const std::uint64_t top = std::min(m, q - 1);
  cplx acc{0.0, 0.0};
  for (std::uint64_t n = 1; n <= top; ++n) acc += ctx.root(chi.phase_index(n));
  return acc;
}

cplx partial_sum(const Character& chi, const TimePoint& t) {
  const auto pos = locate(chi.modulus(), t);
  return prefix_sum(chi, pos.floor) / std::sqrt(static_cast<double>(chi.modulus()));
}

cplx path_value(const Character& chi, const TimePoint& t) {
  const std::uint64_t q = chi.modulus();
  const auto pos = locate(q, t);
  cplx acc = prefix_sum(chi, pos.floor);
  if (pos.frac > 0.0) acc += pos.frac * chi(static_cast<std::int64_t>(pos.floor + 1));
  return acc / std::sqrt(static_cast<double>(q));
}

CharacterPath sample_path(const Character& chi, const PathGrid& grid) {
  const std::uint64_t q = chi.modulus();
  const double norm = std::sqrt(static_cast<double>(q));
  const auto prefix = prefix_sums(chi);
  std::vector<cplx> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto pos = locate(q, grid.time(i));
    cplx acc = prefix[pos.floor];
    if (pos.frac > 0.0) acc += pos.frac * chi(static_cast<std::int64_t>(pos.floor + 1));
    values[i] = acc / norm;
  }
  return {chi, grid, std::move(values)};
}

cplx fourier_path(const Character& chi, const TimePoint& t, std::uint64_t K) {
  if (chi.is_principal()) throw PrincipalCharacter("Fourier expansion requires a nonprincipal character");
  const std::uint64_t q = chi.modulus();
  if (K > q - 1) throw InvalidArgument(fmt::format("cutoff K={} exceeds q-1={}", K, q - 1));
  check_time(t.value);
  const double sign = chi.parity() == Parity::odd ? -1.0 : 1.0;  // chi(-1)
  const cplx one{1.0, 0.0};
  cplx acc{0.0, 0.0};
  for (std::uint64_t k = 1; k <= K; ++k) {
    const cplx conj_chi = std::conj(chi(static_cast<std::int64_t>(k)));
    const cplx ek = unit_phase(frac_at(k, t));  // e(kt)
    const double kd = static_cast<double>(k);
    // k term: conj(chi)(k)/k (1 - e(-kt)); -k term: conj(chi)(-k)/(-k) (1 - e(kt)).
    acc += conj_chi / kd * (one - std::conj(ek));
    acc += sign * conj_chi / (-kd) * (one - ek);
  }
  const cplx prefactor = gauss_sum(chi) / (cplx{0.0, kTwoPi} * std::sqrt(static_cast<double>(q)));
  return prefactor * acc;
}

cplx fourier_path_parity(const Character& chi, const TimePoint& t, std::uint64_t K) {
  if (chi.is_principal()) throw PrincipalCharacter("Fourier expansion requires a nonprincipal character");
  const std::uint64_t q = chi.modulus();
  if (K > q - 1) throw InvalidArgument(fmt::format("cutoff K={} exceeds q-1={}", K, q - 1));
  check_time(t.value);
  const bool odd = chi.parity() == Parity::odd;
  cplx acc{0.0, 0.0};
  for (std::uint64_t k = 1; k <= K; ++k) {
    const cplx ek = unit_phase(frac_at(k, t));
    const double weight = odd ? 1.0 - ek.real() : ek.imag();
    acc += std::conj(chi(static_cast<std::int64_t>(k))) * (weight / static_cast<double>(k));
  }
  const double root_q = std::sqrt(static_cast<double>(q));
  const cplx tau = gauss_sum(chi);
  if (odd) return tau / (cplx{0.0, std::numbers::pi} * root_q) * acc;
  return tau / (std::numbers::pi * root_q) * acc;
}

double max_abs_sum(const Character& chi) {
  const std::uint64_t q = chi.modulus();
  const auto& ctx = chi.context();
  cplx acc{0.0, 0.0};
  double best = 0.0;
  for (std::uint64_t n = 1; n < q; ++n) {
    acc += ctx.root(chi.phase_index(n));
    best = std::max(best, std::norm(acc));
  }
  return std::sqrt(best / static_cast<double>(q));
}

}  // namespace charpath
