#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace charpath {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Euler-Mascheroni constant, 17 significant digits.
inline constexpr double kEulerGamma = 0.57721566490153286;

/// e(u) = exp(2 pi i u), with exact results at multiples of 1/8.
///
/// The argument is reduced to [0, 1) and then folded into [0, 1/8] using
/// exact binary operations, so e(1/2) == -1 and e(1/4) == i bitwise.
cplx unit_phase(double u);

/// sin(2 pi u) and cos(2 pi u) with the same reduction as unit_phase.
inline double sin_2pi(double u) { return unit_phase(u).imag(); }
inline double cos_2pi(double u) { return unit_phase(u).real(); }

/// Fractional part of k*t in [0, 1). Exact when t has few mantissa bits.
double frac_mul(std::uint64_t k, double t);

/// A nonnegative rational time point num/den.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/// Sum in a fixed pairwise order. The result depends only on the input order,
/// so it is reproducible regardless of how the inputs were produced.
template <typename T>
T tree_sum(std::span<const T> xs) {
  if (xs.empty()) return T{};
  if (xs.size() == 1) return xs[0];
  if (xs.size() <= 8) {
    T acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc += xs[i];
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return tree_sum(xs.first(half)) + tree_sum(xs.subspan(half));
}

template <typename T>
T tree_sum(const std::vector<T>& xs) {
  return tree_sum(std::span<const T>(xs));
}

/// Worker count used by the parallel helpers. Never affects numerical output.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Run body(i) for i in [0, n) across thread_count() workers. Each index is
/// handled exactly once; callers write results to slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Elementwise map with results stored by index.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, F&& f) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

/// Ordinary least squares slope of y against x.
double fit_slope(std::span<const double> x, std::span<const double> y);

}  // namespace charpath
