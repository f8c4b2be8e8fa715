#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "charpath/dirichlet.hpp"

namespace charpath {

/// A time t in [0, 1], optionally carried as an exact rational.
///
/// Rational inputs such as j/q land exactly on path vertices; plain doubles
/// are snapped to the nearest vertex when q*t is within rounding of an integer.
struct TimePoint {
  double value = 0.0;
  std::optional<Fraction> exact;

  TimePoint() = default;
  TimePoint(double t) : value(t) {}  // NOLINT(google-explicit-constructor)
  TimePoint(Fraction f) : value(f.value()), exact(f) {}  // NOLINT(google-explicit-constructor)
};

/// frac(k * t), exact for rational time points.
double frac_at(std::uint64_t k, const TimePoint& t);

/// Position of q*t on the polygon: q*t = floor + frac with frac in [0, 1).
struct VertexPosition {
  std::uint64_t floor = 0;
  double frac = 0.0;
};

VertexPosition locate(std::uint64_t q, const TimePoint& t);

enum class GridKind { vertex, uniform, explicit_points };

/// Sorted sample locations in [0, 1].
///
/// vertex(q) holds j/q for j = 0..q; uniform(G) holds i/(G-1) for i = 0..G-1.
class PathGrid {
 public:
  static PathGrid vertex(std::uint64_t q);
  static PathGrid uniform(std::size_t count);
  static PathGrid points(std::vector<double> ts);

  GridKind kind() const { return kind_; }
  std::size_t size() const { return points_.size(); }
  std::span<const double> points() const { return points_; }
  double operator[](std::size_t i) const { return points_[i]; }
  /// Exact rational form of point i (vertex and uniform grids).
  TimePoint time(std::size_t i) const;
  /// Denominator of the rational points, 0 for explicit grids.
  std::uint64_t denominator() const { return den_; }

 private:
  GridKind kind_ = GridKind::explicit_points;
  std::vector<double> points_;
  std::uint64_t den_ = 0;
};

struct CharacterPath {
  Character chi;
  PathGrid grid;
  std::vector<cplx> values;
};

/// Unnormalised prefix sums P[m] = sum_{n <= m} chi(n), m = 0..q.
std::vector<cplx> prefix_sums(const Character& chi);

/// Unnormalised sum_{n <= m} chi(n) for a single m.
cplx prefix_sum(const Character& chi, std::uint64_t m);

/// S_chi(t) = q^{-1/2} sum_{n <= qt} chi(n).
cplx partial_sum(const Character& chi, const TimePoint& t);

/// Piecewise-linear character path f_chi(t).
cplx path_value(const Character& chi, const TimePoint& t);

CharacterPath sample_path(const Character& chi, const PathGrid& grid);

/// Truncated Fourier expansion of f_chi over 0 < |k| <= K.
/// Throws PrincipalCharacter for j = 0 and InvalidArgument for K > q - 1.
cplx fourier_path(const Character& chi, const TimePoint& t, std::uint64_t K);

/// Parity-reduced form of fourier_path: a sine series for even characters,
/// a (1 - cosine) series for odd ones, summed over 1 <= k <= K.
cplx fourier_path_parity(const Character& chi, const TimePoint& t, std::uint64_t K);

/// max_t |S_chi(t)|, exact: the maximum over the q + 1 vertices. The same
/// number is max_t |f_chi(t)| since |.| is convex along each segment.
double max_abs_sum(const Character& chi);

}  // namespace charpath
