#ifndef INFOLOSS_QUANTIZER_HPP
#define INFOLOSS_QUANTIZER_HPP

// Uniform hypercube partition of side 1/n: X_hat_n = floor(n X) / n, elementwise.

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "error.hpp"
#include "measure.hpp"

namespace infoloss {

/// Points closer than this (in x units) below a grid line are snapped onto
/// it, i.e. assigned to the upper cell. Scaling with x rather than n*x keeps
/// the dyadic nesting exact for snapped points.
inline constexpr double kSnapTolerance = 1e-12;

struct BinIndex {
  std::vector<std::int64_t> coords;
  std::uint64_t n = 1;

  friend bool operator==(const BinIndex&, const BinIndex&) = default;
  friend auto operator<=>(const BinIndex& a, const BinIndex& b) {
    if (auto c = a.n <=> b.n; c != 0) return c;
    return a.coords <=> b.coords;
  }
};

/// floor(n * x) with the boundary snap rule.
inline std::int64_t cell_floor(double x, std::uint64_t n) {
  const long double p = static_cast<long double>(n) * static_cast<long double>(x);
  long double f = std::floor(p);
  if ((f + 1.0L) - p <= static_cast<long double>(n) * kSnapTolerance) f += 1.0L;
  return static_cast<std::int64_t>(f);
}

inline BinIndex quantize(std::span<const double> x, std::uint64_t n) {
  if (n == 0) throw ConfigError("quantize: resolution must be >= 1");
  BinIndex idx{std::vector<std::int64_t>(x.size()), n};
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i])) throw DataError("quantize: non-finite coordinate");
    idx.coords[i] = cell_floor(x[i], n);
  }
  return idx;
}

inline BinIndex quantize(double x, std::uint64_t n) { return quantize(std::span<const double>(&x, 1), n); }

/// Whether `child` (at resolution 2n) lies inside `parent` (at resolution n).
inline bool is_refinement_of(const BinIndex& child, const BinIndex& parent) {
  if (child.n != 2 * parent.n || child.coords.size() != parent.coords.size()) return false;
  for (std::size_t i = 0; i < child.coords.size(); ++i) {
    const std::int64_t d = child.coords[i] - 2 * parent.coords[i];
    if (d != 0 && d != 1) return false;
  }
  return true;
}

/// Moves one step down the dyadic ladder. `idx` must be quantize(x, n).
inline BinIndex refine(const BinIndex& idx, std::span<const double> x) {
  if (idx.coords.size() != x.size() || quantize(x, idx.n) != idx) {
    throw std::logic_error("refine: index is not the cell of the given point");
  }
  BinIndex child = quantize(x, 2 * idx.n);
  if (!is_refinement_of(child, idx)) throw std::logic_error("refine: dyadic nesting violated");
  return child;
}

/// The half-open cell [c/n, (c+1)/n) as a closed box.
inline Box cell_box(const BinIndex& idx) {
  Box b{Point(idx.coords.size()), Point(idx.coords.size())};
  const double n = static_cast<double>(idx.n);
  for (std::size_t i = 0; i < idx.coords.size(); ++i) {
    b.lo[i] = static_cast<double>(idx.coords[i]) / n;
    b.hi[i] = static_cast<double>(idx.coords[i] + 1) / n;
  }
  return b;
}

inline Point cell_midpoint(const BinIndex& idx) {
  Point p(idx.coords.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = (static_cast<double>(idx.coords[i]) + 0.5) / static_cast<double>(idx.n);
  return p;
}

/// Upper bound (ceil(n D))^N on the number of cells meeting a set of diameter D.
inline double cell_count_bound(std::uint64_t n, double diameter, std::size_t dim) {
  return std::pow(std::ceil(static_cast<double>(n) * diameter), static_cast<double>(dim));
}

}  // namespace infoloss

#endif  // INFOLOSS_QUANTIZER_HPP
