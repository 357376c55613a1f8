#ifndef INFOLOSS_DIMENSION_HPP
#define INFOLOSS_DIMENSION_HPP

// Information dimension as the slope of H(X_hat_{2^k}) against k: entropy
// grows like d * log2(n) + h, so the least-squares slope over the ladder
// estimates d and the intercept (in bits, at k = 0) estimates h.

#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "entropy.hpp"
#include "error.hpp"

namespace infoloss {

struct DimensionFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square residual, bits.
  double residual = 0.0;
  std::vector<int> rows_used;
};

inline constexpr std::size_t kMinFitRows = 3;

/// Ordinary least squares of H (bits) on k.
inline DimensionFit fit_dimension(const std::vector<std::pair<int, double>>& column) {
  if (column.size() < kMinFitRows) {
    throw InsufficientDataError("fit_dimension: need at least 3 reliable rows, got " + std::to_string(column.size()));
  }
  const double m = static_cast<double>(column.size());
  double sk = 0.0;
  double sh = 0.0;
  for (const auto& [k, h] : column) {
    sk += k;
    sh += h;
  }
  const double kbar = sk / m;
  const double hbar = sh / m;
  double skk = 0.0;
  double skh = 0.0;
  for (const auto& [k, h] : column) {
    skk += (k - kbar) * (k - kbar);
    skh += (k - kbar) * (h - hbar);
  }
  if (skk == 0.0) throw InsufficientDataError("fit_dimension: rows must span at least two resolutions");
  DimensionFit fit;
  fit.slope = skh / skk;
  fit.intercept = hbar - fit.slope * kbar;
  double ss = 0.0;
  for (const auto& [k, h] : column) {
    const double r = h - (fit.intercept + fit.slope * k);
    ss += r * r;
    fit.rows_used.push_back(k);
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

namespace detail {

template <typename Column, typename Reliable>
DimensionFit fit_column(const EntropyCurve& curve, Column column, Reliable reliable) {
  std::vector<std::pair<int, double>> pts;
  for (const auto& row : curve.rows) {
    if (reliable(row)) pts.emplace_back(row.k, column(row));
  }
  return fit_dimension(pts);
}

}  // namespace detail

/// d(X) from the marginal column, reliable rows only.
inline DimensionFit marginal_dimension(const EntropyCurve& curve) {
  return detail::fit_column(
      curve, [](const CurveRow& r) { return r.h_marginal; }, [](const CurveRow& r) { return r.reliable; });
}

/// E_Y[d(X | Y = y)] from the conditional column, reliable rows only.
inline DimensionFit conditional_dimension(const EntropyCurve& curve) {
  return detail::fit_column(
      curve, [](const CurveRow& r) { return r.h_conditional; }, [](const CurveRow& r) { return r.reliable; });
}

/// d(Y) from the output column; rows need the same occupancy as the input side.
inline DimensionFit output_dimension(const EntropyCurve& curve) {
  const double samples = static_cast<double>(curve.sample_count);
  return detail::fit_column(
      curve, [](const CurveRow& r) { return r.h_output; },
      [&](const CurveRow& r) { return samples >= kOccupancyFactor * static_cast<double>(r.output_distinct); });
}

}  // namespace infoloss

#endif  // INFOLOSS_DIMENSION_HPP
