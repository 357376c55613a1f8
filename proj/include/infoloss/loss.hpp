#ifndef INFOLOSS_LOSS_HPP
#define INFOLOSS_LOSS_HPP

// Absolute and relative information loss from entropy curves, plus the
// componentwise upper bound and the output-dimension diagnostic.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dimension.hpp"
#include "entropy.hpp"
#include "error.hpp"
#include "measure.hpp"
#include "rng.hpp"
#include "systems.hpp"

namespace infoloss {

/// Conditional slopes below this count as a finite absolute loss.
inline constexpr double kDivergenceSlope = 0.05;
/// Relative loss needs d(X) to be clearly positive.
inline constexpr double kMinMarginalSlope = 0.1;

struct RelativeLoss {
  /// H_conditional / H_marginal on the finest reliable row.
  double ratio = 0.0;
  /// Conditional slope / marginal slope, clamped to [0, 1].
  double slope = 0.0;
  double slope_unclamped = 0.0;
  DimensionFit marginal;
  DimensionFit conditional;
};

struct LossReport {
  double relative_ratio = 0.0;
  double relative_slope = 0.0;
  double relative_slope_unclamped = 0.0;
  std::optional<double> analytic;
  /// |relative_slope - analytic| when the analytic value exists.
  std::optional<double> estimator_error;
  /// Bits; nullopt means the conditional column diverges.
  std::optional<double> absolute;
  /// Mean increase of H_conditional per ladder step over the last 3 steps.
  double conditional_growth = 0.0;
  std::optional<double> bound_joint;
  std::optional<double> bound_marginal;
  std::optional<double> conjecture_gap;
  DimensionFit d_x;
  DimensionFit d_cond;
  std::optional<DimensionFit> d_y;
};

namespace detail {

inline std::vector<const CurveRow*> reliable_rows(const EntropyCurve& curve) {
  std::vector<const CurveRow*> rows;
  for (const auto& r : curve.rows) {
    if (r.reliable) rows.push_back(&r);
  }
  if (rows.size() < kMinFitRows) {
    throw InsufficientDataError("curve has " + std::to_string(rows.size()) + " reliable rows, need 3");
  }
  return rows;
}

}  // namespace detail

/// Ratio and slope estimates of l(X -> Y).
inline RelativeLoss relative_loss(const EntropyCurve& curve) {
  const auto rows = detail::reliable_rows(curve);
  RelativeLoss out;
  out.marginal = marginal_dimension(curve);
  out.conditional = conditional_dimension(curve);
  if (out.marginal.slope < kMinMarginalSlope) {
    throw UndefinedRelativeLossError("relative_loss: marginal information dimension is ~0 (slope " +
                                     std::to_string(out.marginal.slope) + ")");
  }
  const CurveRow& finest = *rows.back();
  out.ratio = finest.h_marginal > 0.0 ? std::clamp(finest.h_conditional / finest.h_marginal, 0.0, 1.0) : 0.0;
  out.slope_unclamped = out.conditional.slope / out.marginal.slope;
  out.slope = std::clamp(out.slope_unclamped, 0.0, 1.0);
  return out;
}

/// Average growth of the conditional column per step over the last three
/// reliable steps (fewer when the curve is shorter).
inline double conditional_growth(const EntropyCurve& curve) {
  const auto rows = detail::reliable_rows(curve);
  const std::size_t steps = std::min<std::size_t>(3, rows.size() - 1);
  const CurveRow& last = *rows.back();
  const CurveRow& first = *rows[rows.size() - 1 - steps];
  return (last.h_conditional - first.h_conditional) / static_cast<double>(last.k - first.k);
}

/// L(X -> Y) in bits as the limit of H(X_hat_n | Y), or nullopt when the
/// conditional column keeps growing (infinite loss).
inline std::optional<double> absolute_loss(const EntropyCurve& curve) {
  const auto rows = detail::reliable_rows(curve);
  if (conditional_dimension(curve).slope >= kDivergenceSlope) return std::nullopt;
  double sum = 0.0;
  for (std::size_t i = rows.size() - 3; i < rows.size(); ++i) sum += rows[i]->h_conditional;
  return sum / 3.0;
}

/// l - (1 - d(Y) / d(X)); zero when the loss equals the dimension drop.
inline double conjecture_gap(double loss_slope, const DimensionFit& d_x, const DimensionFit& d_y) {
  return loss_slope - (1.0 - d_y.slope / d_x.slope);
}

/// Curves for the componentwise bound on a product input.
struct ComponentwiseCurves {
  EntropyCurve joint;
  /// H(X_hat^(i)) and H(X_hat^(i) | Y), from the joint batch.
  std::vector<EntropyCurve> given_output;
  /// H(X_hat^(i)) and H(X_hat^(i) | Y^(i)), each from its own batch of the
  /// i-th marginal pushed through the i-th scalar map.
  std::vector<EntropyCurve> given_own_output;
};

struct ComponentwiseBound {
  double joint_loss = 0.0;
  /// (1/N) sum_i l(X^(i) -> Y).
  double bound_joint = 0.0;
  /// (1/N) sum_i l(X^(i) -> Y^(i)).
  double bound_marginal = 0.0;
};

/// Throws unless `d` is a product law of N >= 2 axes and `s` maps axis i to output i.
inline AxisPlan require_componentwise(const Distribution& d, const System& s) {
  validate(d);
  const std::size_t n = dimension(d);
  if (n < 2) throw ConfigError("componentwise bound: needs N >= 2");
  if (!has_independent_axes(d)) throw ConfigError("componentwise bound: input must be a product distribution");
  validate(s, n);
  AxisPlan plan = decompose(s, n);
  if (plan.output_axes.size() != n) throw ConfigError("componentwise bound: system must keep every axis");
  for (std::size_t i = 0; i < n; ++i) {
    if (plan.output_axes[i] != i || !plan.axis_maps[i]) {
      throw ConfigError("componentwise bound: system must act axis by axis");
    }
  }
  return plan;
}

inline ComponentwiseCurves component_curves(const Distribution& d, const System& s, const CurveOptions& opt) {
  const AxisPlan plan = require_componentwise(d, s);
  CurveOptions joint_opt = opt;
  joint_opt.mode = EstimatorMode::atom_oracle();
  ComponentwiseCurves out;
  out.joint = entropy_curve(d, s, joint_opt);
  for (std::size_t i = 0; i < plan.axis_maps.size(); ++i) {
    out.given_output.push_back(component_curve(out.joint, i));
    CurveOptions own = joint_opt;
    own.seed = derive_seed(opt.seed, i + 1);
    out.given_own_output.push_back(entropy_curve(marginal(d, i), *plan.axis_maps[i], own));
  }
  return out;
}

/// l(X -> Y) <= (1/N) sum l(X^(i) -> Y) <= (1/N) sum l(X^(i) -> Y^(i)), all
/// from slope estimators.
inline ComponentwiseBound componentwise_bound(const Distribution& d, const System& s, const ComponentwiseCurves& curves) {
  const AxisPlan plan = require_componentwise(d, s);
  const std::size_t n = plan.axis_maps.size();
  if (curves.given_output.size() != n || curves.given_own_output.size() != n) {
    throw ConfigError("componentwise bound: need one curve pair per component");
  }
  ComponentwiseBound out;
  out.joint_loss = relative_loss(curves.joint).slope;
  for (std::size_t i = 0; i < n; ++i) {
    out.bound_joint += relative_loss(curves.given_output[i]).slope;
    out.bound_marginal += relative_loss(curves.given_own_output[i]).slope;
  }
  out.bound_joint /= static_cast<double>(n);
  out.bound_marginal /= static_cast<double>(n);
  return out;
}

/// Everything derivable from one curve; bounds and Fano are filled in by callers.
inline LossReport loss_report(const EntropyCurve& curve, const Distribution& d, const System& s) {
  LossReport rep;
  const RelativeLoss rel = relative_loss(curve);
  rep.relative_ratio = rel.ratio;
  rep.relative_slope = rel.slope;
  rep.relative_slope_unclamped = rel.slope_unclamped;
  rep.d_x = rel.marginal;
  rep.d_cond = rel.conditional;
  rep.analytic = analytic_relative_loss(s, d);
  if (rep.analytic) rep.estimator_error = std::abs(rep.relative_slope - *rep.analytic);
  rep.absolute = absolute_loss(curve);
  rep.conditional_growth = conditional_growth(curve);
  try {
    rep.d_y = output_dimension(curve);
    rep.conjecture_gap = conjecture_gap(rep.relative_slope, rep.d_x, *rep.d_y);
  } catch (const InsufficientDataError&) {
  }
  return rep;
}

}  // namespace infoloss

#endif  // INFOLOSS_LOSS_HPP
