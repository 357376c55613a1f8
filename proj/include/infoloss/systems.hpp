#ifndef INFOLOSS_SYSTEMS_HPP
#define INFOLOSS_SYSTEMS_HPP

// Static (memoryless) deterministic maps Y = g(X) together with the
// structure the analytic oracles need: sets on which g is constant, and the
// finite preimage lists of the invertible pieces elsewhere.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "error.hpp"
#include "measure.hpp"

namespace infoloss {

struct System;

// Scalar kinds act elementwise on every axis of their input.
struct Identity {};
struct Affine {
  double scale = 1.0;
  double offset = 0.0;
};
/// g(x) = x if |x| > c, else 0.
struct CenterClipper {
  double c = 0.5;
};
/// g(x) = |x| if |x| > c, else 0.
struct MagnitudeClipper {
  double c = 0.5;
};
/// `levels` equal cells on [lo, hi); outputs are cell midpoints. Inputs
/// outside [lo, hi) fall into the first or last cell.
struct UniformQuantizer {
  int levels = 2;
  double lo = 0.0;
  double hi = 1.0;
};
struct Square {};
struct Magnitude {};

struct CoordinateProjection {
  std::vector<std::size_t> kept;
};
/// One scalar system per input axis.
struct Componentwise {
  std::vector<System> parts;
};
/// outer(inner(x)); stored as {inner, outer}.
struct Composition {
  std::vector<System> stages;
};

struct System {
  std::variant<Identity, Affine, CenterClipper, MagnitudeClipper, UniformQuantizer, Square, Magnitude, CoordinateProjection,
               Componentwise, Composition>
      kind;

  static System identity() { return {Identity{}}; }
  static System affine(double scale, double offset) { return {Affine{scale, offset}}; }
  static System center_clipper(double c) { return {CenterClipper{c}}; }
  static System magnitude_clipper(double c) { return {MagnitudeClipper{c}}; }
  static System uniform_quantizer(int levels, double lo, double hi) { return {UniformQuantizer{levels, lo, hi}}; }
  static System square() { return {Square{}}; }
  static System magnitude() { return {Magnitude{}}; }
  static System projection(std::vector<std::size_t> kept) { return {CoordinateProjection{std::move(kept)}}; }
  static System componentwise(std::vector<System> parts) { return {Componentwise{std::move(parts)}}; }
  static System compose(System inner, System outer) { return {Composition{{std::move(inner), std::move(outer)}}}; }
};

/// Closed interval with an output value; ends may be infinite.
struct ConstantInterval {
  double lo;
  double hi;
  double value;
};

/// A preimage of a scalar output together with |g'(x)|.
struct Preimage {
  double x;
  double jacobian;
};

namespace detail {

inline bool is_scalar_kind(const System& s) {
  return !std::holds_alternative<CoordinateProjection>(s.kind) && !std::holds_alternative<Componentwise>(s.kind) &&
         !std::holds_alternative<Composition>(s.kind);
}

inline double quantizer_width(const UniformQuantizer& q) { return (q.hi - q.lo) / q.levels; }

inline int quantizer_cell(const UniformQuantizer& q, double x) {
  const double t = std::floor((x - q.lo) / quantizer_width(q));
  if (!(t >= 0.0)) return 0;
  if (t >= q.levels - 1) return q.levels - 1;
  return static_cast<int>(t);
}

inline double quantizer_output(const UniformQuantizer& q, int cell) { return q.lo + (cell + 0.5) * quantizer_width(q); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Scalar (one-axis) maps. Composition of scalar maps is itself scalar.

inline double scalar_apply(const System& s, double x) {
  return std::visit(detail::overloaded{
                        [&](const Identity&) { return x; },
                        [&](const Affine& a) { return a.scale * x + a.offset; },
                        [&](const CenterClipper& c) { return std::abs(x) > c.c ? x : 0.0; },
                        [&](const MagnitudeClipper& c) { return std::abs(x) > c.c ? std::abs(x) : 0.0; },
                        [&](const UniformQuantizer& q) { return detail::quantizer_output(q, detail::quantizer_cell(q, x)); },
                        [&](const Square&) { return x * x; },
                        [&](const Magnitude&) { return std::abs(x); },
                        [&](const CoordinateProjection&) -> double { throw ConfigError("projection is not a scalar map"); },
                        [&](const Componentwise& c) -> double {
                          if (c.parts.size() != 1) throw ConfigError("componentwise system is not a scalar map");
                          return scalar_apply(c.parts.front(), x);
                        },
                        [&](const Composition& c) { return scalar_apply(c.stages[1], scalar_apply(c.stages[0], x)); },
                    },
                    s.kind);
}

/// Whether x lies in a set on which the scalar map is constant.
inline bool scalar_is_constant(const System& s, double x) {
  return std::visit(detail::overloaded{
                        [&](const CenterClipper& c) { return std::abs(x) <= c.c; },
                        [&](const MagnitudeClipper& c) { return std::abs(x) <= c.c; },
                        [&](const UniformQuantizer&) { return true; },
                        [&](const Componentwise& c) { return scalar_is_constant(c.parts.front(), x); },
                        [&](const Composition& c) {
                          return scalar_is_constant(c.stages[0], x) ||
                                 scalar_is_constant(c.stages[1], scalar_apply(c.stages[0], x));
                        },
                        [&](const auto&) { return false; },
                    },
                    s.kind);
}

/// All x outside the constant sets with g(x) = y.
inline std::vector<Preimage> scalar_preimages(const System& s, double y) {
  return std::visit(
      detail::overloaded{
          [&](const Identity&) { return std::vector<Preimage>{{y, 1.0}}; },
          [&](const Affine& a) { return std::vector<Preimage>{{(y - a.offset) / a.scale, std::abs(a.scale)}}; },
          [&](const CenterClipper& c) {
            return std::abs(y) > c.c ? std::vector<Preimage>{{y, 1.0}} : std::vector<Preimage>{};
          },
          [&](const MagnitudeClipper& c) {
            return y > c.c ? std::vector<Preimage>{{-y, 1.0}, {y, 1.0}} : std::vector<Preimage>{};
          },
          [&](const UniformQuantizer&) { return std::vector<Preimage>{}; },
          [&](const Square&) {
            if (y < 0.0) return std::vector<Preimage>{};
            const double r = std::sqrt(y);
            if (r == 0.0) return std::vector<Preimage>{{0.0, 1.0}};
            return std::vector<Preimage>{{-r, 2.0 * r}, {r, 2.0 * r}};
          },
          [&](const Magnitude&) {
            if (y < 0.0) return std::vector<Preimage>{};
            if (y == 0.0) return std::vector<Preimage>{{0.0, 1.0}};
            return std::vector<Preimage>{{-y, 1.0}, {y, 1.0}};
          },
          [&](const CoordinateProjection&) -> std::vector<Preimage> { throw ConfigError("projection is not a scalar map"); },
          [&](const Componentwise& c) { return scalar_preimages(c.parts.front(), y); },
          [&](const Composition& c) {
            std::vector<Preimage> out;
            for (const auto& z : scalar_preimages(c.stages[1], y)) {
              if (scalar_is_constant(c.stages[1], z.x)) continue;
              for (const auto& x : scalar_preimages(c.stages[0], z.x)) {
                out.push_back({x.x, x.jacobian * z.jacobian});
              }
            }
            return out;
          },
      },
      s.kind);
}

/// Largest number of preimages any output can have.
inline std::size_t scalar_max_preimages(const System& s) {
  return std::visit(detail::overloaded{
                        [](const MagnitudeClipper&) -> std::size_t { return 2; },
                        [](const Square&) -> std::size_t { return 2; },
                        [](const Magnitude&) -> std::size_t { return 2; },
                        [](const UniformQuantizer&) -> std::size_t { return 0; },
                        [](const Componentwise& c) { return scalar_max_preimages(c.parts.front()); },
                        [](const Composition& c) {
                          return scalar_max_preimages(c.stages[0]) * std::max<std::size_t>(1, scalar_max_preimages(c.stages[1]));
                        },
                        [](const auto&) -> std::size_t { return 1; },
                    },
                    s.kind);
}

/// Constant sets of a scalar map as disjoint closed intervals (shared
/// boundary points have zero mass under continuous inputs). nullopt when the
/// sets cannot be computed exactly, e.g. pulling back through a non-affine map.
inline std::optional<std::vector<ConstantInterval>> scalar_constant_sets(const System& s) {
  using Sets = std::vector<ConstantInterval>;
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(
      detail::overloaded{
          [](const CenterClipper& c) -> std::optional<Sets> { return Sets{{-c.c, c.c, 0.0}}; },
          [](const MagnitudeClipper& c) -> std::optional<Sets> { return Sets{{-c.c, c.c, 0.0}}; },
          [&](const UniformQuantizer& q) -> std::optional<Sets> {
            Sets out;
            const double w = detail::quantizer_width(q);
            for (int j = 0; j < q.levels; ++j) {
              const double lo = j == 0 ? -inf : q.lo + j * w;
              const double hi = j == q.levels - 1 ? inf : q.lo + (j + 1) * w;
              out.push_back({lo, hi, detail::quantizer_output(q, j)});
            }
            return out;
          },
          [](const CoordinateProjection&) -> std::optional<Sets> { throw ConfigError("projection is not a scalar map"); },
          [](const Componentwise& c) { return scalar_constant_sets(c.parts.front()); },
          [](const Composition& c) -> std::optional<Sets> {
            const System& inner = c.stages[0];
            const System& outer = c.stages[1];
            auto inner_sets = scalar_constant_sets(inner);
            auto outer_sets = scalar_constant_sets(outer);
            if (!inner_sets || !outer_sets) return std::nullopt;
            if (outer_sets->empty()) {
              for (auto& a : *inner_sets) a.value = scalar_apply(outer, a.value);
              return inner_sets;
            }
            // Pull the outer sets back through an affine (or identity) inner map.
            double scale = 1.0;
            double offset = 0.0;
            if (const auto* a = std::get_if<Affine>(&inner.kind)) {
              scale = a->scale;
              offset = a->offset;
            } else if (!std::holds_alternative<Identity>(inner.kind)) {
              return std::nullopt;
            }
            Sets out;
            for (const auto& b : *outer_sets) {
              double lo = (b.lo - offset) / scale;
              double hi = (b.hi - offset) / scale;
              if (lo > hi) std::swap(lo, hi);
              out.push_back({lo, hi, b.value});
            }
            std::sort(out.begin(), out.end(), [](const auto& l, const auto& r) { return l.lo < r.lo; });
            return out;
          },
          [](const auto&) -> std::optional<Sets> { return Sets{}; },
      },
      s.kind);
}

// ---------------------------------------------------------------------------
// Multi-axis structure.

/// Per-input-axis view of a system: each axis is either mapped by its own
/// scalar map or dropped; outputs list the input axis behind each output.
struct AxisPlan {
  std::vector<std::optional<System>> axis_maps;
  std::vector<std::size_t> output_axes;
};

AxisPlan decompose(const System& s, std::size_t input_dim);

namespace detail {

inline AxisPlan elementwise_plan(const System& s, std::size_t n) {
  AxisPlan plan;
  for (std::size_t i = 0; i < n; ++i) {
    plan.axis_maps.emplace_back(s);
    plan.output_axes.push_back(i);
  }
  return plan;
}

}  // namespace detail

inline AxisPlan decompose(const System& s, std::size_t input_dim) {
  if (input_dim == 0) throw ConfigError("system: input dimension must be positive");
  if (detail::is_scalar_kind(s)) return detail::elementwise_plan(s, input_dim);
  if (const auto* p = std::get_if<CoordinateProjection>(&s.kind)) {
    if (p->kept.empty()) throw ConfigError("coordinate-projection: kept-axes must be nonempty");
    AxisPlan plan;
    plan.axis_maps.resize(input_dim);
    for (std::size_t a : p->kept) {
      if (a >= input_dim) throw ConfigError("coordinate-projection: kept axis " + std::to_string(a) + " out of range");
      if (plan.axis_maps[a]) throw ConfigError("coordinate-projection: duplicate kept axis");
      plan.axis_maps[a] = System::identity();
      plan.output_axes.push_back(a);
    }
    return plan;
  }
  if (const auto* c = std::get_if<Componentwise>(&s.kind)) {
    if (c->parts.size() != input_dim) {
      throw ConfigError("componentwise: " + std::to_string(c->parts.size()) + " parts for input dimension " +
                        std::to_string(input_dim));
    }
    AxisPlan plan;
    for (std::size_t i = 0; i < input_dim; ++i) {
      AxisPlan sub = decompose(c->parts[i], 1);
      if (sub.output_axes.size() != 1) throw ConfigError("componentwise: each part must map one axis to one axis");
      plan.axis_maps.push_back(sub.axis_maps.front());
      plan.output_axes.push_back(i);
    }
    return plan;
  }
  const auto& comp = std::get<Composition>(s.kind);
  if (comp.stages.size() != 2) throw ConfigError("composition: needs exactly inner and outer");
  const AxisPlan inner = decompose(comp.stages[0], input_dim);
  const AxisPlan outer = decompose(comp.stages[1], inner.output_axes.size());
  AxisPlan plan;
  plan.axis_maps.resize(input_dim);
  for (std::size_t j = 0; j < outer.axis_maps.size(); ++j) {
    if (!outer.axis_maps[j]) continue;
    const std::size_t a = inner.output_axes[j];
    const System& in = *inner.axis_maps[a];
    const System& out = *outer.axis_maps[j];
    if (std::holds_alternative<Identity>(out.kind)) {
      plan.axis_maps[a] = in;
    } else if (std::holds_alternative<Identity>(in.kind)) {
      plan.axis_maps[a] = out;
    } else {
      plan.axis_maps[a] = System::compose(in, out);
    }
  }
  for (std::size_t j : outer.output_axes) plan.output_axes.push_back(inner.output_axes[j]);
  return plan;
}

inline std::size_t output_dim(const System& s, std::size_t input_dim) { return decompose(s, input_dim).output_axes.size(); }

namespace detail {

inline void validate_scalar(const System& s) {
  std::visit(overloaded{
                 [](const Affine& a) {
                   if (!(a.scale != 0.0) || !std::isfinite(a.scale) || !std::isfinite(a.offset)) {
                     throw ConfigError("affine: scale must be finite and nonzero");
                   }
                 },
                 [](const CenterClipper& c) {
                   if (!(c.c > 0.0) || !std::isfinite(c.c)) throw ConfigError("center-clipper: c must be positive");
                 },
                 [](const MagnitudeClipper& c) {
                   if (!(c.c > 0.0) || !std::isfinite(c.c)) throw ConfigError("magnitude-clipper: c must be positive");
                 },
                 [](const UniformQuantizer& q) {
                   if (q.levels < 2) throw ConfigError("uniform-quantizer: levels must be >= 2");
                   if (!(q.hi > q.lo) || !std::isfinite(q.lo) || !std::isfinite(q.hi)) {
                     throw ConfigError("uniform-quantizer: requires finite hi > lo");
                   }
                 },
                 [](const Componentwise& c) {
                   for (const auto& p : c.parts) validate_scalar(p);
                 },
                 [](const Composition& c) {
                   for (const auto& p : c.stages) validate_scalar(p);
                 },
                 [](const auto&) {},
             },
             s.kind);
}

}  // namespace detail

/// Throws ConfigError unless `s` is well formed for `input_dim` inputs.
inline void validate(const System& s, std::size_t input_dim) {
  const AxisPlan plan = decompose(s, input_dim);
  for (const auto& m : plan.axis_maps) {
    if (m) detail::validate_scalar(*m);
  }
}

/// Y = g(x).
inline Point apply(const System& s, std::span<const double> x) {
  const AxisPlan plan = decompose(s, x.size());
  Point y(plan.output_axes.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const std::size_t a = plan.output_axes[j];
    y[j] = scalar_apply(*plan.axis_maps[a], x[a]);
  }
  return y;
}

/// Applies a precomputed plan to every point of a batch (row-major in, row-major out).
inline std::vector<double> apply_plan(const AxisPlan& plan, const SampleBatch& batch) {
  const std::size_t m = plan.output_axes.size();
  std::vector<double> out(batch.count() * m);
  for (std::size_t i = 0; i < batch.count(); ++i) {
    const auto x = batch.point(i);
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t a = plan.output_axes[j];
      out[i * m + j] = scalar_apply(*plan.axis_maps[a], x[a]);
    }
  }
  return out;
}

/// Atoms of P_Y that arise from constant sets.
struct AtomTable {
  struct Entry {
    Point y;
    std::vector<Box> region;  // disjoint boxes whose union is A_i
    double mass = 0.0;
  };
  std::vector<Entry> entries;

  double total_mass() const {
    double m = 0.0;
    for (const auto& e : entries) m += e.mass;
    return m;
  }
};

/// Every output point carried with positive probability because g is
/// constant on a set of positive P_X measure. Atoms are keyed by exact output.
inline AtomTable atom_table(const System& s, const Distribution& d) {
  validate(d);
  const std::size_t n = dimension(d);
  validate(s, n);
  const AxisPlan plan = decompose(s, n);
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<ConstantInterval>> per_output;
  for (std::size_t a : plan.output_axes) {
    auto sets = scalar_constant_sets(*plan.axis_maps[a]);
    if (!sets) throw ConfigError("atom_table: constant sets of the system are not available");
    if (sets->empty()) return {};
    per_output.push_back(std::move(*sets));
  }
  std::map<Point, AtomTable::Entry> merged;
  std::vector<std::size_t> choice(per_output.size(), 0);
  while (true) {
    Box box{Point(n, -inf), Point(n, inf)};
    Point y(per_output.size());
    for (std::size_t j = 0; j < per_output.size(); ++j) {
      const auto& iv = per_output[j][choice[j]];
      const std::size_t a = plan.output_axes[j];
      box.lo[a] = iv.lo;
      box.hi[a] = iv.hi;
      y[j] = iv.value;
    }
    const double mass = region_prob(d, box);
    if (mass > 0.0) {
      auto& e = merged[y];
      e.y = y;
      e.region.push_back(box);
      e.mass += mass;
    }
    std::size_t j = 0;
    for (; j < choice.size(); ++j) {
      if (++choice[j] < per_output[j].size()) break;
      choice[j] = 0;
    }
    if (j == choice.size()) break;
  }
  AtomTable table;
  for (auto& [y, e] : merged) table.entries.push_back(std::move(e));
  return table;
}

/// Exact relative information loss for inputs with P_X << Lebesgue and maps
/// that are constant on finitely many boxes and piecewise bijective
/// elsewhere: the expected fraction of axes that land in a constant set
/// (dropped axes count as fully lost). For one axis this is P_X(A).
/// Returns nullopt whenever those hypotheses cannot be verified.
inline std::optional<double> analytic_relative_loss(const System& s, const Distribution& d) {
  validate(d);
  const std::size_t n = dimension(d);
  validate(s, n);
  if (continuity(d) != Continuity::kContinuous) return std::nullopt;
  const AxisPlan plan = decompose(s, n);
  double lost = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    if (!plan.axis_maps[a]) {
      lost += 1.0;
      continue;
    }
    const auto sets = scalar_constant_sets(*plan.axis_maps[a]);
    if (!sets) return std::nullopt;
    for (const auto& iv : *sets) lost += region_prob(d, Box::slab(n, a, iv.lo, iv.hi));
  }
  return std::clamp(lost / static_cast<double>(n), 0.0, 1.0);
}

/// Whether g has any constant set (on any axis) or drops an axis.
inline bool has_constant_sets(const System& s, std::size_t input_dim) {
  const AxisPlan plan = decompose(s, input_dim);
  for (const auto& m : plan.axis_maps) {
    if (!m) return true;
    const auto sets = scalar_constant_sets(*m);
    if (!sets || !sets->empty()) return true;
  }
  return false;
}

namespace detail {

inline std::string fmt_num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace detail

/// Compact CSV-safe label, e.g. "center-clipper(0.5)".
inline std::string describe(const System& s) {
  using detail::fmt_num;
  return std::visit(detail::overloaded{
                        [](const Identity&) -> std::string { return "identity"; },
                        [](const Affine& a) { return "affine(" + fmt_num(a.scale) + ";" + fmt_num(a.offset) + ")"; },
                        [](const CenterClipper& c) { return "center-clipper(" + fmt_num(c.c) + ")"; },
                        [](const MagnitudeClipper& c) { return "magnitude-clipper(" + fmt_num(c.c) + ")"; },
                        [](const UniformQuantizer& q) {
                          return "uniform-quantizer(" + std::to_string(q.levels) + ";" + fmt_num(q.lo) + ";" + fmt_num(q.hi) + ")";
                        },
                        [](const Square&) -> std::string { return "square"; },
                        [](const Magnitude&) -> std::string { return "magnitude"; },
                        [](const CoordinateProjection& p) {
                          std::string s = "projection(";
                          for (std::size_t i = 0; i < p.kept.size(); ++i) s += (i ? ";" : "") + std::to_string(p.kept[i]);
                          return s + ")";
                        },
                        [](const Componentwise& c) {
                          std::string s = "componentwise(";
                          for (std::size_t i = 0; i < c.parts.size(); ++i) s += (i ? " | " : "") + describe(c.parts[i]);
                          return s + ")";
                        },
                        [](const Composition& c) { return describe(c.stages[1]) + " o " + describe(c.stages[0]); },
                    },
                    s.kind);
}

}  // namespace infoloss

#endif  // INFOLOSS_SYSTEMS_HPP
