#ifndef INFOLOSS_ENTROPY_HPP
#define INFOLOSS_ENTROPY_HPP

// Plug-in (histogram) estimates of H(X_hat_n) and H(X_hat_n | Y) over the
// dyadic resolution ladder n = 2^k, all rows sharing one sample batch.

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "error.hpp"
#include "measure.hpp"
#include "quantizer.hpp"
#include "systems.hpp"

namespace infoloss {

/// Empirical law of X_hat_n.
struct BinCounts {
  std::map<BinIndex, std::uint64_t> table;
  std::uint64_t total = 0;

  void add(const BinIndex& idx, std::uint64_t count = 1) {
    table[idx] += count;
    total += count;
  }
};

/// Atom of P_Y, by its position in an AtomTable (or any stable id).
struct AtomId {
  std::int64_t id = 0;
  friend auto operator<=>(const AtomId&, const AtomId&) = default;
};

/// What H(X_hat_n | Y) conditions on: an exact atom of Y or a cell of Y at a
/// finer resolution m.
using ConditioningKey = std::variant<AtomId, BinIndex>;

/// -sum p log2 p over the nonzero counts; 0 for a single cell.
inline double plugin_entropy(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw DataError("plugin_entropy: empty counts");
  const double t = static_cast<double>(total);
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / t;
    h -= p * std::log2(p);
  }
  return std::max(0.0, h);
}

inline double plugin_entropy(const BinCounts& counts) {
  if (counts.total == 0 || counts.table.empty()) throw DataError("plugin_entropy: empty counts");
  std::vector<std::uint64_t> flat;
  flat.reserve(counts.table.size());
  for (const auto& [idx, c] : counts.table) flat.push_back(c);
  return plugin_entropy(flat);
}

/// First-order bias correction (distinct - 1) / (2 total ln 2), in bits.
inline double miller_madow_correction(std::size_t distinct, std::uint64_t total) {
  if (distinct <= 1 || total == 0) return 0.0;
  return static_cast<double>(distinct - 1) / (2.0 * static_cast<double>(total) * std::numbers::ln2);
}

/// sum over keys of (group total / grand total) * H(group).
inline double conditional_entropy(const std::map<ConditioningKey, BinCounts>& groups) {
  if (groups.empty()) throw DataError("conditional_entropy: no groups");
  std::uint64_t grand = 0;
  for (const auto& [key, counts] : groups) grand += counts.total;
  if (grand == 0) throw DataError("conditional_entropy: empty groups");
  double h = 0.0;
  for (const auto& [key, counts] : groups) {
    if (counts.total == 0) continue;
    h += static_cast<double>(counts.total) / static_cast<double>(grand) * plugin_entropy(counts);
  }
  return h;
}

namespace detail {

/// Multiplicities of identical rows of a row-major table, in lexicographic
/// row order. group_ends[g] is one past the last run of the g-th distinct
/// value of the leading `group_width` columns.
struct RunCounts {
  std::vector<std::uint64_t> counts;
  std::vector<std::size_t> group_ends;
};

inline RunCounts count_runs(std::span<const std::int64_t> flat, std::size_t width, std::size_t group_width) {
  RunCounts out;
  const std::size_t rows = width == 0 ? 0 : flat.size() / width;
  if (rows == 0) return out;

  std::vector<std::int64_t> lo(width, std::numeric_limits<std::int64_t>::max());
  std::vector<std::int64_t> hi(width, std::numeric_limits<std::int64_t>::min());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      lo[c] = std::min(lo[c], flat[r * width + c]);
      hi[c] = std::max(hi[c], flat[r * width + c]);
    }
  }
  // Mixed-radix packing into one word when the ranges allow it.
  std::vector<unsigned __int128> stride(width);
  unsigned __int128 span = 1;
  bool packable = true;
  for (std::size_t c = width; c-- > 0;) {
    stride[c] = span;
    span *= static_cast<unsigned __int128>(hi[c] - lo[c]) + 1;
    if (span > static_cast<unsigned __int128>(std::numeric_limits<std::uint64_t>::max())) {
      packable = false;
      break;
    }
  }

  if (packable) {
    std::vector<std::uint64_t> keys(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      std::uint64_t k = 0;
      for (std::size_t c = 0; c < width; ++c) {
        k += static_cast<std::uint64_t>(flat[r * width + c] - lo[c]) * static_cast<std::uint64_t>(stride[c]);
      }
      keys[r] = k;
    }
    std::sort(keys.begin(), keys.end());
    const std::uint64_t group_div = group_width == 0 ? 0 : static_cast<std::uint64_t>(stride[group_width - 1]);
    for (std::size_t r = 0; r < rows;) {
      std::size_t e = r + 1;
      while (e < rows && keys[e] == keys[r]) ++e;
      if (group_width > 0 && !out.counts.empty() && keys[r] / group_div != keys[r - 1] / group_div) {
        out.group_ends.push_back(out.counts.size());
      }
      out.counts.push_back(e - r);
      r = e;
    }
    out.group_ends.push_back(out.counts.size());
    return out;
  }

  std::vector<std::size_t> order(rows);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto row = [&](std::size_t r) { return flat.subspan(r * width, width); };
  auto less = [&](std::size_t a, std::size_t b) {
    const auto ra = row(a);
    const auto rb = row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  auto equal_prefix = [&](std::size_t a, std::size_t b, std::size_t w) {
    const auto ra = row(a);
    const auto rb = row(b);
    return std::equal(ra.begin(), ra.begin() + static_cast<std::ptrdiff_t>(w), rb.begin());
  };
  std::sort(order.begin(), order.end(), less);
  for (std::size_t i = 0; i < rows;) {
    std::size_t e = i + 1;
    while (e < rows && equal_prefix(order[e], order[i], width)) ++e;
    if (group_width > 0 && i > 0 && !equal_prefix(order[i], order[i - 1], group_width)) {
      out.group_ends.push_back(out.counts.size());
    }
    out.counts.push_back(e - i);
    i = e;
  }
  out.group_ends.push_back(out.counts.size());
  return out;
}

struct Estimate {
  double bits = 0.0;
  std::size_t distinct = 0;
};

inline Estimate entropy_of_rows(std::span<const std::int64_t> flat, std::size_t width, bool miller_madow) {
  const RunCounts runs = count_runs(flat, width, 0);
  const std::uint64_t total = flat.size() / width;
  double h = plugin_entropy(runs.counts);
  if (miller_madow) h += miller_madow_correction(runs.counts.size(), total);
  return {h, runs.counts.size()};
}

/// sum_g (S_g / S) H(group g) where the group is the leading column block.
/// `grand_total` may exceed the number of rows (rows outside any group
/// contribute zero entropy).
inline double conditional_of_rows(std::span<const std::int64_t> flat, std::size_t width, std::size_t group_width,
                                  std::uint64_t grand_total, bool miller_madow) {
  if (flat.empty()) return 0.0;
  const RunCounts runs = count_runs(flat, width, group_width);
  double h = 0.0;
  std::size_t begin = 0;
  for (std::size_t end : runs.group_ends) {
    const std::span<const std::uint64_t> group(runs.counts.data() + begin, end - begin);
    const std::uint64_t sg = std::accumulate(group.begin(), group.end(), std::uint64_t{0});
    double hg = plugin_entropy(group);
    if (miller_madow) hg += miller_madow_correction(group.size(), sg);
    h += static_cast<double>(sg) / static_cast<double>(grand_total) * hg;
    begin = end;
  }
  return h;
}

}  // namespace detail

struct EstimatorMode {
  enum class Kind { kAtomOracle, kTwoSided };
  Kind kind = Kind::kAtomOracle;
  /// Y-binning factor m / n of the two-sided mode.
  unsigned m_factor = 16;

  static EstimatorMode atom_oracle() { return {Kind::kAtomOracle, 16}; }
  static EstimatorMode two_sided(unsigned factor = 16) { return {Kind::kTwoSided, factor}; }

  std::string name() const {
    return kind == Kind::kAtomOracle ? "atom-oracle" : "two-sided(" + std::to_string(m_factor) + ")";
  }
};

struct CurveRow {
  int k = 0;
  std::uint64_t n = 1;
  double h_marginal = 0.0;
  double h_conditional = 0.0;
  /// H(Y_hat_n), the output's own entropy at the same resolution.
  double h_output = 0.0;
  std::size_t output_distinct = 0;
  std::size_t distinct_bins = 0;
  double samples_per_bin = 0.0;
  /// False when sample-count < 10 * distinct-bins.
  bool reliable = true;
  /// True when the conditional estimate exceeded the marginal and was capped.
  bool clamped = false;
  /// Per input axis (atom-oracle mode only): H(X_hat_n^(i)), H(X_hat_n^(i) | Y),
  /// and the number of occupied axis cells.
  std::vector<double> axis_marginal;
  std::vector<double> axis_conditional;
  std::vector<std::size_t> axis_distinct;
};

struct EntropyCurve {
  std::vector<CurveRow> rows;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;
  EstimatorMode mode;
  bool miller_madow = false;
  std::size_t input_dim = 0;
  std::size_t output_dim = 0;
};

struct CurveOptions {
  int k_min = 4;
  int k_max = 12;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  std::optional<EstimatorMode> mode;  // nullopt: default_mode()
  bool miller_madow = false;
};

inline constexpr std::size_t kMinCurveSamples = 1000;
inline constexpr double kOccupancyFactor = 10.0;

/// Why atom-oracle conditioning cannot be used for (system, dist); nullopt if it can.
inline std::optional<std::string> atom_oracle_unavailable(const System& s, const Distribution& d) {
  const std::size_t n = dimension(d);
  const AxisPlan plan = decompose(s, n);
  if (n > 1 && !has_independent_axes(d)) {
    return "atom-oracle conditioning needs mutually independent input axes when N > 1";
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (!plan.axis_maps[a]) continue;
    if (continuity(marginal(d, a)) == Continuity::kMixed && scalar_max_preimages(*plan.axis_maps[a]) > 1) {
      return "atom-oracle conditioning needs a purely continuous or purely discrete marginal on axis " +
             std::to_string(a) + " for a many-to-one map";
    }
  }
  return std::nullopt;
}

/// atom-oracle when the pair supports it, else two-sided(16).
inline EstimatorMode default_mode(const System& s, const Distribution& d) {
  return atom_oracle_unavailable(s, d) ? EstimatorMode::two_sided(16) : EstimatorMode::atom_oracle();
}

namespace detail {

/// Per-axis conditioning data for atom-oracle mode, computed once per batch.
struct AxisConditioning {
  bool dropped = false;
  /// Exact-atom group per sample, -1 outside the constant sets.
  std::vector<std::int64_t> group;
  std::uint64_t grouped = 0;
  /// Samples with several weighted preimages: sample index and slice of pre_x/pre_w.
  std::vector<std::size_t> multi_sample;
  std::vector<std::size_t> multi_offset{0};
  std::vector<double> pre_x;
  std::vector<double> pre_w;
};

inline AxisConditioning prepare_axis(const System& map, const Distribution& axis_law, const SampleBatch& batch,
                                     std::size_t axis) {
  AxisConditioning ac;
  const std::size_t count = batch.count();
  const Continuity law = continuity(axis_law);
  std::vector<double> y(count);
  for (std::size_t i = 0; i < count; ++i) y[i] = scalar_apply(map, batch.point(i)[axis]);

  // Exact output values of grouped samples become dense group ids.
  std::vector<bool> is_atom(count);
  std::vector<double> atom_values;
  for (std::size_t i = 0; i < count; ++i) {
    is_atom[i] = law == Continuity::kDiscrete || scalar_is_constant(map, batch.point(i)[axis]);
    if (is_atom[i]) atom_values.push_back(y[i]);
  }
  std::sort(atom_values.begin(), atom_values.end());
  atom_values.erase(std::unique(atom_values.begin(), atom_values.end()), atom_values.end());
  ac.group.assign(count, -1);
  for (std::size_t i = 0; i < count; ++i) {
    if (is_atom[i]) {
      ac.group[i] = std::lower_bound(atom_values.begin(), atom_values.end(), y[i]) - atom_values.begin();
      ++ac.grouped;
    }
  }

  if (law == Continuity::kDiscrete || scalar_max_preimages(map) <= 1) return ac;
  for (std::size_t i = 0; i < count; ++i) {
    if (is_atom[i]) continue;
    const auto pre = scalar_preimages(map, y[i]);
    if (pre.size() <= 1) continue;
    bool finite = true;
    std::vector<double> w;
    for (const auto& p : pre) {
      const double wi = density_1d(axis_law, p.x) / p.jacobian;
      finite = finite && std::isfinite(wi);
      w.push_back(wi);
    }
    if (!finite) continue;  // measure-zero critical points
    ac.multi_sample.push_back(i);
    for (std::size_t j = 0; j < pre.size(); ++j) {
      ac.pre_x.push_back(pre[j].x);
      ac.pre_w.push_back(w[j]);
    }
    ac.multi_offset.push_back(ac.pre_x.size());
  }
  return ac;
}

/// Entropy of the cell distribution induced by weighted preimages.
inline double preimage_cell_entropy(std::span<const double> xs, std::span<const double> ws, std::uint64_t n) {
  std::vector<std::pair<std::int64_t, double>> cells;
  double total = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    if (!(ws[j] > 0.0)) continue;
    const std::int64_t c = cell_floor(xs[j], n);
    total += ws[j];
    auto it = std::find_if(cells.begin(), cells.end(), [&](const auto& e) { return e.first == c; });
    if (it == cells.end()) {
      cells.emplace_back(c, ws[j]);
    } else {
      it->second += ws[j];
    }
  }
  if (cells.size() <= 1) return 0.0;
  std::sort(cells.begin(), cells.end());
  double h = 0.0;
  for (const auto& [c, w] : cells) {
    const double p = w / total;
    h -= p * std::log2(p);
  }
  return h;
}

inline double axis_conditional(const AxisConditioning& ac, const SampleBatch& batch, std::uint64_t n, std::span<const std::int64_t> axis_cells, bool miller_madow,
                               double axis_marginal_bits) {
  const std::size_t count = batch.count();
  if (ac.dropped) return axis_marginal_bits;
  double h = 0.0;
  if (ac.grouped > 0) {
    std::vector<std::int64_t> flat;
    flat.reserve(2 * ac.grouped);
    for (std::size_t i = 0; i < count; ++i) {
      if (ac.group[i] < 0) continue;
      flat.push_back(ac.group[i]);
      flat.push_back(axis_cells[i]);
    }
    h += conditional_of_rows(flat, 2, 1, count, miller_madow);
  }
  double multi = 0.0;
  for (std::size_t s = 0; s < ac.multi_sample.size(); ++s) {
    const std::size_t b = ac.multi_offset[s];
    const std::size_t e = ac.multi_offset[s + 1];
    multi += preimage_cell_entropy({ac.pre_x.data() + b, e - b}, {ac.pre_w.data() + b, e - b}, n);
  }
  return h + multi / static_cast<double>(count);
}

inline std::vector<std::int64_t> cells_of(std::span<const double> values, std::uint64_t n) {
  std::vector<std::int64_t> cells(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) throw DataError("entropy_curve: non-finite value");
    cells[i] = cell_floor(values[i], n);
  }
  return cells;
}

}  // namespace detail

/// Entropy curve from an existing batch drawn from `d`.
inline EntropyCurve entropy_curve_from_batch(const SampleBatch& batch, const Distribution& d, const System& s,
                                             const CurveOptions& opt) {
  validate(d);
  const std::size_t dim = dimension(d);
  validate(s, dim);
  if (batch.dim != dim) throw ConfigError("entropy_curve: batch dimension does not match distribution");
  if (opt.k_min < 0 || opt.k_max < opt.k_min || opt.k_max > 30) {
    throw ConfigError("entropy_curve: k range must satisfy 0 <= k_min <= k_max <= 30");
  }
  const std::size_t count = batch.count();
  if (count < kMinCurveSamples) throw ConfigError("entropy_curve: sample-count must be >= 1000");

  const EstimatorMode mode = opt.mode ? *opt.mode : default_mode(s, d);
  const AxisPlan plan = decompose(s, dim);
  if (mode.kind == EstimatorMode::Kind::kAtomOracle) {
    if (auto why = atom_oracle_unavailable(s, d)) throw ConfigError("entropy_curve: " + *why);
  } else if (mode.m_factor == 0) {
    throw ConfigError("entropy_curve: two-sided m-factor must be positive");
  }

  const std::size_t out_dim = plan.output_axes.size();
  const std::vector<double> y = apply_plan(plan, batch);

  std::vector<detail::AxisConditioning> axes;
  if (mode.kind == EstimatorMode::Kind::kAtomOracle) {
    for (std::size_t a = 0; a < dim; ++a) {
      if (!plan.axis_maps[a]) {
        detail::AxisConditioning ac;
        ac.dropped = true;
        axes.push_back(std::move(ac));
      } else {
        axes.push_back(detail::prepare_axis(*plan.axis_maps[a], dim == 1 ? d : marginal(d, a), batch, a));
      }
    }
  }

  EntropyCurve curve;
  curve.sample_count = count;
  curve.seed = batch.seed;
  curve.mode = mode;
  curve.miller_madow = opt.miller_madow;
  curve.input_dim = dim;
  curve.output_dim = out_dim;

  for (int k = opt.k_min; k <= opt.k_max; ++k) {
    CurveRow row;
    row.k = k;
    row.n = std::uint64_t{1} << k;
    const std::vector<std::int64_t> x_cells = detail::cells_of(batch.values, row.n);
    const auto marg = detail::entropy_of_rows(x_cells, dim, opt.miller_madow);
    row.h_marginal = marg.bits;
    row.distinct_bins = marg.distinct;
    row.samples_per_bin = static_cast<double>(count) / static_cast<double>(marg.distinct);
    row.reliable = static_cast<double>(count) >= kOccupancyFactor * static_cast<double>(marg.distinct);

    const std::vector<std::int64_t> y_cells = detail::cells_of(y, row.n);
    const auto out = detail::entropy_of_rows(y_cells, out_dim, opt.miller_madow);
    row.h_output = out.bits;
    row.output_distinct = out.distinct;

    double h_cond = 0.0;
    if (mode.kind == EstimatorMode::Kind::kAtomOracle) {
      for (std::size_t a = 0; a < dim; ++a) {
        std::vector<std::int64_t> axis_cells(count);
        for (std::size_t i = 0; i < count; ++i) axis_cells[i] = x_cells[i * dim + a];
        const auto axis_marg = dim == 1 ? marg : detail::entropy_of_rows(axis_cells, 1, opt.miller_madow);
        const double axis_cond =
            detail::axis_conditional(axes[a], batch, row.n, axis_cells, opt.miller_madow, axis_marg.bits);
        row.axis_marginal.push_back(axis_marg.bits);
        row.axis_conditional.push_back(axis_cond);
        row.axis_distinct.push_back(axis_marg.distinct);
        h_cond += axis_cond;
      }
    } else {
      const std::uint64_t m = row.n * mode.m_factor;
      const std::vector<std::int64_t> ym = detail::cells_of(y, m);
      std::vector<std::int64_t> flat;
      flat.reserve(count * (out_dim + dim));
      for (std::size_t i = 0; i < count; ++i) {
        flat.insert(flat.end(), ym.begin() + static_cast<std::ptrdiff_t>(i * out_dim),
                    ym.begin() + static_cast<std::ptrdiff_t>((i + 1) * out_dim));
        flat.insert(flat.end(), x_cells.begin() + static_cast<std::ptrdiff_t>(i * dim),
                    x_cells.begin() + static_cast<std::ptrdiff_t>((i + 1) * dim));
      }
      h_cond = detail::conditional_of_rows(flat, out_dim + dim, out_dim, count, opt.miller_madow);
    }
    if (h_cond > row.h_marginal) {
      row.clamped = h_cond > row.h_marginal + 1e-9;
      h_cond = row.h_marginal;
    }
    row.h_conditional = std::max(0.0, h_cond);
    curve.rows.push_back(std::move(row));
  }
  return curve;
}

/// One seeded Monte Carlo run over k = k_min..k_max.
inline EntropyCurve entropy_curve(const Distribution& d, const System& s, const CurveOptions& opt) {
  validate(d);
  if (opt.samples < kMinCurveSamples) throw ConfigError("entropy_curve: sample-count must be >= 1000");
  return entropy_curve_from_batch(sample(d, opt.samples, opt.seed), d, s, opt);
}

/// Per-component curve of axis `axis`: marginal H(X_hat_n^(i)) and
/// conditional H(X_hat_n^(i) | Y). Requires an atom-oracle curve.
inline EntropyCurve component_curve(const EntropyCurve& joint, std::size_t axis) {
  if (joint.mode.kind != EstimatorMode::Kind::kAtomOracle || axis >= joint.input_dim) {
    throw ConfigError("component_curve: needs an atom-oracle curve and a valid axis");
  }
  EntropyCurve c = joint;
  c.input_dim = 1;
  for (auto& row : c.rows) {
    row.h_marginal = row.axis_marginal[axis];
    row.h_conditional = std::min(row.axis_conditional[axis], row.h_marginal);
    row.distinct_bins = row.axis_distinct[axis];
    row.samples_per_bin = static_cast<double>(c.sample_count) / static_cast<double>(row.distinct_bins);
    row.reliable = static_cast<double>(c.sample_count) >= kOccupancyFactor * static_cast<double>(row.distinct_bins);
    row.axis_marginal = {row.h_marginal};
    row.axis_conditional = {row.h_conditional};
    row.axis_distinct = {row.distinct_bins};
  }
  return c;
}

}  // namespace infoloss

#endif  // INFOLOSS_ENTROPY_HPP
