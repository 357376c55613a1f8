#ifndef INFOLOSS_RECONSTRUCT_HPP
#define INFOLOSS_RECONSTRUCT_HPP

// Cell-level MAP reconstruction of X from Y and the reconstruction-error
// bound P_e >= l(X -> Y).

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "entropy.hpp"
#include "error.hpp"
#include "loss.hpp"
#include "measure.hpp"
#include "quantizer.hpp"
#include "rng.hpp"
#include "systems.hpp"

namespace infoloss {

/// Reconstruction rule at resolution n. Atoms of Y are looked up in a table
/// learned from training samples (modal X_hat_n cell per atom); any other
/// output is inverted through the known preimages, choosing the cell of
/// largest posterior weight. Ties go to the smallest cell index.
class Reconstructor {
 public:
  struct AxisRule {
    bool dropped = false;
    bool discrete = false;
    std::optional<System> map;
    std::optional<Distribution> law;
    std::map<double, std::int64_t> atom_rule;
    std::vector<double> declared_atoms;
    std::int64_t global_modal = 0;
  };

  std::uint64_t resolution() const { return n_; }
  std::size_t training_count() const { return training_count_; }
  std::uint64_t training_seed() const { return training_seed_; }
  const std::vector<AxisRule>& axes() const { return axes_; }

  /// Chosen X_hat_n cell for output y.
  BinIndex cell_for(std::span<const double> y) const {
    if (y.size() != plan_.output_axes.size()) throw ConfigError("reconstruct: output dimension mismatch");
    BinIndex idx{std::vector<std::int64_t>(axes_.size()), n_};
    for (std::size_t a = 0; a < axes_.size(); ++a) idx.coords[a] = axes_[a].global_modal;
    for (std::size_t j = 0; j < y.size(); ++j) {
      const std::size_t a = plan_.output_axes[j];
      idx.coords[a] = axis_cell(axes_[a], y[j]);
    }
    return idx;
  }

  /// Midpoint of the chosen cell.
  Point reconstruct(std::span<const double> y) const { return cell_midpoint(cell_for(y)); }

  /// Training on an existing batch; see train_map_reconstructor().
  static Reconstructor train(const SampleBatch& batch, const Distribution& d, const System& s, std::uint64_t n) {
    validate(d);
    const std::size_t dim = dimension(d);
    validate(s, dim);
    if (n == 0) throw ConfigError("reconstructor: resolution must be >= 1");
    if (auto why = atom_oracle_unavailable(s, d)) throw ConfigError("reconstructor: " + *why);
    Reconstructor rec;
    rec.n_ = n;
    rec.training_count_ = batch.count();
    rec.training_seed_ = batch.seed;
    rec.plan_ = decompose(s, dim);
    for (std::size_t a = 0; a < dim; ++a) {
      AxisRule rule;
      std::vector<std::int64_t> cells(batch.count());
      for (std::size_t i = 0; i < batch.count(); ++i) cells[i] = cell_floor(batch.point(i)[a], n);
      rule.global_modal = modal_cell(cells);
      if (!rec.plan_.axis_maps[a]) {
        rule.dropped = true;
        rec.axes_.push_back(std::move(rule));
        continue;
      }
      const System& map = *rec.plan_.axis_maps[a];
      Distribution law = dim == 1 ? d : marginal(d, a);
      rule.discrete = continuity(law) == Continuity::kDiscrete;
      if (auto sets = scalar_constant_sets(map)) {
        for (const auto& iv : *sets) rule.declared_atoms.push_back(iv.value);
        std::sort(rule.declared_atoms.begin(), rule.declared_atoms.end());
      }
      std::map<double, std::map<std::int64_t, std::uint64_t>> hist;
      for (std::size_t i = 0; i < batch.count(); ++i) {
        const double x = batch.point(i)[a];
        if (rule.discrete || scalar_is_constant(map, x)) ++hist[scalar_apply(map, x)][cells[i]];
      }
      for (const auto& [yv, counts] : hist) {
        std::int64_t best = counts.begin()->first;
        std::uint64_t best_count = 0;
        for (const auto& [c, cnt] : counts) {
          if (cnt > best_count) {
            best = c;
            best_count = cnt;
          }
        }
        rule.atom_rule.emplace(yv, best);
      }
      rule.map = map;
      rule.law = std::move(law);
      rec.axes_.push_back(std::move(rule));
    }
    return rec;
  }

 private:
  static std::int64_t modal_cell(std::vector<std::int64_t> cells) {
    std::sort(cells.begin(), cells.end());
    std::int64_t best = cells.empty() ? 0 : cells.front();
    std::size_t best_count = 0;
    for (std::size_t i = 0; i < cells.size();) {
      std::size_t e = i + 1;
      while (e < cells.size() && cells[e] == cells[i]) ++e;
      if (e - i > best_count) {
        best = cells[i];
        best_count = e - i;
      }
      i = e;
    }
    return best;
  }

  std::int64_t axis_cell(const AxisRule& rule, double y) const {
    if (rule.dropped) return rule.global_modal;
    if (auto it = rule.atom_rule.find(y); it != rule.atom_rule.end()) return it->second;
    if (rule.discrete || std::binary_search(rule.declared_atoms.begin(), rule.declared_atoms.end(), y)) {
      return rule.global_modal;  // atom never seen in training
    }
    const auto pre = scalar_preimages(*rule.map, y);
    if (pre.empty()) return rule.global_modal;
    if (pre.size() == 1) return cell_floor(pre.front().x, n_);
    std::vector<std::pair<std::int64_t, double>> cells;
    for (const auto& p : pre) {
      const std::int64_t c = cell_floor(p.x, n_);
      const double w = density_1d(*rule.law, p.x) / p.jacobian;
      auto it = std::find_if(cells.begin(), cells.end(), [&](const auto& e) { return e.first == c; });
      if (it == cells.end()) {
        cells.emplace_back(c, w);
      } else {
        it->second += w;
      }
    }
    std::sort(cells.begin(), cells.end());
    auto best = cells.begin();
    for (auto it = cells.begin(); it != cells.end(); ++it) {
      if (it->second > best->second) best = it;
    }
    return best->first;
  }

  std::uint64_t n_ = 1;
  std::size_t training_count_ = 0;
  std::uint64_t training_seed_ = 0;
  AxisPlan plan_;
  std::vector<AxisRule> axes_;
};

inline Reconstructor train_map_reconstructor(const Distribution& d, const System& s, std::uint64_t n,
                                             std::size_t sample_count, std::uint64_t seed) {
  return Reconstructor::train(sample(d, sample_count, seed), d, s, n);
}

/// Fraction of a batch whose X_hat_n cell differs from the reconstruction.
inline double error_probability_on(const Reconstructor& rec, const SampleBatch& batch, const System& s) {
  if (batch.seed == rec.training_seed()) {
    throw ConfigError("error_probability: evaluation seed must differ from the training seed");
  }
  const AxisPlan plan = decompose(s, batch.dim);
  const std::vector<double> y = apply_plan(plan, batch);
  const std::size_t m = plan.output_axes.size();
  std::uint64_t errors = 0;
  for (std::size_t i = 0; i < batch.count(); ++i) {
    const BinIndex chosen = rec.cell_for({y.data() + i * m, m});
    const auto x = batch.point(i);
    for (std::size_t a = 0; a < x.size(); ++a) {
      if (cell_floor(x[a], rec.resolution()) != chosen.coords[a]) {
        ++errors;
        break;
      }
    }
  }
  return static_cast<double>(errors) / static_cast<double>(batch.count());
}

/// Estimate of P_e,n on held-out samples.
inline double error_probability(const Reconstructor& rec, const Distribution& d, const System& s,
                                 std::size_t eval_count, std::uint64_t seed) {
  if (seed == rec.training_seed()) {
    throw ConfigError("error_probability: evaluation seed must differ from the training seed");
  }
  return error_probability_on(rec, sample(d, eval_count, seed), s);
}

struct ErrorPoint {
  int k = 0;
  double pe = 0.0;
};

/// P_e,n for n = 2^k, k = k_min..k_max, with one training and one
/// evaluation batch shared by all resolutions.
inline std::vector<ErrorPoint> error_sequence(const Distribution& d, const System& s, int k_min, int k_max,
                                              std::size_t sample_count, std::uint64_t seed) {
  const SampleBatch train = sample(d, sample_count, derive_seed(seed, 0x7472616eULL));
  const SampleBatch eval = sample(d, sample_count, derive_seed(seed, 0x6576616cULL));
  std::vector<ErrorPoint> out;
  for (int k = k_min; k <= k_max; ++k) {
    const auto rec = Reconstructor::train(train, d, s, std::uint64_t{1} << k);
    out.push_back({k, error_probability_on(rec, eval, s)});
  }
  return out;
}

struct FanoCheck {
  bool satisfied = false;
  /// max_k P_e,n - relative loss.
  double margin = 0.0;
  double pe_max = 0.0;
  /// Whether P_e,n is nondecreasing in k up to the given noise.
  bool monotone = true;
};

inline constexpr double kFanoSlack = 0.02;
inline constexpr double kMonotoneNoise = 0.01;

inline FanoCheck fano_check(const LossReport& report, const std::vector<ErrorPoint>& pe) {
  FanoCheck out;
  if (pe.empty()) throw DataError("fano_check: empty error sequence");
  for (std::size_t i = 0; i < pe.size(); ++i) {
    out.pe_max = std::max(out.pe_max, pe[i].pe);
    if (i > 0 && pe[i].pe + kMonotoneNoise < pe[i - 1].pe) out.monotone = false;
  }
  out.satisfied = out.pe_max + kFanoSlack >= report.relative_slope;
  out.margin = out.pe_max - report.relative_slope;
  return out;
}

}  // namespace infoloss

#endif  // INFOLOSS_RECONSTRUCT_HPP
