#ifndef INFOLOSS_MEASURE_HPP
#define INFOLOSS_MEASURE_HPP

// Input laws P_X: declarative distribution specs, seeded sampling, and exact
// region probabilities for axis-aligned boxes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/math/special_functions/erf.hpp>

#include "error.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace infoloss {

using Point = std::vector<double>;

/// Closed axis-aligned box [lo, hi]; bounds may be infinite.
struct Box {
  Point lo;
  Point hi;

  std::size_t dim() const { return lo.size(); }

  bool contains(std::span<const double> x) const {
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (x[i] < lo[i] || x[i] > hi[i]) return false;
    }
    return true;
  }

  /// Box that is unbounded on every axis except `axis`.
  static Box slab(std::size_t dim, std::size_t axis, double lo, double hi) {
    const double inf = std::numeric_limits<double>::infinity();
    Box b{Point(dim, -inf), Point(dim, inf)};
    b.lo[axis] = lo;
    b.hi[axis] = hi;
    return b;
  }
};

struct Distribution;

struct UniformBox {
  Point lo;
  Point hi;
};

/// Independent axes, each a normal law truncated to [lo, hi].
struct TruncatedGaussian {
  Point mean;
  Point sigma;
  Point lo;
  Point hi;
};

struct FiniteDiscrete {
  std::vector<Point> points;
  std::vector<double> weights;
};

struct Mixture {
  std::vector<double> weights;
  std::vector<Distribution> components;
};

/// Independent factors; axes are concatenated in factor order.
struct Product {
  std::vector<Distribution> factors;
};

struct Distribution {
  std::variant<UniformBox, TruncatedGaussian, FiniteDiscrete, Mixture, Product> kind;

  static Distribution uniform(Point lo, Point hi) { return {UniformBox{std::move(lo), std::move(hi)}}; }
  static Distribution uniform(double lo, double hi) { return uniform(Point{lo}, Point{hi}); }
  static Distribution truncated_gaussian(Point mean, Point sigma, Point lo, Point hi) {
    return {TruncatedGaussian{std::move(mean), std::move(sigma), std::move(lo), std::move(hi)}};
  }
  static Distribution discrete(std::vector<Point> points, std::vector<double> weights) {
    return {FiniteDiscrete{std::move(points), std::move(weights)}};
  }
  static Distribution point_mass(Point p) { return discrete({std::move(p)}, {1.0}); }
  static Distribution mixture(std::vector<double> weights, std::vector<Distribution> components) {
    return {Mixture{std::move(weights), std::move(components)}};
  }
  static Distribution product(std::vector<Distribution> factors) { return {Product{std::move(factors)}}; }
};

/// Whether P_X is absolutely continuous, purely atomic, or a mix.
enum class Continuity { kContinuous, kDiscrete, kMixed };

std::size_t dimension(const Distribution& d);

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline constexpr double kWeightTolerance = 1e-12;

inline void check_weights(const std::vector<double>& w, const char* what) {
  if (w.empty()) throw ConfigError(std::string(what) + ": no weights");
  double sum = 0.0;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + ": weights must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kWeightTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": weights sum to " << sum << ", expected 1";
    throw ConfigError(os.str());
  }
}

inline void check_interval_axes(const Point& lo, const Point& hi, const char* what) {
  if (lo.empty() || lo.size() != hi.size()) throw ConfigError(std::string(what) + ": lo/hi dimension mismatch");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) {
      throw ConfigError(std::string(what) + ": support must be bounded");
    }
    if (!(hi[i] > lo[i])) throw ConfigError(std::string(what) + ": requires hi > lo on every axis");
  }
}

/// Standard normal probability of [a, b], evaluated on the tail side for accuracy.
inline double normal_interval(double a, double b) {
  if (b <= a) return 0.0;
  constexpr double r = 0.70710678118654752440;
  if (a >= 0.0) return 0.5 * (std::erfc(a * r) - std::erfc(b * r));
  if (b <= 0.0) return 0.5 * (std::erfc(-b * r) - std::erfc(-a * r));
  return 1.0 - 0.5 * std::erfc(-a * r) - 0.5 * std::erfc(b * r);
}

/// Inverse-CDF draw from N(0,1) restricted to [a, b].
inline double truncated_standard_normal(double a, double b, double u) {
  constexpr double s2 = 1.41421356237309504880;
  if (b <= 0.0) return -truncated_standard_normal(-b, -a, u);
  if (a >= 0.0) {
    const double qa = 0.5 * std::erfc(a / s2);
    const double qb = 0.5 * std::erfc(b / s2);
    const double q = qa - u * (qa - qb);
    return std::clamp(s2 * boost::math::erfc_inv(2.0 * q), a, b);
  }
  const double pa = 0.5 * std::erfc(-a / s2);
  const double mass = normal_interval(a, b);
  const double p = pa + u * mass;
  return std::clamp(-s2 * boost::math::erfc_inv(2.0 * p), a, b);
}

inline std::size_t pick(const std::vector<double>& weights, double u) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  // Trailing zero-weight entries are never chosen.
  std::size_t last = weights.size() - 1;
  while (last > 0 && weights[last] == 0.0) --last;
  return last;
}

inline void draw(const Distribution& d, SplitMix64& rng, std::span<double> out) {
  std::visit(overloaded{
                 [&](const UniformBox& u) {
                   for (std::size_t i = 0; i < out.size(); ++i) {
                     out[i] = u.lo[i] + (u.hi[i] - u.lo[i]) * rng.uniform();
                     if (out[i] >= u.hi[i]) out[i] = std::nextafter(u.hi[i], u.lo[i]);
                   }
                 },
                 [&](const TruncatedGaussian& g) {
                   for (std::size_t i = 0; i < out.size(); ++i) {
                     const double a = (g.lo[i] - g.mean[i]) / g.sigma[i];
                     const double b = (g.hi[i] - g.mean[i]) / g.sigma[i];
                     const double z = truncated_standard_normal(a, b, rng.open_uniform());
                     out[i] = std::clamp(g.mean[i] + g.sigma[i] * z, g.lo[i], g.hi[i]);
                   }
                 },
                 [&](const FiniteDiscrete& f) {
                   const auto& p = f.points[pick(f.weights, rng.uniform())];
                   std::copy(p.begin(), p.end(), out.begin());
                 },
                 [&](const Mixture& m) { draw(m.components[pick(m.weights, rng.uniform())], rng, out); },
                 [&](const Product& p) {
                   std::size_t offset = 0;
                   for (const auto& f : p.factors) {
                     const std::size_t n = dimension(f);
                     draw(f, rng, out.subspan(offset, n));
                     offset += n;
                   }
                 },
             },
             d.kind);
}

inline double interval_overlap(double a, double b, double lo, double hi) {
  return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

}  // namespace detail

inline std::size_t dimension(const Distribution& d) {
  return std::visit(detail::overloaded{
                        [](const UniformBox& u) { return u.lo.size(); },
                        [](const TruncatedGaussian& g) { return g.mean.size(); },
                        [](const FiniteDiscrete& f) { return f.points.empty() ? std::size_t{0} : f.points.front().size(); },
                        [](const Mixture& m) { return m.components.empty() ? std::size_t{0} : dimension(m.components.front()); },
                        [](const Product& p) {
                          std::size_t n = 0;
                          for (const auto& f : p.factors) n += dimension(f);
                          return n;
                        },
                    },
                    d.kind);
}

/// Throws ConfigError when the distribution violates an invariant.
inline void validate(const Distribution& d) {
  std::visit(detail::overloaded{
                 [](const UniformBox& u) { detail::check_interval_axes(u.lo, u.hi, "uniform-box"); },
                 [](const TruncatedGaussian& g) {
                   detail::check_interval_axes(g.lo, g.hi, "truncated-gaussian");
                   if (g.mean.size() != g.lo.size() || g.sigma.size() != g.lo.size()) {
                     throw ConfigError("truncated-gaussian: mean/sigma dimension mismatch");
                   }
                   for (std::size_t i = 0; i < g.sigma.size(); ++i) {
                     if (!(g.sigma[i] > 0.0) || !std::isfinite(g.sigma[i]) || !std::isfinite(g.mean[i])) {
                       throw ConfigError("truncated-gaussian: sigma must be positive and finite");
                     }
                     const double a = (g.lo[i] - g.mean[i]) / g.sigma[i];
                     const double b = (g.hi[i] - g.mean[i]) / g.sigma[i];
                     if (!(detail::normal_interval(a, b) > 0.0)) {
                       throw ConfigError("truncated-gaussian: truncation interval has no mass");
                     }
                   }
                 },
                 [](const FiniteDiscrete& f) {
                   if (f.points.empty() || f.points.size() != f.weights.size()) {
                     throw ConfigError("finite-discrete: points and weights must be nonempty and equal in length");
                   }
                   const std::size_t n = f.points.front().size();
                   if (n == 0) throw ConfigError("finite-discrete: zero-dimensional points");
                   for (const auto& p : f.points) {
                     if (p.size() != n) throw ConfigError("finite-discrete: inconsistent point dimensions");
                     for (double v : p) {
                       if (!std::isfinite(v)) throw ConfigError("finite-discrete: non-finite point");
                     }
                   }
                   detail::check_weights(f.weights, "finite-discrete");
                 },
                 [](const Mixture& m) {
                   if (m.components.empty() || m.components.size() != m.weights.size()) {
                     throw ConfigError("mixture: components and weights must be nonempty and equal in length");
                   }
                   detail::check_weights(m.weights, "mixture");
                   const std::size_t n = dimension(m.components.front());
                   for (const auto& c : m.components) {
                     validate(c);
                     if (dimension(c) != n) throw ConfigError("mixture: component dimensions differ");
                   }
                 },
                 [](const Product& p) {
                   if (p.factors.empty()) throw ConfigError("product: no factors");
                   for (const auto& f : p.factors) validate(f);
                 },
             },
             d.kind);
}

inline Continuity continuity(const Distribution& d) {
  return std::visit(detail::overloaded{
                        [](const UniformBox&) { return Continuity::kContinuous; },
                        [](const TruncatedGaussian&) { return Continuity::kContinuous; },
                        [](const FiniteDiscrete&) { return Continuity::kDiscrete; },
                        [](const Mixture& m) {
                          bool cont = false;
                          bool disc = false;
                          for (std::size_t i = 0; i < m.components.size(); ++i) {
                            if (m.weights[i] == 0.0) continue;
                            switch (continuity(m.components[i])) {
                              case Continuity::kContinuous: cont = true; break;
                              case Continuity::kDiscrete: disc = true; break;
                              case Continuity::kMixed: cont = disc = true; break;
                            }
                          }
                          return cont && disc ? Continuity::kMixed : (disc ? Continuity::kDiscrete : Continuity::kContinuous);
                        },
                        [](const Product& p) {
                          bool cont = false;
                          bool disc = false;
                          for (const auto& f : p.factors) {
                            switch (continuity(f)) {
                              case Continuity::kContinuous: cont = true; break;
                              case Continuity::kDiscrete: disc = true; break;
                              case Continuity::kMixed: cont = disc = true; break;
                            }
                          }
                          return cont && disc ? Continuity::kMixed : (disc ? Continuity::kDiscrete : Continuity::kContinuous);
                        },
                    },
                    d.kind);
}

/// Realizations of X, stored row-major (count x dim).
struct SampleBatch {
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::vector<double> values;

  std::size_t count() const { return dim == 0 ? 0 : values.size() / dim; }
  std::span<const double> point(std::size_t i) const { return {values.data() + i * dim, dim}; }
  std::span<double> point(std::size_t i) { return {values.data() + i * dim, dim}; }
};

/// `count` i.i.d. draws from `d`. Bit-identical for identical (d, count, seed)
/// regardless of the worker count.
inline SampleBatch sample(const Distribution& d, std::size_t count, std::uint64_t seed) {
  validate(d);
  if (count == 0) throw ConfigError("sample: count must be positive");
  SampleBatch batch;
  batch.dim = dimension(d);
  batch.seed = seed;
  batch.values.resize(count * batch.dim);
  for_each_chunk(count, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto rng = chunk_stream(seed, chunk);
    for (std::size_t i = begin; i < end; ++i) detail::draw(d, rng, batch.point(i));
  });
  return batch;
}

/// P_X(region) in closed form. The region is a closed box.
inline double region_prob(const Distribution& d, const Box& region) {
  if (region.dim() != dimension(d) || region.hi.size() != region.dim()) {
    throw ConfigError("region_prob: region dimension does not match distribution");
  }
  const double p = std::visit(
      detail::overloaded{
          [&](const UniformBox& u) {
            double prob = 1.0;
            for (std::size_t i = 0; i < u.lo.size(); ++i) {
              prob *= detail::interval_overlap(region.lo[i], region.hi[i], u.lo[i], u.hi[i]) / (u.hi[i] - u.lo[i]);
            }
            return prob;
          },
          [&](const TruncatedGaussian& g) {
            double prob = 1.0;
            for (std::size_t i = 0; i < g.lo.size(); ++i) {
              const double a = (std::max(region.lo[i], g.lo[i]) - g.mean[i]) / g.sigma[i];
              const double b = (std::min(region.hi[i], g.hi[i]) - g.mean[i]) / g.sigma[i];
              const double za = (g.lo[i] - g.mean[i]) / g.sigma[i];
              const double zb = (g.hi[i] - g.mean[i]) / g.sigma[i];
              prob *= detail::normal_interval(a, b) / detail::normal_interval(za, zb);
            }
            return prob;
          },
          [&](const FiniteDiscrete& f) {
            double prob = 0.0;
            for (std::size_t j = 0; j < f.points.size(); ++j) {
              if (region.contains(f.points[j])) prob += f.weights[j];
            }
            return prob;
          },
          [&](const Mixture& m) {
            double prob = 0.0;
            for (std::size_t j = 0; j < m.components.size(); ++j) prob += m.weights[j] * region_prob(m.components[j], region);
            return prob;
          },
          [&](const Product& p) {
            double prob = 1.0;
            std::size_t offset = 0;
            for (const auto& f : p.factors) {
              const std::size_t n = dimension(f);
              Box sub{Point(region.lo.begin() + offset, region.lo.begin() + offset + n),
                      Point(region.hi.begin() + offset, region.hi.begin() + offset + n)};
              prob *= region_prob(f, sub);
              offset += n;
            }
            return prob;
          },
      },
      d.kind);
  return std::clamp(p, 0.0, 1.0);
}

/// Smallest closed box containing the support.
inline Box bounding_box(const Distribution& d) {
  return std::visit(detail::overloaded{
                        [](const UniformBox& u) { return Box{u.lo, u.hi}; },
                        [](const TruncatedGaussian& g) { return Box{g.lo, g.hi}; },
                        [](const FiniteDiscrete& f) {
                          Box b{f.points.front(), f.points.front()};
                          for (const auto& p : f.points) {
                            for (std::size_t i = 0; i < p.size(); ++i) {
                              b.lo[i] = std::min(b.lo[i], p[i]);
                              b.hi[i] = std::max(b.hi[i], p[i]);
                            }
                          }
                          return b;
                        },
                        [](const Mixture& m) {
                          Box b = bounding_box(m.components.front());
                          for (const auto& c : m.components) {
                            const Box cb = bounding_box(c);
                            for (std::size_t i = 0; i < b.dim(); ++i) {
                              b.lo[i] = std::min(b.lo[i], cb.lo[i]);
                              b.hi[i] = std::max(b.hi[i], cb.hi[i]);
                            }
                          }
                          return b;
                        },
                        [](const Product& p) {
                          Box b;
                          for (const auto& f : p.factors) {
                            const Box fb = bounding_box(f);
                            b.lo.insert(b.lo.end(), fb.lo.begin(), fb.lo.end());
                            b.hi.insert(b.hi.end(), fb.hi.begin(), fb.hi.end());
                          }
                          return b;
                        },
                    },
                    d.kind);
}

namespace detail {

inline constexpr std::size_t kMaxExtremePoints = 1U << 16;

inline std::vector<Point> box_corners(const Point& lo, const Point& hi) {
  if (lo.size() >= 16) throw ConfigError("support_diameter: too many axes for corner enumeration");
  std::vector<Point> out;
  const std::size_t n = lo.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    Point p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = (mask >> i) & 1U ? hi[i] : lo[i];
    out.push_back(std::move(p));
  }
  return out;
}

/// A finite set whose convex hull equals the hull of the support; the
/// diameter of a set equals the diameter of its hull.
inline std::vector<Point> extreme_points(const Distribution& d) {
  return std::visit(overloaded{
                        [](const UniformBox& u) { return box_corners(u.lo, u.hi); },
                        [](const TruncatedGaussian& g) { return box_corners(g.lo, g.hi); },
                        [](const FiniteDiscrete& f) {
                          std::vector<Point> out;
                          for (std::size_t j = 0; j < f.points.size(); ++j) {
                            if (f.weights[j] > 0.0) out.push_back(f.points[j]);
                          }
                          return out;
                        },
                        [](const Mixture& m) {
                          std::vector<Point> out;
                          for (std::size_t j = 0; j < m.components.size(); ++j) {
                            if (m.weights[j] == 0.0) continue;
                            auto pts = extreme_points(m.components[j]);
                            out.insert(out.end(), pts.begin(), pts.end());
                          }
                          return out;
                        },
                        [](const Product& p) {
                          std::vector<Point> out{Point{}};
                          for (const auto& f : p.factors) {
                            const auto pts = extreme_points(f);
                            if (out.size() * pts.size() > kMaxExtremePoints) {
                              throw ConfigError("support_diameter: support too complex to enumerate");
                            }
                            std::vector<Point> next;
                            next.reserve(out.size() * pts.size());
                            for (const auto& head : out) {
                              for (const auto& tail : pts) {
                                Point q = head;
                                q.insert(q.end(), tail.begin(), tail.end());
                                next.push_back(std::move(q));
                              }
                            }
                            out = std::move(next);
                          }
                          return out;
                        },
                    },
                    d.kind);
}

}  // namespace detail

/// sup ||x - x'|| over support points.
inline double support_diameter(const Distribution& d) {
  validate(d);
  if (const auto* p = std::get_if<Product>(&d.kind)) {
    double sq = 0.0;
    for (const auto& f : p->factors) {
      const double df = support_diameter(f);
      sq += df * df;
    }
    return std::sqrt(sq);
  }
  if (const auto* u = std::get_if<UniformBox>(&d.kind)) {
    double sq = 0.0;
    for (std::size_t i = 0; i < u->lo.size(); ++i) sq += (u->hi[i] - u->lo[i]) * (u->hi[i] - u->lo[i]);
    return std::sqrt(sq);
  }
  if (const auto* g = std::get_if<TruncatedGaussian>(&d.kind)) {
    double sq = 0.0;
    for (std::size_t i = 0; i < g->lo.size(); ++i) sq += (g->hi[i] - g->lo[i]) * (g->hi[i] - g->lo[i]);
    return std::sqrt(sq);
  }
  const auto pts = detail::extreme_points(d);
  double best = 0.0;
  for (std::size_t a = 0; a < pts.size(); ++a) {
    for (std::size_t b = a + 1; b < pts.size(); ++b) {
      double sq = 0.0;
      for (std::size_t i = 0; i < pts[a].size(); ++i) sq += (pts[a][i] - pts[b][i]) * (pts[a][i] - pts[b][i]);
      best = std::max(best, sq);
    }
  }
  return std::sqrt(best);
}

/// One-dimensional marginal law of axis `axis`.
inline Distribution marginal(const Distribution& d, std::size_t axis) {
  return std::visit(detail::overloaded{
                        [&](const UniformBox& u) { return Distribution::uniform(u.lo[axis], u.hi[axis]); },
                        [&](const TruncatedGaussian& g) {
                          return Distribution::truncated_gaussian({g.mean[axis]}, {g.sigma[axis]}, {g.lo[axis]}, {g.hi[axis]});
                        },
                        [&](const FiniteDiscrete& f) {
                          std::vector<Point> pts;
                          for (const auto& p : f.points) pts.push_back({p[axis]});
                          return Distribution::discrete(std::move(pts), f.weights);
                        },
                        [&](const Mixture& m) {
                          std::vector<Distribution> comps;
                          for (const auto& c : m.components) comps.push_back(marginal(c, axis));
                          return Distribution::mixture(m.weights, std::move(comps));
                        },
                        [&](const Product& p) {
                          std::size_t offset = 0;
                          for (const auto& f : p.factors) {
                            const std::size_t n = dimension(f);
                            if (axis < offset + n) return marginal(f, axis - offset);
                            offset += n;
                          }
                          throw ConfigError("marginal: axis out of range");
                        },
                    },
                    d.kind);
}

/// True when the coordinates of X are mutually independent.
inline bool has_independent_axes(const Distribution& d) {
  if (dimension(d) == 1) return true;
  return std::visit(detail::overloaded{
                        [](const UniformBox&) { return true; },
                        [](const TruncatedGaussian&) { return true; },
                        [](const FiniteDiscrete&) { return false; },
                        [](const Mixture&) { return false; },
                        [](const Product& p) {
                          return std::all_of(p.factors.begin(), p.factors.end(),
                                             [](const Distribution& f) { return has_independent_axes(f); });
                        },
                    },
                    d.kind);
}

/// Density of a one-dimensional law at x. Atoms contribute nothing; callers
/// check continuity() first.
inline double density_1d(const Distribution& d, double x) {
  return std::visit(detail::overloaded{
                        [&](const UniformBox& u) { return x >= u.lo[0] && x <= u.hi[0] ? 1.0 / (u.hi[0] - u.lo[0]) : 0.0; },
                        [&](const TruncatedGaussian& g) {
                          if (x < g.lo[0] || x > g.hi[0]) return 0.0;
                          const double z = (x - g.mean[0]) / g.sigma[0];
                          const double za = (g.lo[0] - g.mean[0]) / g.sigma[0];
                          const double zb = (g.hi[0] - g.mean[0]) / g.sigma[0];
                          constexpr double inv_sqrt_2pi = 0.39894228040143267794;
                          return inv_sqrt_2pi * std::exp(-0.5 * z * z) / (g.sigma[0] * detail::normal_interval(za, zb));
                        },
                        [](const FiniteDiscrete&) { return 0.0; },
                        [&](const Mixture& m) {
                          double f = 0.0;
                          for (std::size_t j = 0; j < m.components.size(); ++j) f += m.weights[j] * density_1d(m.components[j], x);
                          return f;
                        },
                        [&](const Product& p) { return density_1d(p.factors.front(), x); },
                    },
                    d.kind);
}

namespace detail {

inline std::string join_point(const Point& p) {
  std::ostringstream os;
  os.precision(6);
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ";" : "") << p[i];
  return os.str();
}

}  // namespace detail

/// Compact CSV-safe label, e.g. "uniform[-1;1]".
inline std::string describe(const Distribution& d) {
  using detail::join_point;
  return std::visit(detail::overloaded{
                        [](const UniformBox& u) {
                          return u.lo.size() == 1 ? "uniform[" + join_point(u.lo) + ";" + join_point(u.hi) + "]"
                                                  : "uniform-box[" + join_point(u.lo) + "|" + join_point(u.hi) + "]";
                        },
                        [](const TruncatedGaussian& g) {
                          return "tgauss(" + join_point(g.mean) + "|" + join_point(g.sigma) + "|" + join_point(g.lo) + "|" +
                                 join_point(g.hi) + ")";
                        },
                        [](const FiniteDiscrete& f) { return "discrete(" + std::to_string(f.points.size()) + " points)"; },
                        [](const Mixture& m) {
                          std::ostringstream os;
                          os.precision(6);
                          os << "mixture(";
                          for (std::size_t j = 0; j < m.components.size(); ++j) {
                            os << (j ? " + " : "") << m.weights[j] << "*" << describe(m.components[j]);
                          }
                          os << ")";
                          return os.str();
                        },
                        [](const Product& p) {
                          std::string s = "product(";
                          for (std::size_t j = 0; j < p.factors.size(); ++j) s += (j ? " x " : "") + describe(p.factors[j]);
                          return s + ")";
                        },
                    },
                    d.kind);
}

}  // namespace infoloss

#endif  // INFOLOSS_MEASURE_HPP
