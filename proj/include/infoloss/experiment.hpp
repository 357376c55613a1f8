#ifndef INFOLOSS_EXPERIMENT_HPP
#define INFOLOSS_EXPERIMENT_HPP

// Experiment runner: JSON config -> sample -> apply -> quantize -> entropy ->
// dimension -> loss -> reconstruct, with JSON and CSV reports.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dimension.hpp"
#include "entropy.hpp"
#include "error.hpp"
#include "loss.hpp"
#include "measure.hpp"
#include "reconstruct.hpp"
#include "systems.hpp"
#include "version.hpp"

namespace infoloss {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Config parsing. Every error names the offending key path.

namespace config {

class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("config key '" + (path_.empty() ? std::string("<root>") : path_) + "': " + msg);
  }

  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  const Json& at(const std::string& key) const {
    used_.push_back(key);
    if (!j_.contains(key)) throw ConfigError("config key '" + child_path(key) + "': missing");
    return j_.at(key);
  }

  double number(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_number()) throw ConfigError("config key '" + child_path(key) + "': expected a number");
    return v.get<double>();
  }

  double number_or(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  std::int64_t integer(const std::string& key) const {
    const Json& v = at(key);
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::floor(d) == d && std::abs(d) < 9e15) return static_cast<std::int64_t>(d);
    }
    throw ConfigError("config key '" + child_path(key) + "': expected an integer");
  }

  std::int64_t integer_or(const std::string& key, std::int64_t fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  bool boolean_or(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const Json& v = at(key);
    if (!v.is_boolean()) throw ConfigError("config key '" + child_path(key) + "': expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_string()) throw ConfigError("config key '" + child_path(key) + "': expected a string");
    return v.get<std::string>();
  }

  std::string string_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  /// A number or a list of numbers.
  Point vector(const std::string& key) const {
    const Json& v = at(key);
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array() || v.empty()) throw ConfigError("config key '" + child_path(key) + "': expected a number or list");
    Point out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        throw ConfigError("config key '" + child_path(key) + "[" + std::to_string(i) + "]': expected a number");
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  const Json& list(const std::string& key) const {
    const Json& v = at(key);
    if (!v.is_array() || v.empty()) throw ConfigError("config key '" + child_path(key) + "': expected a nonempty list");
    return v;
  }

  /// Rejects keys that were never read.
  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (std::find(used_.begin(), used_.end(), key) == used_.end()) {
        throw ConfigError("config key '" + child_path(key) + "': unknown key");
      }
    }
  }

 private:
  const Json& j_;
  std::string path_;
  mutable std::vector<std::string> used_;
};

inline Distribution parse_distribution(const Json& j, const std::string& path);

inline Distribution parse_distribution(const Json& j, const std::string& path) {
  Reader r(j, path);
  const std::string kind = r.string("kind");
  Distribution d;
  if (kind == "uniform-box" || kind == "uniform") {
    d = Distribution::uniform(r.vector("lo"), r.vector("hi"));
  } else if (kind == "truncated-gaussian") {
    Point lo = r.vector("lo");
    Point mean = r.has("mean") ? r.vector("mean") : Point(lo.size(), 0.0);
    Point sigma = r.has("sigma") ? r.vector("sigma") : Point(lo.size(), 1.0);
    d = Distribution::truncated_gaussian(std::move(mean), std::move(sigma), std::move(lo), r.vector("hi"));
  } else if (kind == "finite-discrete") {
    const Json& pts = r.list("points");
    std::vector<Point> points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string p = r.child_path("points") + "[" + std::to_string(i) + "]";
      if (pts[i].is_number()) {
        points.push_back({pts[i].get<double>()});
      } else if (pts[i].is_array()) {
        Point q;
        for (const auto& v : pts[i]) {
          if (!v.is_number()) throw ConfigError("config key '" + p + "': expected numbers");
          q.push_back(v.get<double>());
        }
        points.push_back(std::move(q));
      } else {
        throw ConfigError("config key '" + p + "': expected a number or list");
      }
    }
    d = Distribution::discrete(std::move(points), r.vector("weights"));
  } else if (kind == "mixture") {
    const Json& comps = r.list("components");
    std::vector<double> weights;
    std::vector<Distribution> parts;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      Reader c(comps[i], r.child_path("components") + "[" + std::to_string(i) + "]");
      weights.push_back(c.number("weight"));
      parts.push_back(parse_distribution(c.at("distribution"), c.child_path("distribution")));
      c.finish();
    }
    d = Distribution::mixture(std::move(weights), std::move(parts));
  } else if (kind == "product") {
    const Json& fs = r.list("factors");
    std::vector<Distribution> factors;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      factors.push_back(parse_distribution(fs[i], r.child_path("factors") + "[" + std::to_string(i) + "]"));
    }
    d = Distribution::product(std::move(factors));
  } else {
    r.fail("unknown distribution kind '" + kind + "'");
  }
  r.finish();
  try {
    validate(d);
  } catch (const ConfigError& e) {
    r.fail(e.what());
  }
  return d;
}

inline System parse_system(const Json& j, const std::string& path) {
  Reader r(j, path);
  const std::string kind = r.string("kind");
  System s;
  if (kind == "identity") {
    s = System::identity();
  } else if (kind == "affine") {
    s = System::affine(r.number("scale"), r.number_or("offset", 0.0));
  } else if (kind == "center-clipper") {
    s = System::center_clipper(r.number("c"));
  } else if (kind == "magnitude-clipper") {
    s = System::magnitude_clipper(r.number("c"));
  } else if (kind == "uniform-quantizer") {
    s = System::uniform_quantizer(static_cast<int>(r.integer("levels")), r.number("lo"), r.number("hi"));
  } else if (kind == "square") {
    s = System::square();
  } else if (kind == "magnitude") {
    s = System::magnitude();
  } else if (kind == "coordinate-projection") {
    std::vector<std::size_t> kept;
    for (double v : r.vector("kept")) {
      if (v < 0 || std::floor(v) != v) r.fail("kept axes must be nonnegative integers");
      kept.push_back(static_cast<std::size_t>(v));
    }
    s = System::projection(std::move(kept));
  } else if (kind == "componentwise") {
    const Json& parts = r.list("parts");
    std::vector<System> ps;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      ps.push_back(parse_system(parts[i], r.child_path("parts") + "[" + std::to_string(i) + "]"));
    }
    s = System::componentwise(std::move(ps));
  } else if (kind == "composition") {
    System inner = parse_system(r.at("inner"), r.child_path("inner"));
    System outer = parse_system(r.at("outer"), r.child_path("outer"));
    s = System::compose(std::move(inner), std::move(outer));
  } else {
    r.fail("unknown system kind '" + kind + "'");
  }
  r.finish();
  return s;
}

}  // namespace config

struct ExperimentChecks {
  bool fano = true;
  bool componentwise = false;
  bool conjecture = true;
};

struct ExperimentConfig {
  std::string id = "experiment";
  Distribution distribution = Distribution::uniform(0.0, 1.0);
  System system = System::identity();
  int k_min = 4;
  int k_max = 12;
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 1;
  /// nullopt: atom-oracle when available, else two-sided(16).
  std::optional<EstimatorMode> mode;
  bool miller_madow = false;
  ExperimentChecks checks;
  /// Path prefix for <output>.json and <output>.csv; empty means <id>.
  std::string output;
  Json source;
};

inline ExperimentConfig parse_config(const Json& j) {
  config::Reader r(j, "");
  ExperimentConfig c;
  c.source = j;
  c.id = r.string_or("id", c.id);
  for (char ch : c.id) {
    if (ch == ',' || ch == '\n' || ch == '"') r.fail("id must not contain commas, quotes or newlines");
  }
  c.distribution = config::parse_distribution(r.at("distribution"), "distribution");
  c.system = config::parse_system(r.at("system"), "system");
  try {
    validate(c.system, dimension(c.distribution));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config key 'system': ") + e.what());
  }
  const std::int64_t k_min = r.integer_or("k_min", c.k_min);
  const std::int64_t k_max = r.integer_or("k_max", c.k_max);
  if (k_min < 1 || k_min > 20) throw ConfigError("config key 'k_min': must lie in [1, 20]");
  if (k_max <= k_min || k_max > 20) throw ConfigError("config key 'k_max': must satisfy k_min < k_max <= 20");
  c.k_min = static_cast<int>(k_min);
  c.k_max = static_cast<int>(k_max);
  const std::int64_t samples = r.integer_or("samples", static_cast<std::int64_t>(c.samples));
  if (samples < 1000) throw ConfigError("config key 'samples': must be >= 1000");
  c.samples = static_cast<std::size_t>(samples);
  const std::int64_t seed = r.integer_or("seed", 1);
  c.seed = static_cast<std::uint64_t>(seed);
  const std::string mode = r.string_or("mode", "auto");
  const std::int64_t factor = r.integer_or("m_factor", 16);
  if (factor < 1) throw ConfigError("config key 'm_factor': must be >= 1");
  if (mode == "atom-oracle") {
    c.mode = EstimatorMode::atom_oracle();
  } else if (mode == "two-sided") {
    c.mode = EstimatorMode::two_sided(static_cast<unsigned>(factor));
  } else if (mode != "auto") {
    throw ConfigError("config key 'mode': expected auto, atom-oracle or two-sided");
  }
  c.miller_madow = r.boolean_or("miller_madow", false);
  if (r.has("checks")) {
    config::Reader ch(r.at("checks"), "checks");
    c.checks.fano = ch.boolean_or("fano", c.checks.fano);
    c.checks.componentwise = ch.boolean_or("componentwise", c.checks.componentwise);
    c.checks.conjecture = ch.boolean_or("conjecture", c.checks.conjecture);
    ch.finish();
  }
  c.output = r.string_or("output", "");
  r.finish();
  return c;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) { return parse_config(load_json_file(path)); }

// ---------------------------------------------------------------------------
// Running and reporting.

struct RunReport {
  ExperimentConfig config;
  EntropyCurve curve;
  LossReport loss;
  std::vector<ErrorPoint> pe;
  std::optional<FanoCheck> fano;
  double wall_seconds = 0.0;
  std::string version = kVersion;
};

namespace detail {

/// Re-throws estimator errors with the stage that raised them.
template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(stage) + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(std::string(stage) + ": " + e.what());
  } catch (const InsufficientDataError& e) {
    throw InsufficientDataError(std::string(stage) + ": " + e.what());
  } catch (const UndefinedRelativeLossError& e) {
    throw UndefinedRelativeLossError(std::string(stage) + ": " + e.what());
  }
}

}  // namespace detail

inline RunReport run_experiment(const ExperimentConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  RunReport rep;
  rep.config = cfg;
  CurveOptions opt;
  opt.k_min = cfg.k_min;
  opt.k_max = cfg.k_max;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.mode = cfg.mode;
  opt.miller_madow = cfg.miller_madow;

  rep.curve = detail::in_stage("entropy", [&] { return entropy_curve(cfg.distribution, cfg.system, opt); });
  rep.loss = detail::in_stage("loss", [&] { return loss_report(rep.curve, cfg.distribution, cfg.system); });
  if (!cfg.checks.conjecture) rep.loss.conjecture_gap.reset();

  if (cfg.checks.componentwise) {
    const auto bound = detail::in_stage("componentwise", [&] {
      return componentwise_bound(cfg.distribution, cfg.system, component_curves(cfg.distribution, cfg.system, opt));
    });
    rep.loss.bound_joint = bound.bound_joint;
    rep.loss.bound_marginal = bound.bound_marginal;
  }
  if (cfg.checks.fano) {
    rep.pe = detail::in_stage("reconstruct", [&] {
      return error_sequence(cfg.distribution, cfg.system, cfg.k_min, cfg.k_max, cfg.samples, cfg.seed);
    });
    rep.fano = fano_check(rep.loss, rep.pe);
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

namespace csv {

inline constexpr const char* kCurveHeader =
    "experiment-id,system,distribution,k,n,samples,H-marginal-bits,H-conditional-bits,ratio,reliable-flag";
inline constexpr const char* kReportHeader = "experiment-id,metric,value";

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

inline std::string opt_num(const std::optional<double>& v) { return v ? num(*v) : "n/a"; }

inline std::string sanitize(std::string s) {
  for (char& ch : s) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ' ';
  }
  return s;
}

inline double row_ratio(const CurveRow& r) { return r.h_marginal > 0.0 ? r.h_conditional / r.h_marginal : 0.0; }

inline std::vector<std::string> curve_lines(const RunReport& rep) {
  std::vector<std::string> out;
  const std::string prefix = rep.config.id + "," + sanitize(describe(rep.config.system)) + "," +
                             sanitize(describe(rep.config.distribution)) + ",";
  for (const auto& r : rep.curve.rows) {
    out.push_back(prefix + std::to_string(r.k) + "," + std::to_string(r.n) + "," + std::to_string(rep.curve.sample_count) +
                  "," + num(r.h_marginal) + "," + num(r.h_conditional) + "," + num(row_ratio(r)) + "," +
                  (r.reliable ? "1" : "0"));
  }
  return out;
}

inline std::vector<std::pair<std::string, std::string>> report_metrics(const RunReport& rep) {
  const LossReport& l = rep.loss;
  return {
      {"d-X", num(l.d_x.slope)},
      {"d-cond", num(l.d_cond.slope)},
      {"relative-ratio", num(l.relative_ratio)},
      {"relative-slope", num(l.relative_slope)},
      {"analytic", opt_num(l.analytic)},
      {"absolute-or-diverging", l.absolute ? num(*l.absolute) : "diverging"},
      {"bound-joint", opt_num(l.bound_joint)},
      {"bound-marginal", opt_num(l.bound_marginal)},
      {"conjecture-gap", opt_num(l.conjecture_gap)},
      {"Pe-max", rep.fano ? num(rep.fano->pe_max) : "n/a"},
      {"fano-satisfied", rep.fano ? (rep.fano->satisfied ? "true" : "false") : "n/a"},
  };
}

inline std::vector<std::string> report_lines(const RunReport& rep) {
  std::vector<std::string> out;
  for (const auto& [metric, value] : report_metrics(rep)) out.push_back(rep.config.id + "," + metric + "," + value);
  return out;
}

/// Curve section followed by the report section, for any number of runs.
inline std::string render(const std::vector<std::string>& curve, const std::vector<std::string>& report) {
  std::string s = std::string(kCurveHeader) + "\n";
  for (const auto& l : curve) s += l + "\n";
  s += std::string(kReportHeader) + "\n";
  for (const auto& l : report) s += l + "\n";
  return s;
}

inline std::string render(const RunReport& rep) { return render(curve_lines(rep), report_lines(rep)); }

}  // namespace csv

namespace detail {

inline Json fit_json(const DimensionFit& f) {
  return Json{{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}, {"rows_used", f.rows_used}};
}

template <typename T>
Json opt_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace detail

inline Json report_json(const RunReport& rep) {
  Json rows = Json::array();
  for (const auto& r : rep.curve.rows) {
    Json row{{"k", r.k},
             {"n", r.n},
             {"h_marginal_bits", r.h_marginal},
             {"h_conditional_bits", r.h_conditional},
             {"h_output_bits", r.h_output},
             {"ratio", csv::row_ratio(r)},
             {"distinct_bins", r.distinct_bins},
             {"samples_per_bin", r.samples_per_bin},
             {"reliable", r.reliable},
             {"clamped", r.clamped}};
    if (!r.axis_conditional.empty()) {
      row["axis_marginal_bits"] = r.axis_marginal;
      row["axis_conditional_bits"] = r.axis_conditional;
    }
    rows.push_back(std::move(row));
  }
  const LossReport& l = rep.loss;
  Json loss{{"relative_ratio", l.relative_ratio},
            {"relative_slope", l.relative_slope},
            {"relative_slope_unclamped", l.relative_slope_unclamped},
            {"analytic", detail::opt_json(l.analytic)},
            {"estimator_error", detail::opt_json(l.estimator_error)},
            {"absolute_bits", l.absolute ? Json(*l.absolute) : Json("diverging")},
            {"conditional_growth_bits_per_step", l.conditional_growth},
            {"bound_joint", detail::opt_json(l.bound_joint)},
            {"bound_marginal", detail::opt_json(l.bound_marginal)},
            {"conjecture_gap", detail::opt_json(l.conjecture_gap)}};
  Json pe = Json::array();
  for (const auto& p : rep.pe) pe.push_back({{"k", p.k}, {"pe", p.pe}});
  Json fano = nullptr;
  if (rep.fano) {
    fano = {{"satisfied", rep.fano->satisfied},
            {"margin", rep.fano->margin},
            {"pe_max", rep.fano->pe_max},
            {"monotone", rep.fano->monotone}};
  }
  std::vector<int> unreliable;
  for (const auto& r : rep.curve.rows) {
    if (!r.reliable) unreliable.push_back(r.k);
  }
  return Json{{"id", rep.config.id},
              {"version", rep.version},
              {"config", rep.config.source},
              {"seed", rep.config.seed},
              {"estimator_mode", rep.curve.mode.name()},
              {"miller_madow", rep.curve.miller_madow},
              {"sample_count", rep.curve.sample_count},
              {"curve", rows},
              {"fits",
               {{"d_x", detail::fit_json(l.d_x)},
                {"d_cond", detail::fit_json(l.d_cond)},
                {"d_y", l.d_y ? detail::fit_json(*l.d_y) : Json(nullptr)}}},
              {"loss", loss},
              {"pe_sequence", pe},
              {"fano", fano},
              {"unreliable_rows", unreliable},
              {"wall_time_seconds", rep.wall_seconds}};
}

inline std::string output_prefix(const ExperimentConfig& cfg) { return cfg.output.empty() ? cfg.id : cfg.output; }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
}

/// Writes <prefix>.json and <prefix>.csv.
inline void write_report_files(const RunReport& rep) {
  const std::string prefix = output_prefix(rep.config);
  write_text(prefix + ".json", report_json(rep).dump(2) + "\n");
  write_text(prefix + ".csv", csv::render(rep));
}

// ---------------------------------------------------------------------------
// Sweeps.

/// Sets a dotted path ("system.c", "distribution.hi.0") inside a config.
inline void set_path(Json& j, const std::string& path, const Json& value) {
  Json* cur = &j;
  std::stringstream ss(path);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  if (parts.empty()) throw ConfigError("sweep: empty parameter name");
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const bool last = i + 1 == parts.size();
    if (cur->is_array()) {
      std::size_t idx = 0;
      try {
        idx = std::stoul(parts[i]);
      } catch (const std::exception&) {
        throw ConfigError("sweep: parameter '" + path + "' indexes a list with '" + parts[i] + "'");
      }
      if (idx >= cur->size()) throw ConfigError("sweep: parameter '" + path + "' index out of range");
      cur = &(*cur)[idx];
    } else if (cur->is_object()) {
      const bool top_level_default = i == 0 && last;
      if (!cur->contains(parts[i]) && !top_level_default) {
        throw ConfigError("sweep: parameter '" + path + "' does not exist in the template");
      }
      cur = &(*cur)[parts[i]];
    } else {
      throw ConfigError("sweep: parameter '" + path + "' does not exist in the template");
    }
  }
  *cur = value;
}

inline Json parse_value(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error&) {
    return Json(text);
  }
}

struct SweepResult {
  std::vector<RunReport> runs;
  std::string csv;
  /// Set when a value failed; runs before it are kept.
  std::optional<std::string> error;
};

/// One run per value with the parameter substituted; rows are tagged via
/// the experiment id "<id>[<param>=<value>]".
inline SweepResult sweep(const Json& tmpl, const std::string& param, const std::vector<std::string>& values,
                         std::optional<std::uint64_t> seed_override = std::nullopt) {
  if (values.empty()) throw ConfigError("sweep: no values");
  const ExperimentConfig base = parse_config(tmpl);
  SweepResult out;
  std::vector<std::string> curve;
  std::vector<std::string> report;
  for (const auto& v : values) {
    const std::string tag = base.id + "[" + param + "=" + v + "]";
    try {
      Json j = tmpl;
      set_path(j, param, parse_value(v));
      ExperimentConfig cfg = parse_config(j);
      cfg.id = tag;
      if (seed_override) cfg.seed = *seed_override;
      RunReport rep = run_experiment(cfg);
      auto c = csv::curve_lines(rep);
      auto r = csv::report_lines(rep);
      curve.insert(curve.end(), c.begin(), c.end());
      report.insert(report.end(), r.begin(), r.end());
      out.runs.push_back(std::move(rep));
    } catch (const std::exception& e) {
      out.error = std::string(param) + "=" + v + ": " + e.what();
      report.push_back(tag + ",sweep-aborted," + csv::sanitize(e.what()));
      break;
    }
  }
  out.csv = csv::render(curve, report);
  return out;
}

}  // namespace infoloss

#endif  // INFOLOSS_EXPERIMENT_HPP
