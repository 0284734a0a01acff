#pragma once

// Experiment configuration: flat `key = value` text with dotted sections.
// Every key is listed in config_schema(); unknown or repeated keys are errors.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kdnls/gauge/gauge.hpp"
#include "kdnls/harness/io.hpp"
#include "kdnls/integrator/integrator.hpp"
#include "kdnls/lab/inequality_lab.hpp"

namespace kdnls {

enum class ExperimentKind {
  solve,
  picard,
  dissipation_study,
  eps_convergence,
  lipschitz,
  h2_growth,
  lemma_bench,
  corrections_check
};

enum class DataFamily { gaussian, plane_wave, random, file };

/// a exp(-(x - x0)^2 / (2 width^2)) e^{i k0 x}
struct GaussianSpec {
  double a = 1.0, x0 = 0.0, k0 = 0.0, width = 1.0;
};

struct DataSpec {
  DataFamily family = DataFamily::gaussian;
  GaussianSpec gaussian;
  cplx c{0.3, 0.0};  // plane wave c e^{ikx}
  double k = 1.0;
  std::size_t index = 0;  // random family: ensemble sample index
  std::string path;       // file family: snapshot
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::solve;
  std::uint64_t seed = 1;
  std::size_t n = 1024;
  double L = 32.0 * std::numbers::pi;
  ModelParams model;
  DataSpec data;
  EnsembleSpec ensemble;
  IntegratorConfig integ{1e-4, Scheme::etd_rk4, 0.5, 16, 1.0};
  BoundaryPolicy boundary = BoundaryPolicy::abort;
  double boundary_threshold = kDefaultBoundaryThreshold;

  bool regularize = false;
  double lambda = 0.25;

  std::vector<std::string> identity_lines;
  int identity_levels = 1;
  double min_order = 3.5;
  double h1_tol = 1e-6;

  bool write_ledger = true;
  bool write_snapshot = true;
  double ledger_C1 = 0.0;  // <= 0: escalate

  double beta0 = 1.0, probe_time = 0.1, margin = 1e-8, const_tol = 1e-10;

  RVec eps_ladder{1e-1, 3e-2, 1e-2, 3e-3, 1e-3};
  double eps_reference = 1e-4;
  double eps_l2_tol = 0.1, eps_h2_tol = 0.1, eps_monotone_slack = 0.05;

  RVec deltas{1e-2, 1e-3, 1e-4, 1e-5};
  GaussianSpec perturbation{1.0, 1.0, 0.0, std::numbers::sqrt2 / 2.0};
  double perturbation_phase = std::numbers::pi / 2.0;
  double lipschitz_tol = 0.1;

  int picard_iterations = 40, picard_nodes = 128, picard_refine = 4;
  double picard_T = 0.0;  // <= 0: the existence window
  double picard_window_mult = 1.0, picard_max_ratio = 0.8, picard_match_tol = 1e-6;

  bool bench_refine = true;
  double bench_max_change = 0.25;

  int corrections_instances = 20;
  double corrections_tol = 1e-10;

  bool allow_long_positive_beta = false;
  double positive_beta_T_max = 0.5;

  SpectralGrid grid() const { return make_grid(n, L); }
  EnsembleSpec seeded_ensemble() const {
    EnsembleSpec e = ensemble;
    e.seed = seed;
    return e;
  }
  GaugeOptions gauge_options(CumulativeRule rule = CumulativeRule::trapezoid) const {
    return GaugeOptions{rule, boundary, boundary_threshold};
  }
};

// Value codecs.

namespace cfgval {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep = ',') {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto p = s.find(sep, start);
    out.push_back(trim(s.substr(start, p == std::string_view::npos ? std::string_view::npos : p - start)));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

/// Decimal number, optionally suffixed by `pi` ("32pi", "-pi", "0.5pi").
inline double real(const std::string& s) {
  std::string body = s;
  double mult = 1.0;
  if (body.size() >= 2 && body.compare(body.size() - 2, 2, "pi") == 0) {
    body.resize(body.size() - 2);
    mult = std::numbers::pi;
    if (body.empty() || body == "+") body = "1";
    if (body == "-") body = "-1";
  }
  double v = 0.0;
  const char* b = body.data();
  if (!body.empty() && body[0] == '+') ++b;
  auto r = std::from_chars(b, body.data() + body.size(), v);
  if (body.empty() || r.ec != std::errc() || r.ptr != body.data() + body.size())
    throw ConfigError("not a number: '" + s + "'");
  v *= mult;
  if (!std::isfinite(v)) throw ConfigError("not finite: '" + s + "'");
  return v;
}

template <class I>
I integer(const std::string& s) {
  I v{};
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ConfigError("not an integer in range: '" + s + "'");
  return v;
}

inline bool boolean(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError("expected true or false: '" + s + "'");
}

inline RVec reals(const std::string& s) {
  RVec v;
  if (s.empty()) return v;
  for (const auto& t : split(s)) v.push_back(real(t));
  return v;
}

inline std::string join(const RVec& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

inline std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

template <class E>
struct EnumName {
  E value;
  const char* name;
};

template <class E, std::size_t N>
E parse_enum(const std::string& s, const EnumName<E> (&names)[N]) {
  for (const auto& e : names)
    if (s == e.name) return e.value;
  std::string opts;
  for (const auto& e : names) opts += std::string(opts.empty() ? "" : "|") + e.name;
  throw ConfigError("expected one of " + opts + ": '" + s + "'");
}

template <class E, std::size_t N>
std::string enum_name(E v, const EnumName<E> (&names)[N]) {
  for (const auto& e : names)
    if (e.value == v) return e.name;
  return "?";
}

inline constexpr EnumName<ExperimentKind> kKinds[] = {
    {ExperimentKind::solve, "solve"},
    {ExperimentKind::picard, "picard"},
    {ExperimentKind::dissipation_study, "dissipation-study"},
    {ExperimentKind::eps_convergence, "eps-convergence"},
    {ExperimentKind::lipschitz, "lipschitz"},
    {ExperimentKind::h2_growth, "h2-growth"},
    {ExperimentKind::lemma_bench, "lemma-bench"},
    {ExperimentKind::corrections_check, "corrections-check"}};
inline constexpr EnumName<DataFamily> kFamilies[] = {{DataFamily::gaussian, "gaussian"},
                                                     {DataFamily::plane_wave, "plane-wave"},
                                                     {DataFamily::random, "random"},
                                                     {DataFamily::file, "file"}};
inline constexpr EnumName<Scheme> kSchemes[] = {{Scheme::etd_rk4, "etd_rk4"}, {Scheme::ifrk4, "ifrk4"}};
inline constexpr EnumName<BoundaryPolicy> kPolicies[] = {
    {BoundaryPolicy::abort, "abort"}, {BoundaryPolicy::warn, "warn"}, {BoundaryPolicy::ignore, "ignore"}};

}  // namespace cfgval

inline std::string to_string(ExperimentKind k) { return cfgval::enum_name(k, cfgval::kKinds); }
inline ExperimentKind parse_kind(const std::string& s) { return cfgval::parse_enum(s, cfgval::kKinds); }

struct ConfigField {
  std::string key;
  std::string doc;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

namespace detail {

template <class A>
ConfigField real_field(std::string key, std::string doc, A acc) {
  return {std::move(key), std::move(doc),
          [acc](ExperimentConfig& c, const std::string& v) { acc(c) = cfgval::real(v); },
          [acc](const ExperimentConfig& c) { return format_double(acc(const_cast<ExperimentConfig&>(c))); }};
}

template <class A>
ConfigField int_field(std::string key, std::string doc, A acc) {
  using T = std::remove_reference_t<decltype(acc(std::declval<ExperimentConfig&>()))>;
  return {std::move(key), std::move(doc),
          [acc](ExperimentConfig& c, const std::string& v) { acc(c) = cfgval::integer<T>(v); },
          [acc](const ExperimentConfig& c) { return std::to_string(acc(const_cast<ExperimentConfig&>(c))); }};
}

template <class A>
ConfigField bool_field(std::string key, std::string doc, A acc) {
  return {std::move(key), std::move(doc),
          [acc](ExperimentConfig& c, const std::string& v) { acc(c) = cfgval::boolean(v); },
          [acc](const ExperimentConfig& c) { return acc(const_cast<ExperimentConfig&>(c)) ? "true" : "false"; }};
}

template <class A, class E, std::size_t N>
ConfigField enum_field(std::string key, std::string doc, A acc, const cfgval::EnumName<E> (&names)[N]) {
  return {std::move(key), std::move(doc),
          [acc, &names](ExperimentConfig& c, const std::string& v) { acc(c) = cfgval::parse_enum(v, names); },
          [acc, &names](const ExperimentConfig& c) {
            return cfgval::enum_name(acc(const_cast<ExperimentConfig&>(c)), names);
          }};
}

template <class A>
ConfigField list_field(std::string key, std::string doc, A acc) {
  return {std::move(key), std::move(doc),
          [acc](ExperimentConfig& c, const std::string& v) { acc(c) = cfgval::reals(v); },
          [acc](const ExperimentConfig& c) { return cfgval::join(acc(const_cast<ExperimentConfig&>(c))); }};
}

}  // namespace detail

#define KDNLS_ACC(expr) [](ExperimentConfig& c) -> auto& { return c.expr; }

inline const std::vector<ConfigField>& config_schema() {
  using namespace detail;
  static const std::vector<ConfigField> fields = {
      enum_field("experiment", "experiment kind", KDNLS_ACC(kind), cfgval::kKinds),
      int_field("seed", "seed for random data and ensembles", KDNLS_ACC(seed)),
      int_field("grid.n", "grid points, power of two >= 8", KDNLS_ACC(n)),
      real_field("grid.L", "half-length of [-L, L)", KDNLS_ACC(L)),
      real_field("model.alpha", "local coefficient", KDNLS_ACC(model.alpha)),
      real_field("model.beta", "nonlocal coefficient", KDNLS_ACC(model.beta)),
      real_field("model.epsilon", "parabolic regularization in [0,1)", KDNLS_ACC(model.epsilon)),
      bool_field("model.dealias", "2/3-rule dealiasing of products", KDNLS_ACC(model.dealias)),
      enum_field("data.family", "initial data family", KDNLS_ACC(data.family), cfgval::kFamilies),
      real_field("data.a", "gaussian amplitude", KDNLS_ACC(data.gaussian.a)),
      real_field("data.x0", "gaussian center", KDNLS_ACC(data.gaussian.x0)),
      real_field("data.k0", "gaussian carrier wavenumber", KDNLS_ACC(data.gaussian.k0)),
      real_field("data.width", "gaussian width", KDNLS_ACC(data.gaussian.width)),
      {"data.c", "plane-wave amplitude re,im",
       [](ExperimentConfig& c, const std::string& v) {
         RVec r = cfgval::reals(v);
         if (r.size() != 2) throw ConfigError("data.c expects re,im");
         c.data.c = cplx(r[0], r[1]);
       },
       [](const ExperimentConfig& c) { return cfgval::join(RVec{c.data.c.real(), c.data.c.imag()}); }},
      real_field("data.k", "plane-wave wavenumber, a multiple of pi/L", KDNLS_ACC(data.k)),
      int_field("data.index", "random family: ensemble sample index", KDNLS_ACC(data.index)),
      {"data.path", "file family: snapshot path",
       [](ExperimentConfig& c, const std::string& v) { c.data.path = v; },
       [](const ExperimentConfig& c) { return c.data.path; }},
      int_field("ensemble.count", "ensemble size", KDNLS_ACC(ensemble.count)),
      real_field("ensemble.band", "band limit in xi; <= 0 means xi_max/3", KDNLS_ACC(ensemble.band)),
      real_field("ensemble.decay", "coefficient decay exponent", KDNLS_ACC(ensemble.decay)),
      real_field("integrator.dt", "requested step", KDNLS_ACC(integ.dt)),
      real_field("integrator.t_end", "final time", KDNLS_ACC(integ.t_end)),
      int_field("integrator.stride", "steps between dense samples", KDNLS_ACC(integ.dense_output_stride)),
      enum_field("integrator.scheme", "time stepper", KDNLS_ACC(integ.scheme), cfgval::kSchemes),
      real_field("integrator.dt_safety", "advection guard factor in (0,1]", KDNLS_ACC(integ.dt_safety)),
      enum_field("boundary.policy", "boundary mass policy", KDNLS_ACC(boundary), cfgval::kPolicies),
      real_field("boundary.threshold", "boundary mass fraction threshold", KDNLS_ACC(boundary_threshold)),
      bool_field("regularize.apply", "low-pass the data at eps^-lambda (solve, picard)", KDNLS_ACC(regularize)),
      real_field("regularize.lambda", "regularization exponent in (0,1/2)", KDNLS_ACC(lambda)),
      {"identities.lines", "identity lines checked by solve: mass,h1,uxx,rho,vpm",
       [](ExperimentConfig& c, const std::string& v) {
         c.identity_lines.clear();
         if (!v.empty())
           for (auto& s : cfgval::split(v)) c.identity_lines.push_back(s);
       },
       [](const ExperimentConfig& c) { return cfgval::join(c.identity_lines); }},
      int_field("identities.levels", "dt halvings for the convergence study", KDNLS_ACC(identity_levels)),
      real_field("identities.min_order", "pass threshold for fitted orders", KDNLS_ACC(min_order)),
      real_field("identities.h1_tol", "pass threshold for the cumulative mass identity", KDNLS_ACC(h1_tol)),
      bool_field("output.ledger", "write the energy ledger", KDNLS_ACC(write_ledger)),
      bool_field("output.snapshot", "write the final snapshot", KDNLS_ACC(write_snapshot)),
      real_field("ledger.C1", "modified-energy constant; <= 0 escalates from 1", KDNLS_ACC(ledger_C1)),
      real_field("dissipation.beta0", "|beta| of the three branches", KDNLS_ACC(beta0)),
      real_field("dissipation.probe_time", "time at which margins are read", KDNLS_ACC(probe_time)),
      real_field("dissipation.margin", "minimal L2 change by the probe time", KDNLS_ACC(margin)),
      real_field("dissipation.const_tol", "relative L2 drift accepted as constant", KDNLS_ACC(const_tol)),
      list_field("eps.ladder", "strictly decreasing eps values in (0,1)", KDNLS_ACC(eps_ladder)),
      real_field("eps.reference", "reference eps, below the ladder", KDNLS_ACC(eps_reference)),
      real_field("eps.l2_tol", "L2 slope must reach 1 - l2_tol", KDNLS_ACC(eps_l2_tol)),
      real_field("eps.h2_tol", "H2 slope must reach 1 - 2 lambda - h2_tol", KDNLS_ACC(eps_h2_tol)),
      real_field("eps.monotone_slack", "relative slack for monotone distances", KDNLS_ACC(eps_monotone_slack)),
      list_field("lipschitz.deltas", "perturbation sizes", KDNLS_ACC(deltas)),
      real_field("lipschitz.a", "perturbation amplitude", KDNLS_ACC(perturbation.a)),
      real_field("lipschitz.x0", "perturbation center", KDNLS_ACC(perturbation.x0)),
      real_field("lipschitz.k0", "perturbation carrier", KDNLS_ACC(perturbation.k0)),
      real_field("lipschitz.width", "perturbation width", KDNLS_ACC(perturbation.width)),
      real_field("lipschitz.phase", "perturbation phase", KDNLS_ACC(perturbation_phase)),
      real_field("lipschitz.tol", "accepted |slope - 1|", KDNLS_ACC(lipschitz_tol)),
      int_field("picard.iterations", "maximum iterations", KDNLS_ACC(picard_iterations)),
      int_field("picard.nodes", "time nodes of the Duhamel quadrature", KDNLS_ACC(picard_nodes)),
      int_field("picard.refine", "steps per node of the comparison solve", KDNLS_ACC(picard_refine)),
      real_field("picard.T", "horizon; <= 0 uses the existence window", KDNLS_ACC(picard_T)),
      real_field("picard.window_mult", "multiplier of the existence window", KDNLS_ACC(picard_window_mult)),
      real_field("picard.max_ratio", "accepted successive distance ratio", KDNLS_ACC(picard_max_ratio)),
      real_field("picard.match_tol", "accepted H2 gap to the stepped solution", KDNLS_ACC(picard_match_tol)),
      bool_field("bench.refine", "repeat the bench at 2n", KDNLS_ACC(bench_refine)),
      real_field("bench.max_change", "accepted relative change of max ratios", KDNLS_ACC(bench_max_change)),
      int_field("corrections.instances", "random instances", KDNLS_ACC(corrections_instances)),
      real_field("corrections.tol", "accepted relative error", KDNLS_ACC(corrections_tol)),
      bool_field("policy.allow_long_positive_beta", "permit beta > 0 beyond the short horizon",
                 KDNLS_ACC(allow_long_positive_beta)),
      real_field("policy.positive_beta_T_max", "default horizon cap for beta > 0", KDNLS_ACC(positive_beta_T_max)),
  };
  return fields;
}

#undef KDNLS_ACC

inline const ConfigField& find_field(const std::string& key) {
  for (const auto& f : config_schema())
    if (f.key == key) return f;
  throw ConfigError("unknown key '" + key + "'");
}

inline void set_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  const auto& f = find_field(key);
  try {
    f.set(c, value);
  } catch (const ConfigError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

/// `key=value` override, as given on the command line.
inline void apply_override(ExperimentConfig& c, std::string_view kv) {
  const auto eq = kv.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override needs key=value: '" + std::string(kv) + "'");
  set_key(c, cfgval::trim(kv.substr(0, eq)), cfgval::trim(kv.substr(eq + 1)));
}

/// Parses onto the defaults. '#' starts a comment.
inline ExperimentConfig parse_config(std::string_view text, std::set<std::string>* keys = nullptr) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::size_t lineno = 0, start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    if (cfgval::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = cfgval::trim(line.substr(0, eq));
    if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": repeated key '" + key + "'");
    try {
      set_key(c, key, cfgval::trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (keys) *keys = std::move(seen);
  return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& p, std::set<std::string>* keys = nullptr) {
  try {
    return parse_config(read_text(p), keys);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

/// Every key in schema order; parses back to an identical configuration.
inline std::string canonical_text(const ExperimentConfig& c) {
  std::string out;
  for (const auto& f : config_schema()) out += f.key + " = " + f.get(c) + "\n";
  return out;
}

inline std::string config_hash(const ExperimentConfig& c) { return hex64(fnv1a64(canonical_text(c))); }

inline const std::set<std::string>& identity_line_names() {
  static const std::set<std::string> s = {"mass", "h1", "uxx", "rho", "vpm"};
  return s;
}

inline void validate(const ExperimentConfig& c) {
  if (c.n < 8 || (c.n & (c.n - 1)) != 0) throw ConfigError("grid.n must be a power of two >= 8");
  if (!(c.L > 0.0)) throw ConfigError("grid.L must be positive");
  c.model.validate();
  c.integ.validate();
  c.ensemble.validate();
  if (!(c.boundary_threshold > 0.0 && c.boundary_threshold < 1.0))
    throw ConfigError("boundary.threshold must lie in (0,1)");
  if (!(c.lambda > 0.0 && c.lambda < 0.5)) throw ConfigError("regularize.lambda must lie in (0,1/2)");
  if (c.eps_ladder.empty()) throw ConfigError("eps.ladder is empty");
  for (std::size_t i = 0; i < c.eps_ladder.size(); ++i) {
    const double e = c.eps_ladder[i];
    if (!(e > 0.0 && e < 1.0)) throw ConfigError("eps.ladder values must lie in (0,1)");
    if (i && !(e < c.eps_ladder[i - 1])) throw ConfigError("eps.ladder must be strictly decreasing");
  }
  if (!(c.eps_reference >= 0.0 && c.eps_reference < c.eps_ladder.back()))
    throw ConfigError("eps.reference must lie in [0, min eps.ladder)");
  std::size_t positive = 0;
  for (double d : c.deltas) {
    if (!(d >= 0.0)) throw ConfigError("lipschitz.deltas must be nonnegative");
    positive += d > 0.0;
  }
  if (c.kind == ExperimentKind::lipschitz && positive < 2)
    throw ConfigError("lipschitz.deltas needs at least two positive sizes");
  for (const auto& l : c.identity_lines)
    if (!identity_line_names().count(l)) throw ConfigError("identities.lines: unknown line '" + l + "'");
  if (c.identity_levels < 1) throw ConfigError("identities.levels must be >= 1");
  if (c.picard_iterations < 1 || c.picard_nodes < 1 || c.picard_refine < 1)
    throw ConfigError("picard.iterations, picard.nodes, picard.refine must be >= 1");
  if (c.corrections_instances < 1) throw ConfigError("corrections.instances must be >= 1");
  if (c.data.family == DataFamily::plane_wave) {
    const double j = c.data.k * c.L / std::numbers::pi;
    if (std::abs(j - std::round(j)) > 1e-9) throw ConfigError("data.k must be a multiple of pi/L");
  }
  if (c.data.family == DataFamily::file && c.data.path.empty()) throw ConfigError("data.path is empty");
  if (!(c.data.gaussian.width > 0.0) || !(c.perturbation.width > 0.0)) throw ConfigError("widths must be positive");
  const bool positive_branch =
      c.model.beta > 0.0 || (c.kind == ExperimentKind::dissipation_study && c.beta0 != 0.0);
  if (positive_branch && c.integ.t_end > c.positive_beta_T_max && !c.allow_long_positive_beta)
    throw ConfigError("beta > 0 runs are capped at t_end = " + format_double(c.positive_beta_T_max) +
                      "; set policy.allow_long_positive_beta = true to go further");
}

}  // namespace kdnls
