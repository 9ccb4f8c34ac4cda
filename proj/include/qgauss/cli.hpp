#pragma once

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgauss/catalog.hpp"
#include "qgauss/gaussmap.hpp"
#include "qgauss/quadric.hpp"
#include "qgauss/reconstruct.hpp"

namespace qgauss::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

// Bad command line or unreadable input.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct CommandOutput {
  Json report;
  std::string csv;
  int exit_code = kPass;
};

struct CommonOptions {
  std::uint64_t seed = 0;
  DiffScheme scheme = DiffScheme::dual;
  std::optional<double> tol;
  bool timing = false;
};

// Tolerances for one run.  `law` bounds identities that go through
// differentiation; `structural` bounds the Lagrangian/horizontality
// residuals.
struct Tolerances {
  double law;
  double structural;
  double projector;
};

inline Tolerances tolerances(const CommonOptions& o) {
  Tolerances t{1e-6, 1e-10, 1e-12};
  if (o.scheme == DiffScheme::fd) t = {1e-4, 1e-4, 1e-12};
  if (o.tol) t.law = *o.tol;
  return t;
}

// Non-finite values are written as null.
inline Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

inline Json config_echo(const std::string& command, const CommonOptions& o, const Tolerances& t) {
  Json c;
  c["command"] = command;
  c["version"] = kVersion;
  c["seed"] = o.seed;
  c["scheme"] = to_string(o.scheme);
  c["tolerances"] = {{"law", t.law}, {"structural", t.structural}, {"projector", t.projector}};
  return c;
}

class Verdicts {
 public:
  void add(const std::string& name, double value, double bound) {
    const bool ok = std::isfinite(value) && value <= bound;
    items_[name] = {{"pass", ok}, {"value", number(value)}, {"bound", bound}};
    pass_ = pass_ && ok;
  }
  void add_flag(const std::string& name, bool ok) {
    items_[name] = {{"pass", ok}};
    pass_ = pass_ && ok;
  }
  bool pass() const { return pass_; }
  Json json() const { return items_; }

 private:
  Json items_ = Json::object();
  bool pass_ = true;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void finish(CommandOutput& out, const Verdicts& v, const CommonOptions& o, const Stopwatch& clock) {
  out.report["verdicts"] = v.json();
  out.report["pass"] = v.pass();
  if (o.timing) out.report["timing"] = {{"seconds", clock.seconds()}};
  out.exit_code = v.pass() ? kPass : kFail;
}

inline CatalogEntry entry_or_usage(const std::string& spec) {
  try {
    return parse_entry(spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

inline std::string csv_number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

inline std::string csv_join(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ";" : "") + csv_number(xs[i]);
  return s;
}

// ---------------------------------------------------------------- lift files

struct LiftFile {
  int n = 0;
  Grid grid;
  std::vector<CVec> values;
  std::size_t base_point_index = 0;
};

inline Json lift_file_json(const LiftFile& f) {
  Json j;
  j["n"] = f.n;
  j["grid"] = Json::array();
  for (const auto& ax : f.grid.axes) j["grid"].push_back(ax);
  Json vals = Json::array();
  for (const auto& z : f.values)
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      vals.push_back(z[k].real());
      vals.push_back(z[k].imag());
    }
  j["values"] = std::move(vals);
  j["base_point_index"] = f.base_point_index;
  return j;
}

inline LiftFile sample_lift_file(const LagrangianPatch& patch, int resolution) {
  LiftFile f;
  f.n = patch.n;
  f.grid = Grid::uniform(patch.domain, resolution);
  f.base_point_index = f.grid.nearest(patch.base_point);
  f.values.reserve(f.grid.size());
  for (std::size_t i = 0; i < f.grid.size(); ++i) f.values.push_back(cvec_from_split(patch.lift(f.grid.point(i))));
  return f;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw UsageError("cannot write '" + path + "'");
  os << text;
}

// Parses and validates a lift file; any defect is a usage error.
inline LiftFile parse_lift_file(const Json& j) {
  try {
    LiftFile f;
    f.n = j.at("n").get<int>();
    if (f.n < 1) throw UsageError("lift file: n must be positive");
    const auto& grid = j.at("grid");
    if (!grid.is_array() || static_cast<int>(grid.size()) != f.n)
      throw UsageError("lift file: grid must hold n coordinate arrays");
    for (const auto& ax : grid) {
      auto v = ax.get<std::vector<double>>();
      if (v.size() < 2) throw UsageError("lift file: grid axis with fewer than 2 nodes");
      for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) throw UsageError("lift file: grid axis not strictly increasing");
      f.grid.axes.push_back(std::move(v));
    }
    const auto vals = j.at("values").get<std::vector<double>>();
    const std::size_t width = 2 * static_cast<std::size_t>(f.n + 2);
    if (vals.size() != width * f.grid.size()) throw UsageError("lift file: values size does not match the grid");
    f.values.reserve(f.grid.size());
    for (std::size_t i = 0; i < f.grid.size(); ++i) {
      CVec z(f.n + 2);
      for (int k = 0; k < f.n + 2; ++k) z[k] = Complex(vals[i * width + 2 * k], vals[i * width + 2 * k + 1]);
      try {
        StiefelPoint check(z, 1e-8);
      } catch (const Error& e) {
        throw UsageError("lift file: sample " + std::to_string(i) + " is not on the Stiefel manifold");
      }
      f.values.push_back(std::move(z));
    }
    f.base_point_index = j.at("base_point_index").get<std::size_t>();
    if (f.base_point_index >= f.grid.size()) throw UsageError("lift file: base_point_index outside the grid");
    return f;
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed lift file: ") + e.what());
  }
}

inline LiftFile read_lift_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw UsageError("cannot read '" + path + "'");
  Json j;
  try {
    j = Json::parse(is);
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed lift file: ") + e.what());
  }
  return parse_lift_file(j);
}

// ------------------------------------------------------------------ analyze

struct AnalyzeOptions {
  CommonOptions common;
  std::string entry;
  int samples = 100;
  double gauge = 0.7;                 // gauge used for the gauge-law record
  std::optional<std::string> dump_lift;
  int dump_grid = 0;                  // nodes per axis; 0 picks 49 for n <= 2 and 33 above
  double scramble = 0.0;              // coefficient of the product scramble in the dump
};

inline CommandOutput cmd_analyze(const AnalyzeOptions& o) {
  const Stopwatch clock;
  if (o.samples < 0) throw UsageError("--samples must be non-negative");
  const auto entry = entry_or_usage(o.entry);
  const auto tol = tolerances(o.common);
  CommandOutput out;
  out.report["config"] = config_echo("analyze", o.common, tol);
  out.report["config"]["entry"] = entry.label();
  out.report["config"]["samples"] = o.samples;
  out.report["config"]["gauge"] = o.gauge;

  SplitRng rng = SplitRng(o.common.seed).split(1);
  double worst_t1 = 0, worst_lag = 0, worst_hor = 0, worst_inv = 0, worst_gauge = 0, worst_eq7 = 0;
  int failures = 0;
  Json records = Json::array();
  out.csv = "index,coords,lambdas,thetas,theorem1,lagrangian,horizontality,invariant,gauge\n";
  for (int s = 0; s < o.samples; ++s) {
    const auto p = entry.patch.domain.sample(rng);
    Json r;
    r["index"] = s;
    r["coords"] = numbers(p);
    try {
      const auto pd = principal_data(entry.patch, p, o.common.scheme);
      const auto spec = angle_spectrum(entry.patch, pd, 0.0, o.common.scheme, std::max(kDecompositionTol, tol.law));
      const double t1 = verify_theorem1(spec);
      const auto lag = check_lagrangian(entry.patch, pd, o.common.scheme);
      const double eq7 = lift_principal_residual(entry.patch, pd, o.common.scheme);
      const double gauge = gauge_shift_check(entry.patch, pd, o.gauge, o.common.scheme);
      double inv = 0.0;
      Json pairs = Json::array();
      for (int j = 0; j < entry.patch.n; ++j)
        for (int k = j + 1; k < entry.patch.n; ++k) {
          if (!(std::abs(spec.lambdas[j] - spec.lambdas[k]) > kDistinctCurvatureMargin)) continue;
          const auto v = angle_difference_invariant(spec, j, k);
          inv = std::max(inv, v.residual);
          pairs.push_back({{"j", j},
                           {"k", k},
                           {"cot_difference", number(v.cot_difference)},
                           {"curvature_ratio", number(v.curvature_ratio)},
                           {"sign", v.sign}});
        }
      r["lambdas"] = numbers(spec.lambdas);
      r["thetas"] = numbers(spec.thetas);
      r["invariants"] = std::move(pairs);
      r["residuals"] = {{"theorem1", number(t1)},
                        {"lagrangian", number(lag.lagrangian)},
                        {"horizontality", number(lag.horizontality)},
                        {"principal_lift", number(eq7)},
                        {"decomposition", number(spec.residual)},
                        {"invariant", number(inv)},
                        {"gauge", number(gauge)}};
      worst_t1 = std::max(worst_t1, t1);
      worst_lag = std::max(worst_lag, lag.lagrangian);
      worst_hor = std::max(worst_hor, lag.horizontality);
      worst_eq7 = std::max(worst_eq7, eq7);
      worst_inv = std::max(worst_inv, inv);
      worst_gauge = std::max(worst_gauge, gauge);
      out.csv += std::to_string(s) + "," + csv_join(p) + "," + csv_join(spec.lambdas) + "," + csv_join(spec.thetas) +
                 "," + csv_number(t1) + "," + csv_number(lag.lagrangian) + "," + csv_number(lag.horizontality) + "," +
                 csv_number(inv) + "," + csv_number(gauge) + "\n";
    } catch (const Error& e) {
      r["error"] = e.what();
      ++failures;
    }
    records.push_back(std::move(r));
  }
  out.report["records"] = std::move(records);
  Verdicts v;
  v.add("theorem1", worst_t1, tol.law);
  v.add("lagrangian", worst_lag, tol.structural);
  v.add("horizontality", worst_hor, tol.structural);
  v.add("principal_lift", worst_eq7, tol.law);
  v.add("invariant", worst_inv, tol.law);
  v.add("gauge_law", worst_gauge, tol.law);
  v.add_flag("no_point_errors", failures == 0);

  if (o.dump_lift) {
    VectorMap scramble;
    if (o.scramble != 0.0) scramble = product_scramble(entry.patch.n, o.scramble);
    const int res = o.dump_grid > 0 ? o.dump_grid : (entry.patch.n <= 2 ? 49 : 33);
    const auto file = sample_lift_file(gauss_lagrangian(entry.patch, scramble), res);
    write_text(*o.dump_lift, lift_file_json(file).dump() + "\n");
    out.report["lift_dump"] = {{"path", *o.dump_lift}, {"grid", res}, {"scramble", o.scramble}};
  }
  finish(out, v, o.common, clock);
  return out;
}

// ----------------------------------------------------------- parallel sweep

struct SweepOptions {
  CommonOptions common;
  std::string entry;
  std::vector<double> ts;
  int samples = 10;
};

inline CommandOutput cmd_parallel_sweep(const SweepOptions& o) {
  const Stopwatch clock;
  const auto entry = entry_or_usage(o.entry);
  const auto tol = tolerances(o.common);
  CommandOutput out;
  out.report["config"] = config_echo("parallel-sweep", o.common, tol);
  out.report["config"]["entry"] = entry.label();
  out.report["config"]["samples"] = o.samples;
  out.report["config"]["t"] = numbers(o.ts);
  Verdicts v;
  if (o.ts.empty()) {
    out.report["records"] = Json::array();
    finish(out, v, o.common, clock);
    return out;
  }

  SplitRng rng = SplitRng(o.common.seed).split(2);
  double worst_proj = 0, worst_curv = 0, worst_angle = 0, worst_frame = 0, worst_inv = 0;
  bool flags_consistent = true;
  int failures = 0;
  Json records = Json::array();
  out.csv = "index,t,degenerate,margin,lambdas,thetas,curvature_residual,angle_residual,projector_distance\n";
  for (int s = 0; s < o.samples; ++s) {
    const auto p = entry.patch.domain.sample(rng);
    Json r;
    r["index"] = s;
    r["coords"] = numbers(p);
    try {
      const auto pd = principal_data(entry.patch, p, o.common.scheme);
      const auto base = angle_spectrum(entry.patch, pd, 0.0, o.common.scheme, std::max(kDecompositionTol, tol.law));
      const auto sweep = parallel_sweep(entry.patch, p, o.ts, o.common.scheme);
      double min_sin = 1.0;
      for (double th : base.thetas) min_sin = std::min(min_sin, std::abs(std::sin(th)));
      // Invariant of every distinct-curvature pair at t = 0 for the spread check.
      std::vector<std::pair<int, int>> pairs;
      std::vector<double> inv0;
      for (int j = 0; j < entry.patch.n; ++j)
        for (int k = j + 1; k < entry.patch.n; ++k)
          if (std::abs(base.lambdas[j] - base.lambdas[k]) > kDistinctCurvatureMargin) {
            pairs.emplace_back(j, k);
            inv0.push_back(angle_difference_invariant(base, j, k).curvature_ratio);
          }
      r["thetas0"] = numbers(base.thetas);
      r["lambdas0"] = numbers(base.lambdas);
      Json per_t = Json::array();
      for (const auto& rec : sweep) {
        Json e;
        e["t"] = rec.t;
        e["degenerate"] = rec.degenerate;
        e["margin"] = number(rec.margin);
        e["projector_distance"] = number(rec.projector_distance);
        worst_proj = std::max(worst_proj, rec.projector_distance);
        if (rec.degenerate) {
          const double im = immersion_margin(parallel_patch(entry.patch, rec.t), p, o.common.scheme);
          e["immersion_margin"] = number(im);
          const bool ok = im <= rec.margin / min_sin + 1e-6;
          flags_consistent = flags_consistent && ok;
          out.csv += std::to_string(s) + "," + csv_number(rec.t) + ",1," + csv_number(rec.margin) + ",,,,," +
                     csv_number(rec.projector_distance) + "\n";
        } else {
          e["lambdas"] = numbers(rec.lambdas);
          e["expected_lambdas"] = numbers(rec.expected_lambdas);
          e["thetas"] = numbers(rec.thetas);
          AngleSpectrum at;
          at.thetas = rec.thetas;
          at.lambdas = rec.lambdas;
          Json invs = Json::array();
          double spread = 0.0;
          for (std::size_t q = 0; q < pairs.size(); ++q) {
            const auto val = angle_difference_invariant(at, pairs[q].first, pairs[q].second);
            const double d = std::min(std::abs(val.curvature_ratio - inv0[q]), std::abs(val.curvature_ratio + inv0[q]));
            spread = std::max({spread, d, val.residual});
            invs.push_back({{"j", pairs[q].first},
                            {"k", pairs[q].second},
                            {"cot_difference", number(val.cot_difference)},
                            {"curvature_ratio", number(val.curvature_ratio)},
                            {"sign", val.sign}});
          }
          e["invariants"] = std::move(invs);
          e["residuals"] = {{"curvature", number(rec.curvature_residual)},
                            {"angle", number(rec.angle_residual)},
                            {"frame", number(rec.frame_residual)},
                            {"invariant_spread", number(spread)}};
          worst_curv = std::max(worst_curv, rec.curvature_residual);
          worst_angle = std::max(worst_angle, rec.angle_residual);
          worst_frame = std::max(worst_frame, rec.frame_residual);
          worst_inv = std::max(worst_inv, spread);
          out.csv += std::to_string(s) + "," + csv_number(rec.t) + ",0," + csv_number(rec.margin) + "," +
                     csv_join(rec.lambdas) + "," + csv_join(rec.thetas) + "," + csv_number(rec.curvature_residual) +
                     "," + csv_number(rec.angle_residual) + "," + csv_number(rec.projector_distance) + "\n";
        }
        per_t.push_back(std::move(e));
      }
      r["sweep"] = std::move(per_t);
    } catch (const Error& e) {
      r["error"] = e.what();
      ++failures;
    }
    records.push_back(std::move(r));
  }
  out.report["records"] = std::move(records);
  v.add("projector_distance", worst_proj, tol.projector);
  v.add("parallel_curvature", worst_curv, tol.law);
  v.add("angle_shift", worst_angle, tol.law);
  v.add("principal_frame", worst_frame, tol.law);
  v.add("invariant_spread", worst_inv, tol.law);
  v.add_flag("degenerate_flags", flags_consistent);
  v.add_flag("no_point_errors", failures == 0);
  finish(out, v, o.common, clock);
  return out;
}

// -------------------------------------------------------------- reconstruct

struct ReconstructCliOptions {
  CommonOptions common;
  std::string input;
  std::vector<double> ts;  // empty: AUTO
  std::optional<std::string> dump;
  int loops = 20;
  double loop_tol = 1e-6;
  double fidelity_tol = 1e-6;
  double normal_tol = 1e-6;
};

inline Json surface_dump(const LiftFile& f, const ReconstructedSurface& s) {
  Json j;
  j["label"] = "parallel hypersurface";
  j["t"] = s.t;
  j["n"] = f.n;
  j["grid"] = Json::array();
  for (const auto& ax : f.grid.axes) j["grid"].push_back(ax);
  Json a = Json::array(), b = Json::array();
  for (std::size_t i = 0; i < s.a.size(); ++i)
    for (std::size_t k = 0; k < s.a[i].size(); ++k) {
      a.push_back(s.a[i][k]);
      b.push_back(s.b[i][k]);
    }
  j["a"] = std::move(a);
  j["b"] = std::move(b);
  return j;
}

inline CommandOutput cmd_reconstruct(const ReconstructCliOptions& o) {
  const Stopwatch clock;
  const auto tol = tolerances(o.common);
  CommandOutput out;
  out.report["config"] = config_echo("reconstruct", o.common, tol);
  out.report["config"]["input"] = o.input;
  out.report["config"]["t"] = o.ts.empty() ? Json("auto") : numbers(o.ts);
  out.report["config"]["loops"] = o.loops;
  out.report["config"]["loop_tol"] = o.loop_tol;
  out.report["config"]["fidelity_tol"] = o.fidelity_tol;

  const auto file = read_lift_file(o.input);
  out.report["config"]["n"] = file.n;
  Json extents = Json::array();
  for (int k = 0; k < file.grid.dim(); ++k) extents.push_back(file.grid.extent(k));
  out.report["config"]["grid"] = std::move(extents);

  ReconstructOptions ropt;
  ropt.horizontalize.loops = o.loops;
  ropt.horizontalize.loop_tol = o.loop_tol;
  ropt.horizontalize.seed = o.common.seed;
  ropt.ts = o.ts;
  Verdicts v;
  Reconstruction rec;
  try {
    LiftSamples samples;
    try {
      samples = lift_samples_from_values(file.grid, file.values, file.base_point_index);
    } catch (const EmptyGrid& e) {
      throw UsageError(e.what());
    }
    rec = reconstruct(std::move(samples), ropt);
  } catch (const NotLagrangian& e) {
    out.report["error"] = {{"kind", "not_lagrangian"}, {"message", e.what()}};
    v.add_flag("lagrangian_input", false);
    finish(out, v, o.common, clock);
    return out;
  } catch (const DegenerateParameter& e) {
    out.report["error"] = {{"kind", "degenerate_parameter"}, {"message", e.what()}};
    v.add_flag("parameter", false);
    finish(out, v, o.common, clock);
    return out;
  } catch (const NotAnImmersion& e) {
    out.report["error"] = {{"kind", "not_an_immersion"}, {"message", e.what()}};
    v.add_flag("immersion", false);
    finish(out, v, o.common, clock);
    return out;
  }

  const auto& h = rec.horizontal;
  out.report["horizontalization"] = {{"loop_residual", number(h.loop_residual)},
                                     {"horizontality_residual", number(h.horizontality_residual)},
                                     {"base_point_index", h.samples.base_index}};
  out.report["auto"] = {{"t", rec.auto_choice.t}, {"margin", number(rec.auto_choice.margin)}};
  out.report["angle_residual"] = number(rec.angle_residual);
  Json surfaces = Json::array();
  double worst_fid = 0, worst_normal = 0, min_imm = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < rec.surfaces.size(); ++q) {
    const auto& s = rec.surfaces[q];
    surfaces.push_back({{"label", "parallel hypersurface"},
                        {"t", s.t},
                        {"margin", number(s.margin)},
                        {"min_immersion", number(s.min_immersion)},
                        {"normal_residual", number(s.normal_residual)},
                        {"projector_fidelity", number(s.projector_fidelity)}});
    worst_fid = std::max(worst_fid, s.projector_fidelity);
    worst_normal = std::max(worst_normal, s.normal_residual);
    min_imm = std::min(min_imm, s.min_immersion);
  }
  out.report["surfaces"] = std::move(surfaces);
  if (o.dump) {
    Json d = Json::array();
    for (const auto& s : rec.surfaces) d.push_back(surface_dump(file, s));
    write_text(*o.dump, d.dump() + "\n");
    out.report["surface_dump"] = *o.dump;
  }
  out.csv = "index,coords,phi,thetas\n";
  for (std::size_t i = 0; i < file.grid.size(); ++i)
    out.csv += std::to_string(i) + "," + csv_join(file.grid.point(i)) + "," + csv_number(h.phi[i]) + "," +
               csv_join(rec.thetas[i]) + "\n";

  v.add("loop_residual", h.loop_residual, o.loop_tol);
  v.add("horizontality", h.horizontality_residual, o.loop_tol);
  v.add("projector_fidelity", worst_fid, o.fidelity_tol);
  v.add("normal_alignment", worst_normal, o.normal_tol);
  v.add_flag("immersion", min_imm > kImmersionThreshold);
  finish(out, v, o.common, clock);
  return out;
}

// ----------------------------------------------------------- verify-quadric

struct QuadricOptions {
  CommonOptions common;
  int n = 2;
  int samples = 1000;
  int curves = 20;
};

inline CommandOutput cmd_verify_quadric(const QuadricOptions& o) {
  const Stopwatch clock;
  if (o.n < 2 || o.n > 6) throw UsageError("--n must be in 2..6");
  if (o.samples < 1) throw UsageError("--samples must be positive");
  const auto tol = tolerances(o.common);
  CommandOutput out;
  out.report["config"] = config_echo("verify-quadric", o.common, tol);
  out.report["config"]["n"] = o.n;
  out.report["config"]["samples"] = o.samples;
  out.report["config"]["curves"] = o.curves;

  const SplitRng root(o.common.seed);
  const double pi = std::numbers::pi;

  SplitRng r1 = root.split(10);
  const int algebra_count = std::min(o.samples, 1000);
  Lemma1Residuals l1;
  double antisym = 0, pair = 0, bianchi = 0, gauge_cov = 0;
  for (int s = 0; s < algebra_count; ++s) {
    const auto z = random_stiefel(o.n, r1);
    const ProductStructureChoice choice{z, r1.uniform(0.0, 2 * pi)};
    const auto X = random_tangent(z, r1), Y = random_tangent(z, r1), Z = random_tangent(z, r1),
               W = random_tangent(z, r1);
    const auto r = check_lemma1(choice, X, Y);
    l1.involution = std::max(l1.involution, r.involution);
    l1.symmetry = std::max(l1.symmetry, r.symmetry);
    l1.anticommutation = std::max(l1.anticommutation, r.anticommutation);
    const auto A0X = apply_A({z, 0.0}, X);
    const CVec cov = std::cos(choice.phi) * A0X.w + std::sin(choice.phi) * apply_J(A0X).w;
    gauge_cov = std::max(gauge_cov, (apply_A(choice, X).w - cov).norm());
    const double rxyzw = g(curvature_R(choice, X, Y, Z), W);
    antisym = std::max(antisym, std::abs(rxyzw + g(curvature_R(choice, Y, X, Z), W)));
    pair = std::max(pair, std::abs(rxyzw - g(curvature_R(choice, Z, W, X), Y)));
    const CVec b = curvature_R(choice, X, Y, Z).w + curvature_R(choice, Y, Z, X).w + curvature_R(choice, Z, X, Y).w;
    bianchi = std::max(bianchi, b.norm());
  }
  out.report["lemma1"] = {{"samples", algebra_count},
                          {"involution", number(l1.involution)},
                          {"symmetry", number(l1.symmetry)},
                          {"anticommutation", number(l1.anticommutation)},
                          {"gauge_covariance", number(gauge_cov)}};
  out.report["curvature"] = {{"antisymmetry", number(antisym)}, {"pair_symmetry", number(pair)},
                             {"bianchi", number(bianchi)}};

  SplitRng r2 = root.split(11);
  double einstein_dev = 0, einstein_res = 0;
  Json ricci = Json::array();
  for (int s = 0; s < 5; ++s) {
    const auto z = random_stiefel(o.n, r2);
    const auto rep = ricci_check({z, r2.uniform(0.0, 2 * pi)}, tangent_basis(z));
    ricci.push_back({{"einstein_constant", rep.einstein_constant}, {"residual", number(rep.residual)}});
    einstein_dev = std::max(einstein_dev, std::abs(rep.einstein_constant - 2.0 * o.n));
    einstein_res = std::max(einstein_res, rep.residual);
  }
  out.report["einstein"] = {{"expected", 2 * o.n}, {"points", std::move(ricci)}};

  SplitRng r3 = root.split(12);
  const auto z = random_stiefel(o.n, r3);
  const auto range = sectional_range({z, 0.0}, static_cast<std::size_t>(o.samples), r3);
  out.report["sectional"] = {{"samples", range.samples},
                             {"evaluations", range.evaluations},
                             {"sampled_min", number(range.sampled_min)},
                             {"sampled_max", number(range.sampled_max)},
                             {"min", number(range.min)},
                             {"max", number(range.max)}};

  SplitRng r4 = root.split(13);
  double worst_rest = 0, max_s = 0;
  Json curves = Json::array();
  for (int c = 0; c < o.curves; ++c) {
    const auto z0 = random_stiefel(o.n, r4);
    const auto K = random_skew(o.n + 2, r4);
    const double tau = r4.uniform(-1.0, 1.0);
    const auto rep = check_lemma2(rotation_curve(z0, K), tau);
    curves.push_back({{"tau", tau}, {"s", number(rep.s)}, {"a_coefficient", number(rep.a_coefficient)},
                      {"rest", number(rep.rest)}});
    worst_rest = std::max(worst_rest, rep.rest);
    max_s = std::max(max_s, std::abs(rep.s));
  }
  out.report["lemma2"] = std::move(curves);

  Verdicts v;
  v.add("lemma1", l1.max(), 1e-12);
  v.add("gauge_covariance", gauge_cov, 1e-12);
  v.add("antisymmetry", antisym, 1e-12);
  v.add("pair_symmetry", pair, 1e-12);
  v.add("bianchi", bianchi, 1e-12);
  v.add("einstein_constant", einstein_dev, 1e-8);
  v.add("einstein_residual", einstein_res, 1e-10);
  v.add_flag("sectional_in_range", range.min >= -1e-9 && range.max <= 4.0 + 1e-9);
  if (o.n == 2) v.add("sectional_max", 4.0 - range.max, 1e-2);
  v.add("lemma2_rest", worst_rest, 1e-5);
  if (o.curves > 0) v.add_flag("lemma2_nonzero_s", max_s > 1e-3);
  finish(out, v, o.common, clock);
  return out;
}

// Parses "auto" (empty result) or a comma-separated list; the tokens "pi"
// and "pi/k" are accepted.
inline std::vector<double> parse_t_list(const std::string& text) {
  std::vector<double> ts;
  if (text.empty() || text == "auto" || text == "AUTO") return ts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const std::string& num = item;
    const auto pos = item.find("pi");
    if (pos != std::string::npos) {
      const std::string pre = item.substr(0, pos), post = item.substr(pos + 2);
      double factor = 1.0, divisor = 1.0;
      try {
        if (!pre.empty()) factor = pre == "-" ? -1.0 : std::stod(pre.back() == '*' ? pre.substr(0, pre.size() - 1) : pre);
        if (!post.empty()) {
          if (post[0] != '/') throw UsageError("bad t value '" + item + "'");
          divisor = std::stod(post.substr(1));
        }
      } catch (const std::logic_error&) {
        throw UsageError("bad t value '" + item + "'");
      }
      ts.push_back(factor * std::numbers::pi / divisor);
      continue;
    }
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(num, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used != num.size() || num.empty()) throw UsageError("bad t value '" + item + "'");
    ts.push_back(x);
  }
  return ts;
}

}  // namespace qgauss::cli
