#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "qgauss/cli.hpp"

namespace {

using namespace qgauss;
using namespace qgauss::cli;

void add_common(CLI::App* app, CommonOptions& common, std::string& scheme, std::string& csv) {
  app->add_option("--seed", common.seed, "random seed")->capture_default_str();
  app->add_option("--scheme", scheme, "differentiation scheme")
      ->check(CLI::IsMember({"dual", "fd"}))
      ->capture_default_str();
  app->add_option("--tol", common.tol, "tolerance for the differentiated identities");
  app->add_option("--csv", csv, "write per-point records as CSV to this path");
  app->add_flag("--timing", common.timing, "include wall-clock timing in the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gauss maps of hypersurfaces of spheres and Lagrangian submanifolds of the complex quadric"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  std::string scheme = "dual", csv;

  AnalyzeOptions analyze;
  std::string dump_lift;
  auto* a = app.add_subcommand("analyze", "check the Gauss map laws on a catalog entry");
  a->add_option("entry", analyze.entry, "entry spec, e.g. clifford:rho=0.7853981633974483")->required();
  a->add_option("--samples", analyze.samples, "number of random chart points")->capture_default_str();
  a->add_option("--gauge", analyze.gauge, "gauge for the gauge-law record")->capture_default_str();
  a->add_option("--dump-lift", dump_lift, "write the sampled Gauss lift to this path");
  a->add_option("--grid", analyze.dump_grid, "nodes per axis of the dumped lift (0: 49 for n <= 2, 33 above)")
      ->capture_default_str();
  a->add_option("--scramble", analyze.scramble, "gauge scramble coefficient of the dumped lift")->capture_default_str();
  add_common(a, analyze.common, scheme, csv);

  SweepOptions sweep;
  std::string sweep_t;
  auto* s = app.add_subcommand("parallel-sweep", "curvature and angle laws along the parallel family");
  s->add_option("entry", sweep.entry, "entry spec")->required();
  s->add_option("--t", sweep_t, "comma-separated t values (pi/k accepted)");
  s->add_option("--samples", sweep.samples, "number of random chart points")->capture_default_str();
  add_common(s, sweep.common, scheme, csv);

  ReconstructCliOptions recon;
  std::string recon_t = "auto", recon_dump;
  auto* r = app.add_subcommand("reconstruct", "rebuild hypersurfaces from a sampled Lagrangian lift");
  r->add_option("input", recon.input, "lift file")->required();
  r->add_option("--t", recon_t, "comma-separated t values or auto")->capture_default_str();
  r->add_option("--dump", recon_dump, "write reconstructed samples to this path");
  r->add_option("--loops", recon.loops, "number of random test loops")->capture_default_str();
  r->add_option("--loop-tol", recon.loop_tol, "loop and horizontality tolerance")->capture_default_str();
  r->add_option("--fidelity-tol", recon.fidelity_tol, "Gauss map fidelity tolerance")->capture_default_str();
  r->add_option("--normal-tol", recon.normal_tol, "normal alignment tolerance")->capture_default_str();
  add_common(r, recon.common, scheme, csv);

  QuadricOptions quad;
  auto* q = app.add_subcommand("verify-quadric", "algebraic and curvature identities of the quadric");
  q->add_option("--n", quad.n, "quadric dimension (2..6)")->capture_default_str();
  q->add_option("--samples", quad.samples, "random planes for the sectional range")->capture_default_str();
  q->add_option("--curves", quad.curves, "curves for the one-form check")->capture_default_str();
  add_common(q, quad.common, scheme, csv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  const DiffScheme ds = scheme == "fd" ? DiffScheme::fd : DiffScheme::dual;
  CommandOutput out;
  try {
    if (*a) {
      analyze.common.scheme = ds;
      if (!dump_lift.empty()) analyze.dump_lift = dump_lift;
      out = cmd_analyze(analyze);
    } else if (*s) {
      sweep.common.scheme = ds;
      sweep.ts = parse_t_list(sweep_t);
      out = cmd_parallel_sweep(sweep);
    } else if (*r) {
      recon.common.scheme = ds;
      recon.ts = parse_t_list(recon_t);
      if (!recon_dump.empty()) recon.dump = recon_dump;
      out = cmd_reconstruct(recon);
    } else if (*q) {
      quad.common.scheme = ds;
      out = cmd_verify_quadric(quad);
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }

  if (out.report.contains("error")) std::cerr << out.report["error"]["message"].get<std::string>() << "\n";
  if (!csv.empty()) {
    std::ofstream os(csv, std::ios::binary);
    if (!os) {
      std::cerr << "cannot write '" << csv << "'\n";
      return kUsage;
    }
    os << out.csv;
  }
  std::cout << out.report.dump(2) << "\n";
  return out.exit_code;
}
