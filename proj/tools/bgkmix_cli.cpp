// Command-line front end: simulate | estimates | bridge | compare.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "bgkmix/config.hpp"
#include "bgkmix/diagnostics_io.hpp"
#include "bgkmix/errors.hpp"
#include "bgkmix/estimates.hpp"
#include "bgkmix/macroscopic.hpp"
#include "bgkmix/solver.hpp"

namespace fs = std::filesystem;
using namespace bgkmix;

namespace {

struct Options {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::string variant;
};

RunConfig prepare(const Options& o) {
  RunConfig cfg = load_config(o.config);
  if (o.seed) cfg.suite.seed = *o.seed;
  if (!o.variant.empty()) {
    if (o.variant == "two-term") cfg.sim.params.variant = ModelVariant::two_term;
    else if (o.variant == "single-term") cfg.sim.params.variant = ModelVariant::single_term;
    else throw ConfigError("--variant: expected two-term or single-term");
    const ValidityReport rep = validate_params(cfg.sim.params, cfg.sim.grid.velocity_dim);
    if (!rep.ok()) throw AdmissibilityError("params: " + rep.first_failure());
  }
  fs::create_directories(o.out);
  std::ofstream echo(fs::path(o.out) / "config.echo.ini");
  if (!echo) throw IoError("cannot write " + (fs::path(o.out) / "config.echo.ini").string());
  echo << echo_config(cfg);
  return cfg;
}

void require_initial(const RunConfig& cfg, const char* cmd) {
  if (!cfg.has_initial) throw ConfigError(std::string(cmd) + ": [initial] species1 and species2 are required");
}

int cmd_simulate(const Options& o) {
  const RunConfig cfg = prepare(o);
  require_initial(cfg, "simulate");
  const SimulationResult res = run_simulation(cfg.sim);
  const int d = cfg.sim.grid.velocity_dim;
  const fs::path diag = fs::path(o.out) / cfg.diagnostics_file;
  emit_diagnostics(res.rows, d, diag.string());
  std::printf("steps: %d\nrows: %zu -> %s\nmax clipped mass per step: %.3g\n", res.steps, res.rows.size(),
              diag.string().c_str(), res.max_clipped_per_step);
  if (cfg.sim.envelope_q >= 0.0) {
    const EstimateReport env = check_envelopes(res.envelopes, cfg.sim.params, d);
    const fs::path path = fs::path(o.out) / cfg.envelopes_file;
    emit_estimates({{0, env}}, path.string());
    std::printf("envelope checks: %zu, failures: %zu -> %s\n", env.checks.size(), env.failures(),
                path.string().c_str());
  }
  return 0;
}

int cmd_estimates(const Options& o) {
  const RunConfig cfg = prepare(o);
  const SuiteResult res = run_estimate_suite(cfg.suite);
  std::vector<ReportRow> rows;
  rows.reserve(res.samples.size());
  for (const auto& s : res.samples) rows.push_back({s.index, s.report});
  const fs::path path = fs::path(o.out) / cfg.estimates_file;
  emit_estimates(rows, path.string());
  std::printf("samples: %zu\nchecks: %zu\nfailures: %zu -> %s\n", res.samples.size(), res.checks, res.failures,
              path.string().c_str());
  return 0;
}

int cmd_bridge(const Options& o) {
  const RunConfig cfg = prepare(o);
  require_initial(cfg, "bridge");
  const MixtureParameters& p = cfg.sim.params;
  const int d = cfg.sim.grid.velocity_dim;
  const double n1 = initial_mean_density(cfg.sim.initial1), n2 = initial_mean_density(cfg.sim.initial2);
  const BridgeParameters matched = matched_bridge(p, n1, n2, d);
  const BridgeCoefficients b = bridge_parameters(p, matched.lambda_u, n1, n2, d);
  std::printf("lambda_u = %.17g\nlambda_T = %.17g\ndelta = %.17g\nc_range = [%.17g, %.17g]\nc_symmetric = %.17g\n"
              "gamma(c_symmetric) = %.17g\n",
              matched.lambda_u, matched.lambda_T, b.delta, b.c_range.lower, b.c_range.upper, b.c_symmetric,
              b.gamma_for(b.c_symmetric));
  if (p.delta < 1.0) std::printf("c(gamma) = %.17g\n", c_from_gamma(p, d));
  return 0;
}

int cmd_compare(const Options& o) {
  const RunConfig cfg = prepare(o);
  require_initial(cfg, "compare");
  const ComparisonResult res = compare_kinetic_macro(cfg.sim, cfg.compare_dts, cfg.ode_dt);
  for (std::size_t i = 0; i < res.dts.size(); ++i)
    std::printf("dt = %.6g  max relative deviation = %.6e%s\n", res.dts[i], res.errors[i],
                i ? ("  ratio = " + std::to_string(res.ratios[i - 1])).c_str() : "");

  const int d = cfg.sim.grid.velocity_dim;
  const SimulationResult init = [&] {
    SimulationSettings s = cfg.sim;
    s.t_end = 0.0;
    return run_simulation(s);
  }();
  const auto& r0 = init.rows.front();
  const MacroState m0 = MacroState::from_moments({r0.s1.n, r0.s1.u, r0.s1.T}, {r0.s2.n, r0.s2.u, r0.s2.T},
                                                 cfg.sim.params.m1, cfg.sim.params.m2, d);
  const auto traj = ode_integrate(m0, matched_bridge(cfg.sim.params, r0.s1.n, r0.s2.n, d), cfg.ode_dt,
                                  cfg.sim.t_end, std::max(1, static_cast<int>(std::lround(cfg.sim.dt / cfg.ode_dt))));
  const fs::path path = fs::path(o.out) / cfg.macro_file;
  emit_diagnostics(macro_rows(traj), d, path.string());
  std::printf("macroscopic trajectory -> %s\n", path.string().c_str());
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-species BGK mixture simulator and estimate checker"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory");
  app.add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { o.seed = s; },
                                          "master seed (overrides [suite] seed)");
  app.add_option("--variant", o.variant, "two-term | single-term")
      ->check(CLI::IsMember({"two-term", "single-term"}));
  app.fallthrough();

  int (*handler)(const Options&) = nullptr;
  app.add_subcommand("simulate", "run the kinetic solver and write diagnostics")->callback([&] { handler = cmd_simulate; });
  app.add_subcommand("estimates", "run the randomized estimate suite")->callback([&] { handler = cmd_estimates; });
  app.add_subcommand("bridge", "print the kinetic/macroscopic parameter bridge")->callback([&] { handler = cmd_bridge; });
  app.add_subcommand("compare", "kinetic run against the macroscopic relaxation system")
      ->callback([&] { handler = cmd_compare; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    return handler(o);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
