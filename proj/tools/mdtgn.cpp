// Command-line driver: simulate, verify, estimates, norms, gauge, convergence, global.
//
// Exit status: 0 when every requested check passes, 1 when a check fails or
// the run cannot be completed (NonConvergence, StepCollapse, SmallnessViolated),
// 2 for configuration and input errors.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mdtgn/mdtgn.hpp"

namespace fs = std::filesystem;
using namespace mdtgn;

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  int threads = 0;
  std::optional<std::uint64_t> seed;
  std::optional<double> dx, T, tau;
  bool strict = false;
  bool plot = false;
};

RunConfig load(const Options& o) {
  RunConfig rc = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.config.empty()) rc.scenario = small_mdtgn_scenario();
  if (o.dx) rc.dx = *o.dx;
  if (o.T) rc.scenario.T = *o.T;
  if (o.tau) rc.global.tau = *o.tau;
  if (o.seed) rc.estimates.field.seed = *o.seed;
  if (o.threads > 0) rc.estimates.threads = o.threads;
  if (o.strict) rc.scenario.config.strict_smallness = true;
  return rc;
}

int finish(const Options& o, const std::string& file, const std::vector<CheckReport>& reports) {
  const fs::path path = fs::path(o.out) / file;
  write_reports(path, reports);
  int failed = 0;
  for (const auto& r : reports) {
    if (!r.pass) {
      ++failed;
      std::printf("FAIL %s lhs=%.6g rhs=%.6g %s\n", r.name.c_str(), r.lhs, r.rhs, r.context.c_str());
    }
  }
  std::printf("%zu checks, %d failed, report %s\n", reports.size(), failed, path.string().c_str());
  return failed == 0 ? 0 : 1;
}

void plot_history(const Options& o, const SolutionHistory& sol) {
  const auto& g = sol.grid();
  std::vector<double> t, q, su, sv, se;
  for (int n = 0; n <= g.n_t; ++n) {
    t.push_back(g.t(n));
    q.push_back(total_charge(sol.spinor, n));
    double a = 0, b = 0, e = 0;
    for (auto z : sol.spinor.u.layer(n)) a = std::max(a, std::abs(z));
    for (auto z : sol.spinor.v.layer(n)) b = std::max(b, std::abs(z));
    if (sol.em.E.values().size() == sol.spinor.u.values().size()) {
      for (double z : sol.em.E.layer(n)) e = std::max(e, std::abs(z));
    }
    su.push_back(a);
    sv.push_back(b);
    se.push_back(e);
  }
  const fs::path dir = fs::path(o.out) / "plot";
  write_series(dir / "charge.csv", t, q);
  write_series(dir / "sup_u.csv", t, su);
  write_series(dir / "sup_v.csv", t, sv);
  write_series(dir / "sup_E.csv", t, se);
}

struct Run {
  LightConeGrid grid;
  InitialData data;
  SolutionHistory sol;
};

Run run_once(const RunConfig& rc) {
  const auto grid = rc.grid();
  auto data = make_initial_data(rc.scenario.data, grid);
  auto sol = solve(data, rc.scenario.params, grid, rc.scenario.config);
  if (sol.smallness_violated) std::printf("note: data exceed the smallness threshold epsilon0\n");
  return {grid, std::move(data), std::move(sol)};
}

int cmd_simulate(const Options& o) {
  const auto rc = load(o);
  const auto r = run_once(rc);
  const fs::path csv = fs::path(o.out) / "fields.csv";
  write_fields_csv(csv, r.sol);
  Json summary{{"scheme", std::string(scheme_name(r.sol.scheme))},
               {"iterations", r.sol.iterations},
               {"smallness_violated", r.sol.smallness_violated},
               {"n_x", r.grid.n_x},
               {"n_t", r.grid.n_t},
               {"increments", r.sol.increments}};
  auto out = open_output(fs::path(o.out) / "run.json");
  out << summary.dump(2) << '\n';
  if (o.plot) plot_history(o, r.sol);
  std::printf("wrote %s (%d x %d nodes)\n", csv.string().c_str(), r.grid.n_x, r.grid.n_t + 1);
  return 0;
}

int cmd_verify(const Options& o) {
  const auto rc = load(o);
  const auto r = run_once(rc);
  if (o.plot) plot_history(o, r.sol);
  return finish(o, "verify.json", verification_reports(r.sol, r.data, rc.scenario.params));
}

int cmd_estimates(const Options& o) {
  const auto rc = load(o);
  auto spec = rc.estimates.field;
  spec.grid = rc.grid();
  const auto s = random_suite(spec, rc.estimates.trials, rc.estimates.threads);
  std::vector<CheckReport> reports;
  for (const auto& e : s.entries) {
    auto r = e.worst;
    r.context += " max_ratio=" + detail::fmt(e.max_ratio) + " violations=" + std::to_string(e.violations);
    reports.push_back(std::move(r));
  }
  reports.push_back(s.summary);
  return finish(o, "estimates.json", reports);
}

int cmd_norms(const Options& o) {
  const auto rc = load(o);
  const auto grid = rc.grid();
  const auto data = make_initial_data(rc.scenario.data, grid);
  const double T = rc.norms.T > 0.0 ? rc.norms.T : grid.T;
  const auto free_grid = build_grid(grid.x_min, grid.x_max, grid.dx, T);
  const auto fh = free_solution(detail::on_grid(data.f, free_grid), detail::on_grid(data.g, free_grid), free_grid, 0.0);
  Json table{{"T", T},
             {"D_f", d_norm(data.f, T)},
             {"D_g", d_norm(data.g, T)},
             {"L2_f", l2_norm(data.f)},
             {"L2_g", l2_norm(data.g)},
             {"X+_u", x_norm(fh, Component::u)},
             {"X-_v", x_norm(fh, Component::v)},
             {"Env+_u", envelope_norm(fh, Component::u).value},
             {"Env-_v", envelope_norm(fh, Component::v).value},
             {"Y+_u", y_norm(fh, Component::u)},
             {"Y-_v", y_norm(fh, Component::v)}};
  auto out = open_output(fs::path(o.out) / "norms.json");
  out << table.dump(2) << '\n';
  for (const auto& [k, v] : table.items()) std::printf("%-8s %.12g\n", k.c_str(), v.get<double>());
  return finish(o, "norm_checks.json", check_identities(detail::on_grid(data.f, free_grid), detail::on_grid(data.g, free_grid), T));
}

int cmd_gauge(const Options& o) {
  const auto rc = load(o);
  Scenario s = rc.scenario;
  const auto r = gauge_two_run(s, rc.dx, rc.gauge.a0_target, rc.gauge.a1_target);
  std::vector<CheckReport> reports;
  const double dm = sup_modulus_difference(r.transformed.spinor.u, r.direct.spinor.u) +
                    sup_modulus_difference(r.transformed.spinor.v, r.direct.spinor.v);
  const double de = sup_difference(r.transformed.em.E, r.direct.em.E);
  const auto study = gauge_study(s, rc.convergence.dx, rc.convergence.min_order, rc.gauge.a0_target,
                                 rc.gauge.a1_target);
  reports.push_back(check_le("Gauge_moduli_at_dx", dm, 0.0, 0.0, rc.dx, "dx=" + detail::fmt(rc.dx)));
  reports.push_back(check_le("Gauge_E_at_dx", de, 0.0, 0.0, rc.dx, "dx=" + detail::fmt(rc.dx)));
  reports.push_back(study.moduli.report);
  reports.push_back(study.electric.report);
  return finish(o, "gauge.json", reports);
}

int cmd_convergence(const Options& o) {
  const auto rc = load(o);
  const auto& s = rc.scenario;
  const auto& dxs = rc.convergence.dx;
  const double p = rc.convergence.min_order;
  std::vector<CheckReport> reports;
  const auto cones = cone_identity_study(s, dxs, p);
  reports.push_back(cones.local_charge.report);
  reports.push_back(cones.local_charge2.report);
  reports.push_back(check_le("LocalChargeBound_all", cones.bounds_pass ? 0.0 : 1.0, 0.0, 0.0, 0.0,
                             std::to_string(cones.cones) + " cones"));
  const auto lor = lorenz_study(s, dxs, p);
  reports.push_back(lor.consistent.report);
  reports.push_back(lor.control_report);
  reports.push_back(gauss_study(s, dxs, p).report);
  const auto cross = cross_scheme_study(s, dxs, p);
  reports.push_back(cross.agreement.report);
  reports.push_back(cross.geometric);
  const auto gauge = gauge_study(s, dxs, p, rc.gauge.a0_target, rc.gauge.a1_target);
  reports.push_back(gauge.moduli.report);
  reports.push_back(gauge.electric.report);
  for (const auto& r : reports) std::printf("%-28s %s\n", r.name.c_str(), r.context.c_str());
  return finish(o, "convergence.json", reports);
}

int cmd_global(const Options& o) {
  auto rc = load(o);
  Scenario s = rc.scenario;
  s.T = rc.global.tau;
  const auto c = global_check(s, rc.dx);
  std::printf("restarts %d, Picard sweeps %d\n", c.sol.restarts, c.sol.iterations);
  if (o.plot) {
    plot_history(o, c.sol);
    std::vector<double> t;
    for (int n = 0; n <= c.sol.grid().n_t; ++n) t.push_back(c.sol.grid().t(n));
    write_series(fs::path(o.out) / "plot" / "dbound_lhs.csv", t, c.dbound_lhs);
    write_series(fs::path(o.out) / "plot" / "dbound_rhs.csv", t, c.dbound_rhs);
  }
  return finish(o, "global.json", c.reports);
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::NonConvergence:
    case ErrorKind::StepCollapse:
    case ErrorKind::SmallnessViolated:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maxwell-Dirac-Thirring-Gross-Neveu solver and verification suite"};
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  app.add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", o.out, "output directory")->capture_default_str();
  app.add_option("--threads", o.threads, "worker cap for the random suite")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", o.seed, "seed for the random suite");
  app.add_option("--dx", o.dx, "grid spacing (also the time step)")->check(CLI::PositiveNumber);
  app.add_option("--T", o.T, "local solve horizon")->check(CLI::NonNegativeNumber);
  app.add_option("--tau", o.tau, "target time of the global run")->check(CLI::PositiveNumber);
  app.add_flag("--strict-smallness", o.strict, "fail when the data exceed the smallness threshold");
  app.add_flag("--plot-data", o.plot, "write (t, value) series under OUT/plot");

  int rc = 0;
  auto add = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    app.add_subcommand(name, help)->callback([&, fn] { rc = fn(o); });
  };
  add("simulate", "solve and dump the fields as CSV", cmd_simulate);
  add("verify", "conservation, Gauss/Lorenz and a priori bound reports on one run", cmd_verify);
  add("estimates", "seeded random suite for the norm inequalities", cmd_estimates);
  add("norms", "norm table and identities for the configured data", cmd_norms);
  add("gauge", "two-run gauge invariance check", cmd_gauge);
  add("convergence", "order fits over grid refinements", cmd_convergence);
  add("global", "continuation to tau with the a priori bounds at every layer", cmd_global);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "ConfigError: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return rc;
}
