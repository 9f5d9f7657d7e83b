// Command-line front end: constants | reach | verify | oracle | estimate | sweep.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "vfi/config.hpp"
#include "vfi/oracles.hpp"

namespace {

// Assemble the flat experiment config from subcommand flags; a --config file
// is parsed first and flags override.
struct Common {
  std::string config_file;
  std::string out;
  std::string threads;
  bool manifest = false;
};

vfi::ExperimentConfig base_config(const std::string& command, const Common& common) {
  vfi::ExperimentConfig c;
  if (!common.config_file.empty()) {
    std::ifstream in(common.config_file);
    if (!in) {
      std::cerr << "config error: cannot read " << common.config_file << "\n";
      std::exit(2);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    c = vfi::parse_config(ss.str());
  }
  c.command = command;
  if (!common.out.empty()) c.set("out", common.out);
  if (!common.threads.empty()) c.set("threads", common.threads);
  if (common.manifest) c.set("manifest", "1");
  return c;
}

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config_file, "config file (key=value lines)");
  cmd->add_option("--out", common.out, "output path prefix (.csv/.json)");
  cmd->add_option("--threads", common.threads, "worker threads");
  cmd->add_flag("--manifest", common.manifest, "print the check manifest");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for curl/div/symmetric-gradient "
               "inequalities on parametrized domains"};
  app.require_subcommand(1);

  Common common;
  std::string domain, field, bc, kind, degrees, grid, oracle_case;
  std::string n = "3", n_max, order, tol;

  auto* constants = app.add_subcommand("constants", "dimensional constants");
  constants->add_option("--n", n, "dimension");
  constants->add_option("--n-max", n_max, "print a range up to this dimension");
  add_common(constants, common);

  auto* reach = app.add_subcommand("reach", "analytic vs uniform-ball reach");
  reach->add_option("--domain", domain, "domain config block");
  reach->add_option("--tol", tol, "bisection tolerance");
  add_common(reach, common);

  auto* verify = app.add_subcommand("verify", "identities, quotients, bounds");
  verify->add_option("--domain", domain, "domain config block");
  verify->add_option("--field", field, "field registry name");
  verify->add_option("--bc", bc, "tangent|normal");
  verify->add_option("--order", order, "quadrature order");
  add_common(verify, common);

  auto* oracle = app.add_subcommand("oracle", "closed-form oracle cases");
  auto* oracle_run = oracle->add_subcommand("run", "run one case or all");
  oracle_run->add_option("--case", oracle_case, "case name or 'all'");
  oracle_run->add_option("--order", order, "quadrature order");
  add_common(oracle_run, common);
  auto* oracle_list = oracle->add_subcommand("list", "list case names");

  auto* estimate = app.add_subcommand("estimate", "trial-space lower bounds");
  estimate->add_option("--domain", domain, "domain config block");
  estimate->add_option("--bc", bc, "tangent|normal");
  estimate->add_option("--kind", kind, "gaffney|korn");
  estimate->add_option("--degrees,--degree", degrees, "d0..d1 or comma list");
  estimate->add_option("--order", order, "quadrature order");
  add_common(estimate, common);

  auto* sweep = app.add_subcommand("sweep", "parameter sweeps");
  sweep->add_option("--domain", domain, "family: torus|annulus");
  sweep->add_option("--field", field, "field registry name");
  sweep->add_option("--bc", bc, "tangent|normal");
  sweep->add_option("--grid", grid, "lo:hi:step");
  sweep->add_option("--order", order, "quadrature order");
  add_common(sweep, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle_list->parsed()) {
      for (const auto& nm : vfi::oracle_case_names()) std::cout << nm << "\n";
      return 0;
    }
    std::string command = app.get_subcommands().front()->get_name();
    if (command == "oracle" && !oracle_run->parsed()) {
      std::cerr << "config error: oracle needs 'run' or 'list'\n";
      return 2;
    }
    vfi::ExperimentConfig c = base_config(command, common);
    if (constants->parsed()) {
      c.set("n", n);
      if (!n_max.empty()) c.set("n_max", n_max);
    }
    if (!domain.empty()) c.set("domain", domain);
    if (!field.empty()) c.set("field", field);
    if (!bc.empty()) c.set("bc", bc);
    if (!kind.empty()) c.set("kind", kind);
    if (!degrees.empty()) c.set("degrees", degrees);
    if (!grid.empty()) c.set("grid", grid);
    if (!oracle_case.empty()) c.set("case", oracle_case);
    if (!order.empty()) c.set("order", order);
    if (!tol.empty()) c.set("tol", tol);
    return vfi::run_experiment(c);
  } catch (const vfi::Error& e) {
    std::cerr << (e.code() == vfi::ErrorCode::ConfigError ? "config error: " : "FAIL: ")
              << e.what() << "\n";
    return e.code() == vfi::ErrorCode::ConfigError ? 2 : 1;
  }
}
