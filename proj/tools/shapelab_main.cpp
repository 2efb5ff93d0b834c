// Command-line front end: every subcommand maps onto one experiment. A JSON
// config may be supplied with --config; individual flags override its keys.
// Exit codes: 0 success, 2 config error, 3 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "shapelab/errors.hpp"
#include "shapelab/experiment.hpp"

namespace {

using nlohmann::json;

struct CommonArgs {
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw shapelab::ConfigError("cannot open config: " + path);
  json doc;
  in >> doc;
  if (!doc.is_object()) throw shapelab::ConfigError("config must be a JSON object");
  return doc;
}

int dispatch(const std::string& id, const CommonArgs& common, const json& overrides) {
  shapelab::ExperimentConfig config;
  config.id = id;
  config.out_dir = common.out_dir;

  try {
    if (!common.config_path.empty()) config.params = load_config(common.config_path);
  } catch (const shapelab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
  for (auto it = overrides.begin(); it != overrides.end(); ++it)
    config.params[it.key()] = it.value();

  // Seed priority: flag > env > config default 0.
  if (config.params.contains("seed")) {
    config.seed = config.params["seed"].get<std::uint64_t>();
    config.params.erase("seed");
  }
  if (const char* env = std::getenv("SHAPELAB_SEED")) config.seed = std::strtoull(env, nullptr, 10);
  if (common.seed_set) config.seed = common.seed;

  return shapelab::run_experiment(config);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"shapelab: Laplace eigenvalues, shape derivatives and gradient flows on plane curves"};
  app.require_subcommand(1);

  CommonArgs common;
  json overrides = json::object();
  std::string pending_id;

  auto add_common = [&](CLI::App* cmd) {
    cmd->set_help_flag("--help", "print this help message and exit");
    cmd->add_option("--config", common.config_path, "JSON config file");
    cmd->add_option("--out", common.out_dir, "output directory");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&](std::uint64_t s) { common.seed = s; common.seed_set = true; },
        "random seed for test-field draws");
  };
  auto opt_num = [&](CLI::App* cmd, const std::string& flag, const std::string& key,
                     const std::string& help) {
    cmd->add_option_function<double>(
        "--" + flag, [&overrides, key](double v) { overrides[key] = v; }, help);
  };
  auto opt_int = [&](CLI::App* cmd, const std::string& flag, const std::string& key,
                     const std::string& help) {
    cmd->add_option_function<int>(
        "--" + flag, [&overrides, key](int v) { overrides[key] = v; }, help);
  };
  auto opt_str = [&](CLI::App* cmd, const std::string& flag, const std::string& key,
                     const std::string& help) {
    cmd->add_option_function<std::string>(
        "--" + flag, [&overrides, key](const std::string& v) { overrides[key] = v; },
        help);
  };

  {
    auto* cmd = app.add_subcommand("disk-oracle", "exact disk spectra from Bessel roots");
    add_common(cmd);
    opt_num(cmd, "radius", "radius", "disk radius");
    opt_str(cmd, "bc", "bc", "dirichlet or neumann");
    opt_int(cmd, "count", "count", "number of eigenvalues");
    cmd->callback([&] { pending_id = "disk-oracle"; });
  }
  {
    auto* cmd = app.add_subcommand("solve", "finite-element eigenvalues on a curve");
    add_common(cmd);
    opt_str(cmd, "curve", "curve", "curve JSON path or disk|disk:R|ellipse:a:b|kidney");
    opt_str(cmd, "bc", "bc", "dirichlet or neumann");
    opt_num(cmd, "h", "h", "target mesh size");
    opt_int(cmd, "count", "count", "number of eigenvalues");
    cmd->add_flag_function(
        "--dump-fields", [&](std::int64_t) { overrides["dump_fields"] = true; },
        "write a plain-text mesh+field dump");
    cmd->callback([&] { pending_id = "solve"; });
  }
  {
    auto* cmd = app.add_subcommand("fd-check", "formula vs finite-difference derivative");
    add_common(cmd);
    opt_str(cmd, "curve", "curve", "curve spec");
    opt_str(cmd, "quantity", "quantity", "lambda_dirichlet|lambda_neumann|j2|j3");
    opt_int(cmd, "mode", "mode", "eigenvalue index (1-based)");
    opt_num(cmd, "gamma", "gamma", "volume weight for j2/j3");
    opt_str(cmd, "alpha", "alpha", "perturbation: 'random' or e.g. c0:1,s2:0.5");
    opt_int(cmd, "draws", "draws", "number of alpha draws");
    opt_num(cmd, "t", "t", "finite-difference step");
    opt_num(cmd, "h", "h", "mesh size");
    cmd->callback([&] { pending_id = "fd-check"; });
  }
  {
    auto* cmd = app.add_subcommand("schiffer-check", "overdetermined-problem residuals");
    add_common(cmd);
    opt_str(cmd, "curve", "curve", "curve spec");
    opt_num(cmd, "h", "h", "mesh size");
    opt_int(cmd, "modes", "modes", "modes scanned per boundary condition");
    cmd->callback([&] { pending_id = "schiffer-check"; });
  }
  {
    auto* cmd = app.add_subcommand("monotonicity", "Lambda(R) on nested meshed disks");
    add_common(cmd);
    opt_num(cmd, "h-scale", "h_scale", "mesh size per unit radius");
    cmd->callback([&] { pending_id = "monotonicity"; });
  }
  {
    auto* cmd = app.add_subcommand("flow", "Riemannian gradient descent at fixed area");
    add_common(cmd);
    opt_str(cmd, "curve", "curve", "initial curve spec");
    opt_str(cmd, "functional", "functional", "j2 or j3");
    opt_num(cmd, "gamma", "gamma", "volume weight");
    opt_str(cmd, "metric", "metric", "g0, ga or sobolev");
    opt_num(cmd, "A", "A", "metric smoothing constant");
    opt_num(cmd, "s0", "s0", "initial step size");
    opt_int(cmd, "max-iter", "max_iter", "iteration cap");
    opt_num(cmd, "tol", "tol", "gradient-norm tolerance");
    opt_num(cmd, "area", "area", "fixed enclosed area");
    opt_num(cmd, "h", "h", "mesh size");
    opt_int(cmd, "cadence", "cadence", "full remesh every k accepted steps");
    cmd->callback([&] { pending_id = "flow"; });
  }
  {
    auto* cmd = app.add_subcommand("hessian-check", "Riemannian Hessian vs finite differences");
    add_common(cmd);
    opt_str(cmd, "curve", "curve", "curve spec");
    opt_str(cmd, "functional", "functional", "j2 or j3");
    opt_num(cmd, "gamma", "gamma", "volume weight");
    opt_num(cmd, "A", "A", "metric smoothing constant");
    opt_str(cmd, "convention", "convention", "+1, -1 or both");
    opt_num(cmd, "t", "t", "flow step for the second difference");
    opt_num(cmd, "h", "h", "mesh size");
    cmd->callback([&] { pending_id = "hessian-check"; });
  }
  {
    auto* cmd = app.add_subcommand("symmetry-check", "moving-plane predicate and defects");
    add_common(cmd);
    opt_str(cmd, "curve", "curve", "curve spec");
    opt_int(cmd, "directions", "directions", "number of scan directions");
    cmd->callback([&] { pending_id = "symmetry-check"; });
  }

  CLI11_PARSE(app, argc, argv);
  return dispatch(pending_id, common, overrides);
}
