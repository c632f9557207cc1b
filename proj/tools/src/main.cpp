#include <CLI11.hpp>

#include <iostream>
#include <thread>

#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
  using namespace nlsgs::cli;
  CLI::App app{"Least action ground states of the stationary nonlinear Schroedinger equation"};
  app.require_subcommand(0, 1);
  bool emit_schema = false;
  app.add_flag("--emit-config-schema", emit_schema, "Print the JSON schema of config files");

  Overrides ov;
  ov.workers = std::max(1u, std::thread::hardware_concurrency());
  std::string config_path;
  std::vector<CLI::App*> subs;

  const std::map<std::string, std::string> help = {
      {"solve", "Run one flow and write the field, history and report"},
      {"sweep", "Sweep omega and record S_g, M_g, E_g, mu_g and the stability diagnostic"},
      {"compare", "Compare BF, BE, PGF-BF and TS on the free-soliton cases"},
      {"converge", "Spatial refinement study with L2 and H1 errors"},
      {"omega0", "Compute omega0 and the linear ground state"},
      {"oracle-check", "Solve and compare against the closed-form ground state"},
      {"crosscheck", "Least energy / least action round trip over a list of masses"},
  };
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name, help.at(name));
    sub->add_option("config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output-dir", ov.output_dir, "Output directory (overrides outputs.directory)");
    if (name == "solve" || name == "oracle-check") {
      sub->add_option("--scheme", ov.scheme, "bf | be | pgf_bf | ts");
      sub->add_option("--tau", ov.tau, "Time step");
      sub->add_option("--epsilon", ov.epsilon, "Stopping tolerance");
      sub->add_option("--max-iters", ov.max_iters, "Iteration cap");
      sub->add_option("--seed-shift", ov.seed_shift, "Gaussian seed center")->expected(1, 2);
    }
    if (name == "solve") {
      sub->add_option("--field-out", ov.field_out, "Field CSV path");
      sub->add_option("--history-out", ov.history_out, "History CSV path");
    }
    if (name == "sweep")
      sub->add_option("-j,--workers", ov.workers, "Worker threads for cold-start rows")
          ->check(CLI::PositiveNumber);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  if (emit_schema) {
    std::cout << config_schema().dump(2) << '\n';
    return kOk;
  }
  for (auto* sub : subs) {
    if (!sub->parsed()) continue;
    try {
      RunConfig cfg = load_config(config_path);
      return run_command(sub->get_name(), std::move(cfg), ov, std::cout, std::cerr);
    } catch (...) {
      return report_exception(std::cerr);
    }
  }
  std::cerr << app.help();
  return kConfig;
}
