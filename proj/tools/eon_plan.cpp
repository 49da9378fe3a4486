// eon-plan: transponder configuration planning for few-mode elastic optical
// networks. Exit codes: 0 success, 2 some run infeasible, 3 invalid input.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "eon/errors.hpp"
#include "eon/experiments.hpp"
#include "eon/report_io.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kInfeasible = 2;
constexpr int kInvalid = 3;

struct Common {
  std::string scenario;
  std::string out = "out";
  eon::ScenarioOverrides overrides;
};

void add_common(CLI::App* cmd, Common& c, bool with_out = true) {
  cmd->add_option("--scenario", c.scenario, "Scenario file (JSON)")->required()->check(CLI::ExistingFile);
  if (with_out) cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--seed", c.overrides.seed, "Random seed for generated traffic");
  cmd->add_option("--power-mode", c.overrides.power_mode, "adaptive or fixed");
  cmd->add_option("--coupling", c.overrides.coupling, "strong or weak");
  cmd->add_option("--modes", c.overrides.modes, "Mode budget per fiber")->check(CLI::PositiveNumber);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

int cmd_solve(const Common& c) {
  const auto sc = eon::load_scenario(c.scenario, c.overrides);
  const auto run = eon::expand_runs(sc).front();
  const auto inst = eon::make_instance(sc, run);
  fs::create_directories(c.out);
  write_file(fs::path(c.out) / "ros.json", eon::ros_to_json(inst.routing, inst.topology, inst.requests).dump(2) + "\n");
  eon::SolveReport rep;
  try {
    rep = eon::solve(inst, run.power_mode, sc.solver);
  } catch (const eon::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    for (const auto& b : e.binding()) std::cerr << "  binding: " << b << '\n';
    return kInfeasible;
  }
  std::ostringstream csv;
  eon::write_configs_csv(csv, inst, rep.configs);
  write_file(fs::path(c.out) / "configs.csv", csv.str());
  write_file(fs::path(c.out) / "report.json", eon::report_to_json(rep, inst).dump(2) + "\n");
  std::cout << "requests " << inst.size() << ", power " << eon::format_number(rep.objective_power_W) << " W ("
            << eon::to_string(run.power_mode) << ", " << eon::to_string(run.coupling) << ", M = " << run.modes
            << "), epochs " << rep.epochs << ", feasible " << (rep.feasibility.pass ? "yes" : "no") << '\n';
  if (!rep.feasibility.pass) {
    std::cerr << "worst constraint " << rep.feasibility.worst_label << " violation "
              << rep.feasibility.worst_violation << '\n';
    return kInfeasible;
  }
  return kOk;
}

int cmd_sweep(const Common& c) {
  const auto sc = eon::load_scenario(c.scenario, c.overrides);
  if (sc.axis == eon::SweepAxis::none) throw eon::InputError("sweep", "scenario defines no sweep axis");
  const auto result = eon::run_sweep(sc);
  eon::write_sweep_outputs(c.out, sc, result);
  eon::write_sweep_csv(std::cout, result);
  for (const auto& r : result.rows)
    if (!r.feasible) std::cerr << r.run.series_label << " @ " << r.run.sweep_value << ": " << r.message << '\n';
  return result.all_feasible() ? kOk : kInfeasible;
}

int cmd_oracle(const Common& c) {
  const auto sc = eon::load_scenario(c.scenario, c.overrides);
  const auto rows = eon::compare_oracle(sc);
  fs::create_directories(c.out);
  std::ostringstream csv;
  eon::write_oracle_csv(csv, rows);
  write_file(fs::path(c.out) / "oracle.csv", csv.str());
  const auto runs = eon::expand_runs(sc);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::ostringstream top;
    eon::write_ranked_csv(top, eon::make_instance(sc, runs[k]), rows[k].oracle);
    write_file(fs::path(c.out) / ("oracle_top_" + std::to_string(k) + ".csv"), top.str());
  }
  std::cout << csv.str();
  bool ok = true;
  for (const auto& r : rows) ok = ok && r.solver_feasible && r.oracle_feasible;
  return ok ? kOk : kInfeasible;
}

int cmd_validate(const Common& c, const std::string& configs) {
  const auto sc = eon::load_scenario(c.scenario, c.overrides);
  int status = kOk;
  const auto runs = eon::expand_runs(sc);
  for (const auto& run : runs) {
    const auto inst = eon::make_instance(sc, run);
    std::size_t pairs = 0;
    for (std::size_t q = 0; q < inst.size(); ++q)
      for (std::size_t i = q + 1; i < inst.size(); ++i) pairs += inst.routing.shared_spans(q, i) > 0;
    std::cout << run.series_label << " @ " << run.sweep_value << ": " << inst.size() << " requests, "
              << inst.topology.links.size() << " links, " << pairs << " interfering pairs, M = " << run.modes;
    try {
      const auto prog = eon::build_program(inst);
      std::cout << ", " << prog.layout.size() << " variables, " << prog.program.num_constraints()
                << " constraints\n";
    } catch (const eon::InfeasibleError& e) {
      std::cout << "\n  spectrum infeasible: " << e.what() << '\n';
      status = kInfeasible;
    }
  }
  if (!configs.empty()) {
    const auto inst = eon::make_instance(sc, runs.front());
    std::ifstream in(configs);
    if (!in) throw eon::InputError("--configs", "cannot open " + configs);
    const auto cfgs = eon::read_configs_csv(in, inst);
    const auto check = eon::feasibility_check(cfgs, inst);
    const bool oracle_ok = eon::oracle_feasible(inst, cfgs);
    for (const auto& r : check.residuals)
      if (r.violation > 0.0) std::cout << "  violated " << r.label << " " << r.violation << '\n';
    std::cout << "configs " << (check.pass ? "feasible" : "infeasible") << " (oracle check "
              << (oracle_ok ? "feasible" : "infeasible") << "), power "
              << eon::format_number([&] {
                   double total = 0.0;
                   for (const auto& cfg : cfgs) total += eon::transponder_power(cfg, inst.constants);
                   return total;
                 }())
              << " W\n";
    if (!check.pass) status = kInfeasible;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transponder configuration planning for few-mode elastic optical networks"};
  app.require_subcommand(1);
  int workers = 0;
  std::string configs;

  Common solve_args, sweep_args, oracle_args, validate_args;
  auto* solve = app.add_subcommand("solve", "Route, order and configure one scenario instance");
  add_common(solve, solve_args);
  auto* sweep = app.add_subcommand("sweep", "Run the scenario's sweep and write CSV outputs");
  add_common(sweep, sweep_args);
  sweep->add_option("--workers", workers, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
  auto* oracle = app.add_subcommand("oracle", "Compare the solver with brute force (at most 3 requests)");
  add_common(oracle, oracle_args);
  auto* validate = app.add_subcommand("validate", "Check a scenario and optionally a configs CSV");
  add_common(validate, validate_args, false);
  validate->add_option("--configs", configs, "configs.csv to check against the first run");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kOk : kInvalid;
  }

  try {
    if (*solve) return cmd_solve(solve_args);
    if (*sweep) {
      if (workers > 0) sweep_args.overrides.workers = workers;
      return cmd_sweep(sweep_args);
    }
    if (*oracle) return cmd_oracle(oracle_args);
    return cmd_validate(validate_args, configs);
  } catch (const eon::InputError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const eon::CapExceededError& e) {
    std::cerr << "oracle refused: " << e.what() << '\n';
    return kInvalid;
  } catch (const eon::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    for (const auto& b : e.binding()) std::cerr << "  binding: " << b << '\n';
    return kInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
