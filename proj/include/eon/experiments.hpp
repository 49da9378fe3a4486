#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "eon/instance.hpp"
#include "eon/oracle.hpp"
#include "eon/ros.hpp"
#include "eon/tcs.hpp"

namespace eon {

enum class SweepAxis { none, traffic_tbps, modes, coupling };

SweepAxis parse_sweep_axis(const std::string& s);
const char* to_string(SweepAxis a);

/// Requests either listed explicitly (inline or from a file) or generated:
/// `uniform_tbps` split evenly over all ordered node pairs, each rate scaled
/// by 1 + jitter * u with u uniform in [-1, 1) drawn from the scenario seed.
struct TrafficSpec {
  nlohmann::json explicit_doc;  // {"requests": [...]} when given
  double uniform_tbps = 0.0;
  double jitter = 0.0;
};

/// Command-line overrides applied on top of the scenario file.
struct ScenarioOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> power_mode;
  std::optional<std::string> coupling;
  std::optional<int> modes;
  std::optional<int> workers;
};

struct Scenario {
  std::string name;
  std::filesystem::path source;
  Topology topology;
  TrafficSpec traffic;
  PhysicalConstants constants;
  std::vector<CouplingModel> couplings{CouplingModel::strong};
  std::vector<PowerMode> power_modes{PowerMode::adaptive};
  int modes = 0;  // 0: the topology's own mode count
  DiscreteSets discrete;
  double p_min = 1e-6;
  double p_max = 1.0;
  std::optional<double> penalty_K;
  SolveOptions solver;
  RosConfig ros;
  GridSpec oracle;
  SweepAxis axis = SweepAxis::none;
  std::vector<nlohmann::json> sweep_values;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string inputs_sha256;  // over the effective scenario and every referenced file
};

/// Parses and validates a scenario file. Relative paths inside it resolve
/// against the file's directory. Throws InputError naming the field.
Scenario load_scenario(const std::filesystem::path& path, const ScenarioOverrides& overrides = {});

/// One solver run: a sweep value within one (power mode, coupling) series.
struct RunSpec {
  int series = 0;
  std::string series_label;  // e.g. "adaptive", "adaptive.weak"
  std::string sweep_value;   // CSV text of the sweep value ("-" without a sweep)
  PowerMode power_mode = PowerMode::adaptive;
  CouplingModel coupling = CouplingModel::strong;
  int modes = 1;
  double traffic_tbps = 0.0;
};

/// Series-major list of runs: each (power mode, coupling) combination over
/// every sweep value in file order.
std::vector<RunSpec> expand_runs(const Scenario& sc);

std::vector<Request> make_requests(const Scenario& sc, const RunSpec& run);

/// Routes, orders and assembles the instance for one run.
ProblemInstance make_instance(const Scenario& sc, const RunSpec& run);

struct SweepRow {
  RunSpec run;
  std::string status = "ok";  // ok, infeasible or error
  std::string message;
  int requests = 0;
  PowerBreakdown power;
  double total_W = 0.0;
  double penalty_W = 0.0;
  double relaxed_W = 0.0;
  int epochs = 0;
  int newton_iterations = 0;
  bool feasible = false;
  double normalized = 0.0;  // total / total of the series' first feasible row
  double wall_time = 0.0;
  std::vector<TransponderConfig> configs;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // same order as expand_runs
  bool all_feasible() const;
};

/// Solves every run on a pool of `sc.workers` threads. Rows do not depend
/// on the worker count.
SweepResult run_sweep(const Scenario& sc);

/// sweep_value,power_mode,coupling,modes,requests,total_W,bias_W,codec_W,
/// fft_W,dsp_W,penalty_W,relaxed_W,epochs,newton_iterations,feasible,
/// normalized,status. No wall-clock columns so reruns are byte-identical.
void write_sweep_csv(std::ostream& os, const SweepResult& result, int series = -1);

/// sweep_value,power_mode,coupling,wall_time_s
void write_timing_csv(std::ostream& os, const SweepResult& result);

struct TidyRow {
  std::string sweep_value;
  std::string series;
  double watts = 0.0;
  bool operator==(const TidyRow&) const = default;
};

struct WideRow {
  std::string sweep_value;
  std::vector<std::pair<std::string, double>> series;  // name, watts in column order
  bool operator==(const WideRow&) const = default;
};

/// Long format: four rows (bias, codec, fft, dsp) per feasible sweep row.
/// With several run series the series name is prefixed, e.g. "fixed.dsp".
std::vector<TidyRow> emit_plotdata(const SweepResult& result);

void write_plotdata_csv(std::ostream& os, const std::vector<TidyRow>& rows);
std::vector<TidyRow> read_plotdata_csv(std::istream& is);

/// Groups consecutive rows sharing a sweep value.
std::vector<WideRow> tidy_to_wide(const std::vector<TidyRow>& tidy);
std::vector<TidyRow> wide_to_tidy(const std::vector<WideRow>& wide);

/// Writes sweep.csv (plus sweep_<series>.csv per series when there are
/// several), plotdata.csv, timing.csv and manifest.txt into `dir`.
void write_sweep_outputs(const std::filesystem::path& dir, const Scenario& sc, const SweepResult& result);

struct OracleComparison {
  std::string instance;
  RunSpec run;
  double solver_W = 0.0;
  double oracle_W = 0.0;
  double gap = 0.0;  // (solver - oracle) / oracle
  bool solver_feasible = false;
  bool oracle_feasible = false;
  double solver_time = 0.0;
  double oracle_time = 0.0;
  BruteForceResult oracle;
};

/// Solver against brute force on every run of a scenario with at most
/// three requests. Throws InputError above three requests and
/// CapExceededError above the oracle cap.
std::vector<OracleComparison> compare_oracle(const Scenario& sc);

/// instance,sweep_value,power_mode,coupling,solver_W,oracle_W,gap,
/// solver_feasible,oracle_feasible,solver_s,oracle_s,speed_ratio
void write_oracle_csv(std::ostream& os, const std::vector<OracleComparison>& rows);

std::string sha256_hex(const std::string& bytes);

}  // namespace eon
