#pragma once

#include <span>
#include <string>
#include <vector>

#include "eon/barrier.hpp"
#include "eon/instance.hpp"
#include "eon/program.hpp"

namespace eon {

/// Index arithmetic of the log-domain decision vector: seven variables per
/// request followed by one carrier-distance variable per pair of requests
/// that share at least one link.
struct VariableLayout {
  enum Slot : int { C = 0, R, P, M, Omega, T, B, kSlots };

  struct Pair {
    int left;   // lower carrier in the global order
    int right;
  };

  int requests = 0;
  std::vector<Pair> pairs;

  int at(int q, Slot s) const { return kSlots * q + s; }
  int distance(int k) const { return kSlots * requests + k; }
  int size() const { return kSlots * requests + int(pairs.size()); }
  int pair_index(int q, int i) const;  // -1 when q and i share no link
};

struct TcsProgram {
  VariableLayout layout;
  ConvexProgram program;
};

/// Log-transformed program: objective with the FFT surrogate plus the
/// K * sum 1/d penalty; QoS, nonoverlap, spectrum, rate, threshold-auxiliary
/// and distance-linking constraints. Throws InfeasibleError when some link
/// cannot host its requests even at minimum bandwidth.
TcsProgram build_program(const ProblemInstance& inst);

/// Full-space heuristic starting point (not necessarily feasible).
Vec initial_point(const ProblemInstance& inst, const VariableLayout& layout);

enum class PowerMode { adaptive, fixed };

PowerMode parse_power_mode(const std::string& s);
const char* to_string(PowerMode m);

struct SolveOptions {
  BarrierOptions barrier;
  double int_precision = 0.1;    // |v - round(v)| accepted for b and m
  double grid_precision = 0.05;  // relative distance to a grid point accepted for c and r
  int max_epochs = 0;            // 0: number of integer variables
  bool polish_pairs = true;      // final joint (c, r) snap per request
};

struct RoundingStep {
  int epoch = 0;
  int request = 0;
  char variable = '?';  // 'b', 'm', 'c' or 'r'
  double relaxed = 0.0;
  double fixed = 0.0;
  bool fallback = false;  // fixed by the conservative retry
};

/// Violation convention: > 0 means the constraint is violated.
struct Residual {
  std::string label;
  double violation = 0.0;
};

struct FeasibilityResult {
  bool pass = true;
  std::vector<Residual> residuals;
  std::string worst_label;
  double worst_violation = -1e300;
};

struct PairDistance {
  int q = 0;
  int i = 0;
  double d = 0.0;  // Hz
};

struct SolveReport {
  PowerMode power_mode = PowerMode::adaptive;
  std::vector<TransponderConfig> configs;
  PowerBreakdown power;             // exact transponder power, summed
  double objective_power_W = 0.0;   // power.total()
  double penalty_value = 0.0;       // K * sum over ordered pairs of 1/d
  double relaxed_objective = 0.0;   // first continuous relaxation (surrogate power + penalty)
  std::vector<Residual> residuals;  // log-domain constraint values at the final point
  std::vector<PairDistance> distances;
  double kkt_residual = 0.0;
  std::vector<RoundingStep> rounding_trace;
  int epochs = 0;
  int integer_variables = 0;
  int newton_iterations = 0;
  double wall_time = 0.0;  // s
  Vec solution;            // final full-space log variables
  FeasibilityResult feasibility;
};

/// Independent check of the original mixed-integer constraints on concrete
/// configurations: OSNR >= threshold * (1 - 1e-6), nonoverlap with guard
/// band, spectrum limits, rate, configuration ranges and (when distances are
/// supplied) |d - |w_q - w_i|| <= 1e-3 G.
FeasibilityResult feasibility_check(std::span<const TransponderConfig> configs, const ProblemInstance& inst,
                                    std::span<const PairDistance> distances = {});

/// Relaxation-rounding loop on an already built program.
SolveReport round_and_fix(TcsProgram& prog, const ProblemInstance& inst, const SolveOptions& opts,
                          PowerMode mode = PowerMode::adaptive);

/// Builds and solves with adaptive transmit power.
SolveReport solve_tcs(const ProblemInstance& inst, const SolveOptions& opts = {});

/// Per-mode launch power of the fixed-power baseline: the single-channel
/// optimum (A / (2 eta))^{1/3} of x / (A + eta x^3), evaluated with
/// minimum-bandwidth, guard-adjacent interferers. Clamped to the power box.
std::vector<double> fixed_per_mode_power(const ProblemInstance& inst);

/// Same loop with each request's per-mode power frozen.
SolveReport fixed_power_baseline(const ProblemInstance& inst, const SolveOptions& opts = {});

SolveReport solve(const ProblemInstance& inst, PowerMode mode, const SolveOptions& opts = {});

}  // namespace eon
