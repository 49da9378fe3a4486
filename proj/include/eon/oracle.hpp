#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "eon/instance.hpp"
#include "eon/phy.hpp"
#include "eon/program.hpp"

namespace eon {

/// Enumeration grids for the brute-force reference. b, m, c and r come from
/// the instance's discrete sets; p and omega are sampled here.
struct GridSpec {
  double p_low = 1e-5;      // W, lowest total launch power on the grid
  int p_decades = 3;
  int p_per_decade = 20;
  double omega_step = 0.0;  // Hz; 0 means G / 4
  double cap = 1e8;         // maximum enumeration size
  int top_k = 10;
  // Enumerate every power combination instead of the least-fixed-point
  // search. Same result, |p|^n instead of n |p| evaluations per frequency
  // assignment; kept as a cross-check.
  bool exhaustive_power = false;

  std::vector<double> p_values(const ProblemInstance& inst) const;      // clipped to [p_min, p_max]
  std::vector<double> omega_values(const ProblemInstance& inst) const;  // step, 2 step, ... < B
};

struct RankedPoint {
  double objective = 0.0;  // sum of exact transponder power, W
  std::vector<TransponderConfig> configs;
};

struct BruteForceResult {
  bool feasible = false;
  double objective = 0.0;
  std::vector<TransponderConfig> configs;  // grid optimum
  std::vector<RankedPoint> ranked;         // best first, at most top_k
  double size_estimate = 0.0;
  std::uint64_t points_evaluated = 0;
  double wall_time = 0.0;  // s
};

/// Exhaustive grid search of the mixed-integer problem with exact power and
/// OSNR. Per (b, m, r) only the smallest rate-feasible c is kept: c raises the
/// threshold and does not enter power, so larger c never helps. Joint tuples
/// are visited in increasing power; the first one with a feasible
/// (omega, p) grid point is optimal.
///
/// Each OSNR constraint is a lower bound on its own request's power that
/// only tightens as the others' powers grow, so for fixed frequencies the
/// least feasible grid power vector (if any) is reached by raising powers
/// from the bottom of the grid until every request is satisfied.
///
/// Throws CapExceededError when tuples x frequency assignments x power
/// evaluations (n |p|, or |p|^n when exhaustive) exceeds grid.cap. Frequency
/// assignments are counted with minimum-bandwidth carriers, an upper bound.
BruteForceResult brute_force_tcs(const ProblemInstance& inst, const GridSpec& grid = {});

/// The oracle's own check of a concrete point: configuration ranges,
/// spectrum, ordered nonoverlap on every link, rate and OSNR >= threshold
/// (1 - 1e-6). Shares no code with feasibility_check.
bool oracle_feasible(const ProblemInstance& inst, std::span<const TransponderConfig> configs);

/// rank,objective_W,request_id,c,b,r,p_mW,m,omega_GHz
void write_ranked_csv(std::ostream& os, const ProblemInstance& inst, const BruteForceResult& result);

/// Max over sampled in-bounds points and coordinates of
/// |analytic - central difference| / max(1, |analytic|), for the objective
/// and every constraint. 0 for a program without variables.
double finite_diff_check(const SmoothProgram& prog, int points, std::uint64_t seed = 1, double step = 1e-6);

/// Max over random in-bounds pairs of g((x+y)/2) - (g(x)+g(y))/2, divided by
/// max(1, |(g(x)+g(y))/2|), across the objective and every constraint.
/// Infinite bounds are sampled on [-10, 10].
double convexity_sample(const SmoothProgram& prog, int pairs, std::uint64_t seed = 1);

}  // namespace eon
