#pragma once

#include "eon/linalg.hpp"
#include "eon/program.hpp"

namespace eon {

/// Primal log-barrier interior-point method with damped Newton centering.
struct BarrierOptions {
  double t0 = 1.0;
  double mu = 10.0;
  double gap_tol = 1e-8;      // stop once (constraint count) / t <= gap_tol * (constraint count)
  double newton_tol = 1e-10;  // centering stops when lambda^2 / 2 <= newton_tol
  int max_newton = 200;       // per centering step
  double phase1_target = 1e-3;  // desired slack of the phase-1 point (log units)
  double interior_margin = 1e-4;  // relative box margin used when clamping a start point
};

struct BarrierResult {
  Vec z;                             // reduced-space solution
  double objective = 0.0;
  double kkt_residual = 0.0;         // |grad f + grad phi / t|_inf / max(1, |grad f|_inf)
  double feasibility_residual = 0.0; // max(0, max_i g_i)
  double min_slack = 0.0;            // min_i (-g_i)
  double t = 0.0;
  int newton_iterations = 0;
};

/// Clamps z into the open box with the configured relative margin.
Vec interior_point(const SmoothProgram& prog, const Vec& z, double margin);

/// Phase 1: max-slack search from `start` (clamped into the box). Throws
/// InfeasibleError listing the most violated constraints on failure.
Vec find_strictly_feasible(const ConvexProgram& prog, const Vec& start, const BarrierOptions& opts = {},
                           int* newton_iterations = nullptr);

/// Phase 1 (if needed) followed by the barrier path to gap_tol.
BarrierResult solve_continuous(const ConvexProgram& prog, const Vec& start, const BarrierOptions& opts = {});

}  // namespace eon
