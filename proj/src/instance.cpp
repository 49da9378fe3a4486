#include "eon/instance.hpp"

#include <algorithm>

#include "eon/errors.hpp"

namespace eon {

double default_penalty_weight(const PhysicalConstants& k) { return 1e-2 * k.G * k.P_trb; }

int ProblemInstance::mode_budget() const {
  return discrete.m_max > 0 ? std::min(discrete.m_max, topology.modes) : topology.modes;
}

void ProblemInstance::validate() {
  constants.validate();
  auto normalize = [](std::vector<double>& grid, const char* name, double lo, double hi) {
    if (grid.empty()) throw InputError(name, "grid must be non-empty");
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    if (!(grid.front() > lo) || grid.back() > hi) throw InputError(name, "grid value out of range");
  };
  normalize(discrete.c, "discrete.c", 0.0, 1e3);
  normalize(discrete.r, "discrete.r", 0.0, 1.0);
  if (discrete.b_min < 0 || discrete.b_max < discrete.b_min || discrete.b_max > 30)
    throw InputError("discrete.b", "invalid range");
  if (discrete.m_max < 0) throw InputError("discrete.m_max", "must be >= 0");
  if (!(penalty_K > 0.0)) throw InputError("solver.penalty_K", "must be positive");
  if (!(p_min > 0.0) || !(p_max > p_min)) throw InputError("solver.power_bounds_w", "invalid range");
  if (routing.route.size() != requests.size())
    throw InputError("routing", "routing does not match the request list");
}

}  // namespace eon
