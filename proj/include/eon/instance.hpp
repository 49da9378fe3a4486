#pragma once

#include <vector>

#include "eon/constants.hpp"
#include "eon/network.hpp"
#include "eon/phy.hpp"

namespace eon {

/// Admissible discrete values. c and r are explicit grids (ascending after
/// validation); b and m are integer ranges.
struct DiscreteSets {
  std::vector<double> c{1, 2, 3, 4, 5, 6};
  std::vector<double> r{0.60, 0.70, 0.80, 0.90};
  int b_min = 4;
  int b_max = 11;
  int m_max = 0;  // 0: use the topology's mode count
};

/// Default penalty weight K for the K * sum 1/d term: 1e-2 * G * P_trb [W Hz].
double default_penalty_weight(const PhysicalConstants& k);

/// One transponder-configuration problem: routed and ordered requests on a
/// topology, plus everything the solver and the oracle need to agree on.
struct ProblemInstance {
  PhysicalConstants constants;
  Topology topology;
  std::vector<Request> requests;
  RoutingSolution routing;
  CouplingModel coupling = CouplingModel::strong;
  DiscreteSets discrete;
  double penalty_K = default_penalty_weight(PhysicalConstants{});
  double p_min = 1e-6;  // W, total transmit power bounds
  double p_max = 1.0;

  std::size_t size() const { return requests.size(); }
  double bandwidth() const { return topology.bandwidth; }
  int mode_budget() const;

  /// Sorts and deduplicates the grids; throws InputError on inconsistency.
  void validate();
};

}  // namespace eon
