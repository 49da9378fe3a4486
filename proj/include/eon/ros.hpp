#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "eon/network.hpp"

namespace eon {

enum class OrderingRule { by_demand_desc, by_id, by_path_length };

OrderingRule parse_ordering_rule(const std::string& s);
const char* to_string(OrderingRule r);

struct RosConfig {
  int k_paths = 3;
  OrderingRule ordering_rule = OrderingRule::by_demand_desc;
};

/// Up to k loop-free src -> dst paths (link indices) by ascending length
/// (Yen). Ties are broken by the lexicographic link-index sequence.
std::vector<std::vector<int>> k_shortest_paths(const Topology& topo, int src, int dst, int k);

/// Greedy load-balancing routing: requests in descending rate order (ties by
/// id) each take the candidate path minimizing the resulting maximum
/// per-link request count, then path length, then candidate rank.
std::vector<std::vector<int>> route(const Topology& topo, const std::vector<Request>& requests,
                                    const RosConfig& cfg);

/// Global left-to-right request order under the configured rule.
std::vector<int> order(const Topology& topo, const std::vector<std::vector<int>>& routes,
                       const std::vector<Request>& requests, const RosConfig& cfg);

/// Restriction of a global order to each link's users.
std::vector<std::vector<int>> restrict_order(const Topology& topo,
                                             const std::vector<std::vector<int>>& routes,
                                             const std::vector<int>& global_order);

/// route + order + restriction, validated.
RoutingSolution solve_ros(const Topology& topo, const std::vector<Request>& requests,
                          const RosConfig& cfg);

/// `{routes:[{request, links:[link ids]}], order:[request ids]}`.
nlohmann::json ros_to_json(const RoutingSolution& rs, const Topology& topo,
                           const std::vector<Request>& requests);
RoutingSolution ros_from_json(const nlohmann::json& doc, const Topology& topo,
                              const std::vector<Request>& requests);

}  // namespace eon
