#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

namespace eon {

struct Link {
  std::string id;
  int src = -1;  // node index
  int dst = -1;
  double length = 0.0;  // m
  int span_count = 0;   // ceil(length / L_spn)

  bool operator==(const Link&) const = default;
};

/// Directed topology. Nodes and links are kept sorted by id so that two
/// documents listing the same elements in different order load identically.
struct Topology {
  std::vector<std::string> nodes;
  std::vector<Link> links;
  int modes = 1;          // spatial modes per fiber
  double bandwidth = 0.0; // Hz, usable gridless spectrum per link

  int node_index(const std::string& id) const;  // -1 if absent
  int link_index(const std::string& id) const;  // -1 if absent

  bool operator==(const Topology&) const = default;
};

struct Request {
  std::int64_t id = 0;
  int src = -1;  // node index
  int dst = -1;
  double rate = 0.0;  // bit/s

  bool operator==(const Request&) const = default;
};

/// Routes plus the spectral order realized on each link. Requests and links
/// are referred to by index into the instance's request and link vectors.
struct RoutingSolution {
  std::vector<std::vector<int>> route;       // per request, link indices src -> dst
  Eigen::VectorXi span_count;                // N_q
  Eigen::MatrixXi shared_spans;              // N_{q,i}, symmetric, zero diagonal
  std::vector<std::vector<int>> link_order;  // per link, requests low -> high frequency
  std::vector<int> global_order;             // all requests, low -> high frequency

  /// Position of each request in global_order.
  std::vector<int> rank() const;
};

int span_count_for(double length_m, double span_length_m);

/// Parses `{nodes, links:[{id,src,dst,length_km}], modes, bandwidth_ghz}`.
Topology load_topology(const nlohmann::json& doc, double span_length_m);
Topology load_topology_file(const std::string& path, double span_length_m);

/// Parses `{requests:[{id,src,dst,rate_gbps}]}`; requests come back sorted by id.
std::vector<Request> load_traffic(const nlohmann::json& doc, const Topology& topo);
std::vector<Request> load_traffic_file(const std::string& path, const Topology& topo);

/// N_{q,i} = spans on links common to routes q and i. Routes must be contiguous.
Eigen::MatrixXi compute_shared_spans(const Topology& topo, const std::vector<std::vector<int>>& routes);

/// Validates routes against request endpoints and link orders against route
/// membership, then derives span counts, shared spans and the global order.
/// Throws InputError if the per-link orders cannot be realized by a single
/// frequency ordering (cyclic "left-of" relation). When `global_order` is
/// given, every link order must be a subsequence of it; otherwise a
/// topological order is derived, ties broken by request index.
RoutingSolution make_routing_solution(const Topology& topo, const std::vector<Request>& requests,
                                      std::vector<std::vector<int>> routes,
                                      std::vector<std::vector<int>> link_order,
                                      std::vector<int> global_order = {});

}  // namespace eon
