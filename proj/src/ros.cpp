#include "eon/ros.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <unordered_map>

#include "eon/errors.hpp"

namespace eon {

OrderingRule parse_ordering_rule(const std::string& s) {
  if (s == "by-demand-desc") return OrderingRule::by_demand_desc;
  if (s == "by-id") return OrderingRule::by_id;
  if (s == "by-path-length") return OrderingRule::by_path_length;
  throw InputError("ordering_rule", "unknown rule \"" + s + "\"");
}

const char* to_string(OrderingRule r) {
  switch (r) {
    case OrderingRule::by_demand_desc: return "by-demand-desc";
    case OrderingRule::by_id: return "by-id";
    case OrderingRule::by_path_length: return "by-path-length";
  }
  return "?";
}

namespace {

struct Path {
  std::vector<int> links;
  double length = 0.0;

  bool operator<(const Path& o) const {
    if (length != o.length) return length < o.length;
    return links < o.links;
  }
};

double path_length(const Topology& topo, const std::vector<int>& links) {
  double len = 0.0;
  for (int l : links) len += topo.links[l].length;
  return len;
}

// Dijkstra over links not in `banned_links`, avoiding `banned_nodes`.
std::vector<int> shortest_path(const Topology& topo, int src, int dst,
                               const std::set<int>& banned_links, const std::vector<bool>& banned_nodes) {
  const int n = int(topo.nodes.size());
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> via(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[src] = 0.0;
  pq.emplace(0.0, src);
  while (!pq.empty()) {
    auto [d, u] = pq.top();
    pq.pop();
    if (d > dist[u]) continue;
    if (u == dst) break;
    for (int l = 0; l < int(topo.links.size()); ++l) {
      const Link& link = topo.links[l];
      if (link.src != u || banned_links.count(l) || banned_nodes[link.dst]) continue;
      const double nd = d + link.length;
      if (nd < dist[link.dst] || (nd == dist[link.dst] && via[link.dst] > l)) {
        dist[link.dst] = nd;
        via[link.dst] = l;
        pq.emplace(nd, link.dst);
      }
    }
  }
  if (via[dst] < 0 && src != dst) return {};
  std::vector<int> links;
  for (int v = dst; v != src; v = topo.links[via[v]].src) links.push_back(via[v]);
  std::reverse(links.begin(), links.end());
  return links;
}

}  // namespace

std::vector<std::vector<int>> k_shortest_paths(const Topology& topo, int src, int dst, int k) {
  if (k < 1) throw InputError("k_paths", "must be >= 1");
  std::vector<Path> found;
  const std::vector<bool> none(topo.nodes.size(), false);
  auto first = shortest_path(topo, src, dst, {}, none);
  if (first.empty()) return {};
  found.push_back({first, path_length(topo, first)});
  std::set<Path> candidates;

  while (int(found.size()) < k) {
    const auto& prev = found.back().links;
    for (std::size_t spur = 0; spur < prev.size(); ++spur) {
      const int spur_node = topo.links[prev[spur]].src;
      const std::vector<int> root(prev.begin(), prev.begin() + long(spur));
      std::set<int> banned_links;
      for (const auto& p : found)
        if (p.links.size() > spur && std::equal(root.begin(), root.end(), p.links.begin()))
          banned_links.insert(p.links[spur]);
      std::vector<bool> banned_nodes(topo.nodes.size(), false);
      for (int l : root) banned_nodes[topo.links[l].src] = true;
      auto tail = shortest_path(topo, spur_node, dst, banned_links, banned_nodes);
      if (tail.empty()) continue;
      std::vector<int> total = root;
      total.insert(total.end(), tail.begin(), tail.end());
      Path cand{total, path_length(topo, total)};
      if (std::find_if(found.begin(), found.end(), [&](const Path& p) { return p.links == total; }) ==
          found.end())
        candidates.insert(std::move(cand));
    }
    if (candidates.empty()) break;
    found.push_back(*candidates.begin());
    candidates.erase(candidates.begin());
  }
  std::vector<std::vector<int>> out;
  for (auto& p : found) out.push_back(std::move(p.links));
  return out;
}

std::vector<std::vector<int>> route(const Topology& topo, const std::vector<Request>& requests,
                                    const RosConfig& cfg) {
  std::vector<int> idx(requests.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (requests[a].rate != requests[b].rate) return requests[a].rate > requests[b].rate;
    return requests[a].id < requests[b].id;
  });

  std::vector<int> load(topo.links.size(), 0);
  std::vector<std::vector<int>> out(requests.size());
  for (int q : idx) {
    const auto paths = k_shortest_paths(topo, requests[q].src, requests[q].dst, cfg.k_paths);
    if (paths.empty())
      throw InputError("requests[" + std::to_string(requests[q].id) + "]",
                       "destination unreachable from source");
    std::size_t best = 0;
    int best_load = std::numeric_limits<int>::max();
    double best_len = 0.0;
    for (std::size_t k = 0; k < paths.size(); ++k) {
      int max_load = 0;
      for (std::size_t l = 0; l < load.size(); ++l) max_load = std::max(max_load, load[l]);
      for (int l : paths[k]) max_load = std::max(max_load, load[l] + 1);
      const double len = path_length(topo, paths[k]);
      if (max_load < best_load || (max_load == best_load && len < best_len)) {
        best = k;
        best_load = max_load;
        best_len = len;
      }
    }
    for (int l : paths[best]) ++load[l];
    out[q] = paths[best];
  }
  return out;
}

std::vector<int> order(const Topology& topo, const std::vector<std::vector<int>>& routes,
                       const std::vector<Request>& requests, const RosConfig& cfg) {
  std::vector<int> idx(requests.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto by_id = [&](int a, int b) { return requests[a].id < requests[b].id; };
  switch (cfg.ordering_rule) {
    case OrderingRule::by_id:
      std::sort(idx.begin(), idx.end(), by_id);
      break;
    case OrderingRule::by_demand_desc:
      std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        if (requests[a].rate != requests[b].rate) return requests[a].rate > requests[b].rate;
        return by_id(a, b);
      });
      break;
    case OrderingRule::by_path_length:
      // longest route first
      std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        const double la = path_length(topo, routes[a]);
        const double lb = path_length(topo, routes[b]);
        if (la != lb) return la > lb;
        return by_id(a, b);
      });
      break;
  }
  return idx;
}

std::vector<std::vector<int>> restrict_order(const Topology& topo,
                                             const std::vector<std::vector<int>>& routes,
                                             const std::vector<int>& global_order) {
  std::vector<std::vector<int>> per_link(topo.links.size());
  for (int q : global_order)
    for (int l : routes[q]) per_link[l].push_back(q);
  return per_link;
}

RoutingSolution solve_ros(const Topology& topo, const std::vector<Request>& requests,
                          const RosConfig& cfg) {
  auto routes = route(topo, requests, cfg);
  auto global = order(topo, routes, requests, cfg);
  auto per_link = restrict_order(topo, routes, global);
  return make_routing_solution(topo, requests, std::move(routes), std::move(per_link), std::move(global));
}

nlohmann::json ros_to_json(const RoutingSolution& rs, const Topology& topo,
                           const std::vector<Request>& requests) {
  nlohmann::json routes = nlohmann::json::array();
  for (std::size_t q = 0; q < requests.size(); ++q) {
    nlohmann::json links = nlohmann::json::array();
    for (int l : rs.route[q]) links.push_back(topo.links[l].id);
    routes.push_back({{"request", requests[q].id}, {"links", links}});
  }
  nlohmann::json ord = nlohmann::json::array();
  for (int q : rs.global_order) ord.push_back(requests[q].id);
  return {{"routes", routes}, {"order", ord}};
}

RoutingSolution ros_from_json(const nlohmann::json& doc, const Topology& topo,
                              const std::vector<Request>& requests) {
  std::unordered_map<std::int64_t, int> by_id;
  for (std::size_t q = 0; q < requests.size(); ++q) by_id[requests[q].id] = int(q);
  auto request_index = [&](const nlohmann::json& v, const std::string& where) {
    if (!v.is_number_integer()) throw InputError(where, "expected an integer request id");
    auto it = by_id.find(v.get<std::int64_t>());
    if (it == by_id.end()) throw InputError(where, "unknown request id");
    return it->second;
  };
  if (!doc.contains("routes") || !doc.at("routes").is_array()) throw InputError("routes", "missing array");
  if (!doc.contains("order") || !doc.at("order").is_array()) throw InputError("order", "missing array");

  std::vector<std::vector<int>> routes(requests.size());
  std::vector<bool> seen(requests.size(), false);
  for (std::size_t k = 0; k < doc["routes"].size(); ++k) {
    const std::string where = "routes[" + std::to_string(k) + "]";
    const auto& entry = doc["routes"][k];
    if (!entry.contains("request") || !entry.contains("links"))
      throw InputError(where, "expected {request, links}");
    const int q = request_index(entry["request"], where + ".request");
    if (seen[q]) throw InputError(where, "request routed twice");
    seen[q] = true;
    for (const auto& lid : entry["links"]) {
      const std::string id = lid.is_string() ? lid.get<std::string>() : lid.dump();
      const int l = topo.link_index(id);
      if (l < 0) throw InputError(where + ".links", "unknown link \"" + id + "\"");
      routes[q].push_back(l);
    }
  }
  for (std::size_t q = 0; q < requests.size(); ++q)
    if (!seen[q]) throw InputError("routes", "request " + std::to_string(requests[q].id) + " has no route");

  std::vector<int> global;
  for (std::size_t k = 0; k < doc["order"].size(); ++k)
    global.push_back(request_index(doc["order"][k], "order[" + std::to_string(k) + "]"));
  auto per_link = restrict_order(topo, routes, global);
  return make_routing_solution(topo, requests, std::move(routes), std::move(per_link), std::move(global));
}

}  // namespace eon
