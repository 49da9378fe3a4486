#include "eon/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <set>

#include "eon/errors.hpp"

namespace eon {

using nlohmann::json;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path, e.what());
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw InputError(where + key, "missing field");
  return obj.at(key);
}

std::string id_string(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw InputError(where, "expected a string or integer id");
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw InputError(where, "expected a number");
  return v.get<double>();
}

}  // namespace

int Topology::node_index(const std::string& id) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
  return it != nodes.end() && *it == id ? int(it - nodes.begin()) : -1;
}

int Topology::link_index(const std::string& id) const {
  auto it = std::lower_bound(links.begin(), links.end(), id,
                             [](const Link& l, const std::string& v) { return l.id < v; });
  return it != links.end() && it->id == id ? int(it - links.begin()) : -1;
}

std::vector<int> RoutingSolution::rank() const {
  std::vector<int> out(global_order.size());
  for (std::size_t k = 0; k < global_order.size(); ++k) out[global_order[k]] = int(k);
  return out;
}

int span_count_for(double length_m, double span_length_m) {
  // Guard against 160 km / 80 km evaluating to 2.0000000001.
  const double ratio = length_m / span_length_m;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) < 1e-9 * std::max(1.0, ratio)) return std::max(1, int(nearest));
  return std::max(1, int(std::ceil(ratio)));
}

Topology load_topology(const json& doc, double span_length_m) {
  Topology topo;
  const json& nodes = require(doc, "nodes", "");
  if (!nodes.is_array() || nodes.empty()) throw InputError("nodes", "expected a non-empty array");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    topo.nodes.push_back(id_string(nodes[i], "nodes[" + std::to_string(i) + "]"));
  std::sort(topo.nodes.begin(), topo.nodes.end());
  if (std::adjacent_find(topo.nodes.begin(), topo.nodes.end()) != topo.nodes.end())
    throw InputError("nodes", "duplicate node id");

  const json& modes = require(doc, "modes", "");
  if (!modes.is_number_integer() || modes.get<int>() < 1)
    throw InputError("modes", "expected an integer >= 1");
  topo.modes = modes.get<int>();

  const double bw = number(require(doc, "bandwidth_ghz", ""), "bandwidth_ghz");
  if (!(bw > 0.0)) throw InputError("bandwidth_ghz", "must be positive");
  topo.bandwidth = bw * 1e9;

  const json& links = require(doc, "links", "");
  if (!links.is_array()) throw InputError("links", "expected an array");
  for (std::size_t i = 0; i < links.size(); ++i) {
    const std::string where = "links[" + std::to_string(i) + "].";
    const json& l = links[i];
    Link link;
    link.id = id_string(require(l, "id", where), where + "id");
    const std::string src = id_string(require(l, "src", where), where + "src");
    const std::string dst = id_string(require(l, "dst", where), where + "dst");
    link.src = topo.node_index(src);
    link.dst = topo.node_index(dst);
    if (link.src < 0) throw InputError(where + "src", "unknown node \"" + src + "\"");
    if (link.dst < 0) throw InputError(where + "dst", "unknown node \"" + dst + "\"");
    if (link.src == link.dst) throw InputError(where + "dst", "self-loop");
    const double km = number(require(l, "length_km", where), where + "length_km");
    if (!(km > 0.0) || !std::isfinite(km)) throw InputError(where + "length_km", "must be positive");
    link.length = km * 1e3;
    link.span_count = span_count_for(link.length, span_length_m);
    topo.links.push_back(std::move(link));
  }
  std::sort(topo.links.begin(), topo.links.end(),
            [](const Link& a, const Link& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < topo.links.size(); ++i)
    if (topo.links[i].id == topo.links[i - 1].id)
      throw InputError("links", "duplicate link id \"" + topo.links[i].id + "\"");
  return topo;
}

Topology load_topology_file(const std::string& path, double span_length_m) {
  return load_topology(read_json(path), span_length_m);
}

std::vector<Request> load_traffic(const json& doc, const Topology& topo) {
  const json& reqs = require(doc, "requests", "");
  if (!reqs.is_array()) throw InputError("requests", "expected an array");
  std::vector<Request> out;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const std::string where = "requests[" + std::to_string(i) + "].";
    const json& r = reqs[i];
    Request req;
    const json& id = require(r, "id", where);
    if (!id.is_number_integer()) throw InputError(where + "id", "expected an integer");
    req.id = id.get<std::int64_t>();
    const std::string src = id_string(require(r, "src", where), where + "src");
    const std::string dst = id_string(require(r, "dst", where), where + "dst");
    req.src = topo.node_index(src);
    req.dst = topo.node_index(dst);
    if (req.src < 0) throw InputError(where + "src", "unknown node \"" + src + "\"");
    if (req.dst < 0) throw InputError(where + "dst", "unknown node \"" + dst + "\"");
    if (req.src == req.dst) throw InputError(where + "dst", "source equals destination");
    const double gbps = number(require(r, "rate_gbps", where), where + "rate_gbps");
    if (!(gbps > 0.0) || !std::isfinite(gbps)) throw InputError(where + "rate_gbps", "must be positive");
    req.rate = gbps * 1e9;
    out.push_back(req);
  }
  std::sort(out.begin(), out.end(), [](const Request& a, const Request& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i].id == out[i - 1].id)
      throw InputError("requests", "duplicate request id " + std::to_string(out[i].id));
  return out;
}

std::vector<Request> load_traffic_file(const std::string& path, const Topology& topo) {
  return load_traffic(read_json(path), topo);
}

namespace {

void check_contiguous(const Topology& topo, const std::vector<int>& route, std::size_t q) {
  const std::string where = "routes[" + std::to_string(q) + "]";
  if (route.empty()) throw InputError(where, "empty route");
  std::set<int> seen;
  for (std::size_t k = 0; k < route.size(); ++k) {
    if (route[k] < 0 || route[k] >= int(topo.links.size()))
      throw InputError(where, "unknown link index " + std::to_string(route[k]));
    if (!seen.insert(route[k]).second) throw InputError(where, "link repeated in route");
    if (k > 0 && topo.links[route[k - 1]].dst != topo.links[route[k]].src)
      throw InputError(where, "route is disconnected at link \"" + topo.links[route[k]].id + "\"");
  }
}

}  // namespace

Eigen::MatrixXi compute_shared_spans(const Topology& topo, const std::vector<std::vector<int>>& routes) {
  const auto n = Eigen::Index(routes.size());
  for (std::size_t q = 0; q < routes.size(); ++q) check_contiguous(topo, routes[q], q);
  std::vector<std::vector<int>> users(topo.links.size());
  for (std::size_t q = 0; q < routes.size(); ++q)
    for (int l : routes[q]) users[l].push_back(int(q));
  Eigen::MatrixXi shared = Eigen::MatrixXi::Zero(n, n);
  for (std::size_t l = 0; l < users.size(); ++l)
    for (int a : users[l])
      for (int b : users[l])
        if (a != b) shared(a, b) += topo.links[l].span_count;
  return shared;
}

RoutingSolution make_routing_solution(const Topology& topo, const std::vector<Request>& requests,
                                      std::vector<std::vector<int>> routes,
                                      std::vector<std::vector<int>> link_order,
                                      std::vector<int> global_order) {
  const int n = int(requests.size());
  if (int(routes.size()) != n) throw InputError("routes", "one route per request required");
  if (link_order.size() != topo.links.size())
    throw InputError("link_order", "one order per link required");

  RoutingSolution rs;
  rs.shared_spans = compute_shared_spans(topo, routes);
  rs.span_count = Eigen::VectorXi::Zero(n);
  std::vector<std::set<int>> users(topo.links.size());
  for (int q = 0; q < n; ++q) {
    const auto& route = routes[q];
    if (topo.links[route.front()].src != requests[q].src || topo.links[route.back()].dst != requests[q].dst)
      throw InputError("routes[" + std::to_string(q) + "]", "route does not join request endpoints");
    for (int l : route) {
      rs.span_count(q) += topo.links[l].span_count;
      users[l].insert(q);
    }
  }
  for (std::size_t l = 0; l < link_order.size(); ++l) {
    const std::set<int> listed(link_order[l].begin(), link_order[l].end());
    if (listed.size() != link_order[l].size() || listed != users[l])
      throw InputError("link_order[" + topo.links[l].id + "]",
                       "must list exactly the requests routed over the link");
  }

  if (!global_order.empty()) {
    std::vector<int> sorted = global_order;
    std::sort(sorted.begin(), sorted.end());
    bool permutation = int(sorted.size()) == n;
    for (int q = 0; permutation && q < n; ++q) permutation = sorted[q] == q;
    if (!permutation) throw InputError("order", "global order must be a permutation of the requests");
    std::vector<int> pos(n);
    for (int k = 0; k < n; ++k) pos[global_order[k]] = k;
    for (std::size_t l = 0; l < link_order.size(); ++l)
      for (std::size_t j = 1; j < link_order[l].size(); ++j)
        if (pos[link_order[l][j - 1]] > pos[link_order[l][j]])
          throw InputError("link_order[" + topo.links[l].id + "]",
                           "not a subsequence of the global order");
  } else {
    std::vector<std::set<int>> succ(n);
    std::vector<int> indegree(n, 0);
    for (const auto& order : link_order)
      for (std::size_t j = 1; j < order.size(); ++j)
        if (succ[order[j - 1]].insert(order[j]).second) ++indegree[order[j]];
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int q = 0; q < n; ++q)
      if (indegree[q] == 0) ready.push(q);
    while (!ready.empty()) {
      const int q = ready.top();
      ready.pop();
      global_order.push_back(q);
      for (int s : succ[q])
        if (--indegree[s] == 0) ready.push(s);
    }
    if (int(global_order.size()) != n)
      throw InputError("link_order", "per-link orders are cyclic; no single frequency order exists");
  }

  rs.route = std::move(routes);
  rs.link_order = std::move(link_order);
  rs.global_order = std::move(global_order);
  return rs;
}

}  // namespace eon
