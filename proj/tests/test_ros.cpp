#include <doctest.h>

#include <algorithm>
#include <functional>

#include "eon/errors.hpp"
#include "eon/ros.hpp"
#include "fixtures.hpp"

using namespace eon;

namespace {

const std::string kData = EON_DATA_DIR;

double length_of(const Topology& topo, const std::vector<int>& path) {
  double s = 0.0;
  for (int l : path) s += topo.links[l].length;
  return s;
}

// Every loop-free path by depth-first search.
std::vector<std::vector<int>> all_simple_paths(const Topology& topo, int src, int dst) {
  std::vector<std::vector<int>> out;
  std::vector<int> path;
  std::vector<bool> visited(topo.nodes.size(), false);
  std::function<void(int)> dfs = [&](int u) {
    if (u == dst) {
      out.push_back(path);
      return;
    }
    visited[u] = true;
    for (int l = 0; l < int(topo.links.size()); ++l) {
      if (topo.links[l].src != u || visited[topo.links[l].dst]) continue;
      path.push_back(l);
      dfs(topo.links[l].dst);
      path.pop_back();
    }
    visited[u] = false;
  };
  dfs(src);
  return out;
}

}  // namespace

TEST_CASE("k shortest paths match exhaustive enumeration") {
  for (const char* name : {"ring6.json", "cost239.json"}) {
    const auto topo = load_topology_file(kData + "/topologies/" + name, 80e3);
    for (int s = 0; s < int(topo.nodes.size()); s += 2)
      for (int d = 0; d < int(topo.nodes.size()); d += 3) {
        if (s == d) continue;
        auto all = all_simple_paths(topo, s, d);
        std::vector<double> lengths;
        for (const auto& p : all) lengths.push_back(length_of(topo, p));
        std::sort(lengths.begin(), lengths.end());
        const auto ksp = k_shortest_paths(topo, s, d, 4);
        REQUIRE(ksp.size() == std::min<std::size_t>(4, all.size()));
        for (std::size_t k = 0; k < ksp.size(); ++k) {
          CHECK(length_of(topo, ksp[k]) == doctest::Approx(lengths[k]));
          CHECK(std::find(all.begin(), all.end(), ksp[k]) != all.end());
        }
      }
  }
}

TEST_CASE("unreachable destination is an input error") {
  auto doc = fixtures::line_topology({400});
  doc["links"].erase(1);  // only A -> B remains
  const auto topo = load_topology(doc, 80e3);
  CHECK(k_shortest_paths(topo, 1, 0, 3).empty());
  const auto reqs = load_traffic(fixtures::traffic({{1, "B", "A", 10}}), topo);
  CHECK_THROWS_AS(solve_ros(topo, reqs, {}), InputError);
}

TEST_CASE("ordering rules") {
  const auto topo = load_topology(fixtures::line_topology({400, 100}), 80e3);
  const auto reqs = load_traffic(
      fixtures::traffic({{1, "A", "B", 50}, {2, "B", "C", 200}, {3, "A", "C", 200}, {4, "A", "C", 10}}), topo);
  const auto routes = route(topo, reqs, {});
  RosConfig cfg;
  cfg.ordering_rule = OrderingRule::by_demand_desc;
  CHECK(order(topo, routes, reqs, cfg) == std::vector<int>{1, 2, 0, 3});
  cfg.ordering_rule = OrderingRule::by_id;
  CHECK(order(topo, routes, reqs, cfg) == std::vector<int>{0, 1, 2, 3});
  cfg.ordering_rule = OrderingRule::by_path_length;
  CHECK(order(topo, routes, reqs, cfg) == std::vector<int>{2, 3, 0, 1});
  CHECK(parse_ordering_rule("by-path-length") == OrderingRule::by_path_length);
  CHECK_THROWS_AS(parse_ordering_rule("random"), InputError);
}

TEST_CASE("link orders are restrictions of the global order") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = fixtures::random_instance(rng, 8, 2000, 3);
    const auto& rs = inst.routing;
    const auto rank = rs.rank();
    for (std::size_t l = 0; l < rs.link_order.size(); ++l) {
      const auto& ord = rs.link_order[l];
      for (std::size_t k = 1; k < ord.size(); ++k) CHECK(rank[ord[k - 1]] < rank[ord[k]]);
      int users = 0;
      for (const auto& r : rs.route) users += std::count(r.begin(), r.end(), int(l));
      CHECK(int(ord.size()) == users);
    }
  }
}

TEST_CASE("load balancing spreads requests over the ring") {
  const auto topo = load_topology_file(kData + "/topologies/ring6.json", 80e3);
  // Two equal requests between opposite nodes: the second takes the other way round.
  const auto doc = fixtures::traffic({{1, "N1", "N4", 100}, {2, "N1", "N4", 100}});
  const auto reqs = load_traffic(doc, topo);
  const auto routes = route(topo, reqs, {});
  for (int l : routes[0]) CHECK(std::find(routes[1].begin(), routes[1].end(), l) == routes[1].end());
}

TEST_CASE("routing JSON round trip") {
  const auto inst = fixtures::three_requests();
  const auto doc = ros_to_json(inst.routing, inst.topology, inst.requests);
  const auto back = ros_from_json(doc, inst.topology, inst.requests);
  CHECK(back.route == inst.routing.route);
  CHECK(back.link_order == inst.routing.link_order);
  CHECK(back.global_order == inst.routing.global_order);
  CHECK(back.shared_spans == inst.routing.shared_spans);
  auto bad = doc;
  bad["routes"][0]["links"] = nlohmann::json::array({"BC"});
  CHECK_THROWS_AS(ros_from_json(bad, inst.topology, inst.requests), InputError);
}
