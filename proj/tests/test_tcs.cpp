#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "eon/errors.hpp"
#include "eon/oracle.hpp"
#include "eon/tcs.hpp"
#include "fixtures.hpp"

using namespace eon;
using S = VariableLayout;

namespace {

const Residual& residual(const FeasibilityResult& r, const std::string& label) {
  for (const auto& x : r.residuals)
    if (x.label == label) return x;
  FAIL("missing residual " << label);
  return r.residuals.front();
}

// Two requests on one link, configured by hand.
struct Pair {
  ProblemInstance inst = fixtures::instance(fixtures::line_topology({400}), {{1, "A", "B", 100}, {2, "A", "B", 100}});
  std::vector<TransponderConfig> cfgs{{4, 8, 0.8, 5e-3, 1, 20e9}, {4, 8, 0.8, 5e-3, 1, 70e9}};
};

}  // namespace

TEST_CASE("feasibility check on hand-built points") {
  Pair t;
  // Delta = 80 MHz * 256 = 20.48 GHz; centre spacing 50 GHz > 20.48 + 20.
  auto ok = feasibility_check(t.cfgs, t.inst);
  CHECK(ok.pass);

  SUBCASE("overlapping carriers fail") {
    t.cfgs[1].omega = t.cfgs[0].omega + 20.48e9 + 20e9 - 1e6;
    const auto r = feasibility_check(t.cfgs, t.inst);
    CHECK_FALSE(r.pass);
    const auto left = t.inst.routing.global_order.front() == 0 ? "nonoverlap[1|2]" : "nonoverlap[2|1]";
    CHECK(r.worst_label == left);
    CHECK(residual(r, left).violation > 0.0);
  }
  SUBCASE("exact guard spacing passes") {
    const int lo = t.inst.routing.global_order.front(), hi = 1 - lo;
    t.cfgs[hi].omega = t.cfgs[lo].omega + 20.48e9 + 20e9;
    CHECK(feasibility_check(t.cfgs, t.inst).pass);
  }
  SUBCASE("carrier outside the spectrum fails") {
    t.cfgs[0].omega = 1e9;
    CHECK_FALSE(feasibility_check(t.cfgs, t.inst).pass);
  }
  SUBCASE("off-grid configuration fails") {
    t.cfgs[0].c = 4.5;
    CHECK(residual(feasibility_check(t.cfgs, t.inst), "config[1]").violation > 0.0);
  }
  SUBCASE("rate shortfall fails") {
    t.cfgs[0].c = 1;
    t.cfgs[0].b = 4;
    CHECK(residual(feasibility_check(t.cfgs, t.inst), "rate[1]").violation > 0.0);
  }
  SUBCASE("distance must match the carrier gap") {
    const double gap = std::abs(t.cfgs[1].omega - t.cfgs[0].omega);
    std::vector<PairDistance> d{{0, 1, gap + 0.5e-3 * t.inst.constants.G}};
    CHECK(feasibility_check(t.cfgs, t.inst, d).pass);
    d[0].d = gap + 2e-3 * t.inst.constants.G;
    CHECK_FALSE(feasibility_check(t.cfgs, t.inst, d).pass);
  }
}

TEST_CASE("OSNR exactly at threshold passes, just below fails") {
  auto inst = fixtures::instance(fixtures::line_topology({400}), {{1, "A", "B", 100}});
  const auto& k = inst.constants;
  TransponderConfig cfg{4, 7, 0.8, 0.0, 2, 40e9};
  // Alone on the link: Psi = (p / m) / (zeta N Delta).
  const double theta = osnr_threshold(cfg.c, cfg.r, k);
  cfg.p = cfg.m * theta * derived_zeta(k) * 5 * cfg.delta(k);
  std::vector<TransponderConfig> cfgs{cfg};
  CHECK(feasibility_check(cfgs, inst).pass);
  cfgs[0].p *= 1 - 1e-5;
  CHECK_FALSE(feasibility_check(cfgs, inst).pass);
}

TEST_CASE("solve on the three-request chain") {
  const auto inst = fixtures::three_requests();
  const auto adaptive = solve_tcs(inst);
  const auto fixed = fixed_power_baseline(inst);
  CHECK(adaptive.feasibility.pass);
  CHECK(fixed.feasibility.pass);
  CHECK(oracle_feasible(inst, adaptive.configs));
  CHECK(adaptive.objective_power_W <= fixed.objective_power_W + 1e-9);
  CHECK(adaptive.epochs <= adaptive.integer_variables);
  CHECK(adaptive.integer_variables == 12);
  CHECK(adaptive.kkt_residual < 1e-6);

  // The trace ends with every variable at its reported value.
  std::map<std::pair<int, char>, double> last;
  for (const auto& step : adaptive.rounding_trace) last[{step.request, step.variable}] = step.fixed;
  CHECK(last.size() == 12);
  for (int q = 0; q < 3; ++q) {
    CHECK(last[{q, 'b'}] == adaptive.configs[q].b);
    CHECK(last[{q, 'm'}] == adaptive.configs[q].m);
    // The final (c, r) polish may only raise r.
    CHECK(adaptive.configs[q].r >= last[{q, 'r'}]);
  }
  // Power breakdown adds up.
  double total = 0.0;
  for (const auto& c : adaptive.configs) total += transponder_power(c, inst.constants);
  CHECK(adaptive.objective_power_W == doctest::Approx(total).epsilon(1e-12));
}

TEST_CASE("fixed-power baseline keeps per-mode power at its preset") {
  const auto inst = fixtures::three_requests();
  const auto per_mode = fixed_per_mode_power(inst);
  const auto rep = fixed_power_baseline(inst);
  for (int q = 0; q < 3; ++q) CHECK(rep.configs[q].per_mode_power() == doctest::Approx(per_mode[q]).epsilon(1e-9));
}

TEST_CASE("loose precision accepts several candidates per epoch") {
  const auto inst = fixtures::three_requests();
  SolveOptions loose;
  loose.int_precision = 0.5;
  loose.grid_precision = 0.5;
  const auto rep = solve_tcs(inst, loose);
  CHECK(rep.feasibility.pass);
  CHECK(rep.epochs < rep.integer_variables);
  std::map<int, int> per_epoch;
  for (const auto& step : rep.rounding_trace) ++per_epoch[step.epoch];
  CHECK(std::any_of(per_epoch.begin(), per_epoch.end(), [](const auto& e) { return e.second > 1; }));
}

TEST_CASE("epoch limit") {
  const auto inst = fixtures::three_requests();
  SolveOptions opts;
  opts.max_epochs = 1;
  opts.int_precision = 1e-9;
  opts.grid_precision = 1e-9;
  CHECK_THROWS_AS(solve_tcs(inst, opts), InfeasibleError);
}

TEST_CASE("epochs never exceed the integer variable count") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = fixtures::random_instance(rng, 3, 2000, 3);
    const auto rep = solve_tcs(inst);
    CHECK(rep.epochs <= rep.integer_variables);
    CHECK(rep.feasibility.pass);
  }
}

TEST_CASE("without broadening a short low-rate request uses the fewest subcarriers") {
  auto inst = fixtures::instance(fixtures::line_topology({80}), {{1, "A", "B", 5}});
  inst.constants.sigma_cd = 0.0;
  inst.constants.rho_mc = 0.0;
  const auto rep = solve_tcs(inst);
  REQUIRE(rep.feasibility.pass);
  CHECK(rep.configs[0].b == inst.discrete.b_min);
  CHECK(rep.configs[0].m == 1);
  CHECK(rep.configs[0].r == inst.discrete.r.back());
}

TEST_CASE("single request matches the grid optimum") {
  for (double gbps : {40.0, 150.0, 400.0}) {
    auto inst = fixtures::instance(fixtures::line_topology({640}), {{1, "A", "B", gbps}});
    const auto rep = solve_tcs(inst);
    GridSpec grid;
    const auto ref = brute_force_tcs(inst, grid);
    REQUIRE(ref.feasible);
    CHECK(rep.feasibility.pass);
    CHECK(rep.objective_power_W <= ref.objective * 1.02);
  }
}

TEST_CASE("distances are tight at the continuous optimum") {
  const auto inst = fixtures::three_requests();
  auto tp = build_program(inst);
  const auto res = solve_continuous(tp.program, tp.program.reduce(initial_point(inst, tp.layout)));
  const Vec x = tp.program.expand(res.z);
  REQUIRE(!tp.layout.pairs.empty());
  for (std::size_t p = 0; p < tp.layout.pairs.size(); ++p) {
    const auto [l, r] = tp.layout.pairs[p];
    const double gap = std::exp(x(tp.layout.at(r, S::Omega))) - std::exp(x(tp.layout.at(l, S::Omega)));
    const double d = std::exp(x(tp.layout.distance(int(p))));
    CHECK(std::abs(d - gap) / gap < 1e-4);
  }
}

TEST_CASE("a link too narrow for its requests is reported") {
  const auto inst = fixtures::instance(fixtures::line_topology({400}, 3, 30),
                                       {{1, "A", "B", 10}, {2, "A", "B", 10}, {3, "A", "B", 10}});
  try {
    solve_tcs(inst);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    REQUIRE(!e.binding().empty());
    CHECK(e.binding().front() == "spectrum[AB]");
  }
}

TEST_CASE("power mode names") {
  CHECK(parse_power_mode("fixed") == PowerMode::fixed);
  CHECK(std::string(to_string(PowerMode::adaptive)) == "adaptive");
  CHECK_THROWS_AS(parse_power_mode("max"), InputError);
}
