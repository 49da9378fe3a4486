#include <doctest.h>

#include <cmath>
#include <random>

#include "eon/oracle.hpp"
#include "eon/tcs.hpp"
#include "fixtures.hpp"

using namespace eon;
using S = VariableLayout;

namespace {

// Full-space log point of concrete configurations, distances at the actual gaps.
Vec to_log_point(const ProblemInstance& inst, const TcsProgram& tp, const std::vector<TransponderConfig>& cfgs) {
  Vec x(tp.layout.size());
  for (int q = 0; q < int(inst.size()); ++q) {
    const auto& c = cfgs[q];
    x(tp.layout.at(q, S::C)) = std::log(c.c);
    x(tp.layout.at(q, S::R)) = std::log(c.r);
    x(tp.layout.at(q, S::P)) = std::log(c.p);
    x(tp.layout.at(q, S::M)) = std::log(double(c.m));
    x(tp.layout.at(q, S::Omega)) = std::log(c.omega);
    x(tp.layout.at(q, S::T)) = std::log1p(inst.constants.kappa3 * c.c);
    x(tp.layout.at(q, S::B)) = c.b;
  }
  for (std::size_t p = 0; p < tp.layout.pairs.size(); ++p) {
    const auto [l, r] = tp.layout.pairs[p];
    x(tp.layout.distance(int(p))) = std::log(cfgs[r].omega - cfgs[l].omega);
  }
  return x;
}

Index find_constraint(const ConvexProgram& prog, const std::string& label) {
  for (Index i = 0; i < prog.num_constraints(); ++i)
    if (prog.constraint_label(i) == label) return i;
  FAIL("no constraint " << label);
  return -1;
}

std::vector<TransponderConfig> spread_configs(const ProblemInstance& inst, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> b(5, 8), m(1, inst.mode_budget());
  std::uniform_real_distribution<double> p(-4, -2);
  std::vector<TransponderConfig> cfgs(inst.size());
  const auto rank = inst.routing.rank();
  for (std::size_t q = 0; q < inst.size(); ++q) {
    cfgs[q] = {inst.discrete.c[q % inst.discrete.c.size()], b(rng), inst.discrete.r[q % 4], std::pow(10.0, p(rng)),
               m(rng), 0.0};
    cfgs[q].omega = inst.bandwidth() * (rank[q] + 0.5) / double(inst.size());
  }
  return cfgs;
}

}  // namespace

TEST_CASE("variable layout") {
  const auto inst = fixtures::three_requests();
  const auto tp = build_program(inst);
  // Requests 1 and 2 share AB, 1 and 3 share BC, 2 and 3 share nothing.
  CHECK(tp.layout.pairs.size() == 2);
  CHECK(tp.layout.size() == 7 * 3 + 2);
  CHECK(tp.program.num_full_vars() == tp.layout.size());
  CHECK(tp.layout.pair_index(1, 2) == -1);
  CHECK(tp.layout.pair_index(0, 1) == tp.layout.pair_index(1, 0));
  CHECK(tp.program.var_name(tp.layout.at(2, S::B)) == "b[3]");
}

TEST_CASE("log-domain constraints reproduce the physical formulas") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = fixtures::random_instance(rng, 5, 4000, 4);
    const auto tp = build_program(inst);
    const auto cfgs = spread_configs(inst, rng);
    const Vec x = to_log_point(inst, tp, cfgs);
    const auto& k = inst.constants;
    double power = 0.0;
    for (std::size_t q = 0; q < inst.size(); ++q) {
      const auto& c = cfgs[q];
      const std::string id = std::to_string(inst.requests[q].id);
      const double psi = osnr(q, cfgs, inst.routing.span_count, inst.routing.shared_spans, k);
      const double theta = osnr_threshold(c.c, c.r, k);
      CHECK(tp.program.full_constraint(find_constraint(tp.program, "qos[" + id + "]"), x) ==
            doctest::Approx(std::log(theta / psi)).epsilon(1e-10));
      const double cap = rate_capacity(c, inst.routing.span_count(q), inst.coupling, k);
      CHECK(tp.program.full_constraint(find_constraint(tp.program, "rate[" + id + "]"), x) ==
            doctest::Approx(std::log(inst.requests[q].rate / cap)).epsilon(1e-10));
      CHECK(std::exp(tp.program.full_constraint(find_constraint(tp.program, "threshold_aux[" + id + "]"), x)) ==
            doctest::Approx(1.0));
      power += transponder_power_convex(std::log(double(c.m)), std::log(c.r), c.b, k);
    }
    double penalty = 0.0;
    for (std::size_t p = 0; p < tp.layout.pairs.size(); ++p) penalty += 2.0 * inst.penalty_K / std::exp(x(tp.layout.distance(int(p))));
    CHECK(tp.program.full_objective(x) == doctest::Approx(power + penalty).epsilon(1e-12));
  }
}

TEST_CASE("QoS of a request without interferers is a single exponential") {
  const auto inst = fixtures::instance(fixtures::line_topology({400, 400}), {{1, "A", "B", 100}, {2, "B", "C", 100}});
  const auto tp = build_program(inst);
  const auto& qos = tp.program.constraints()[find_constraint(tp.program, "qos[1]")];
  CHECK(qos.terms.size() == 1);
  CHECK(tp.layout.pairs.empty());
}

TEST_CASE("fix, tie and free") {
  const auto inst = fixtures::three_requests();
  auto tp = build_program(inst);
  auto& prog = tp.program;
  const Index n = prog.num_vars();
  const int b0 = tp.layout.at(0, S::B), m0 = tp.layout.at(0, S::M), c1 = tp.layout.at(1, S::C);
  prog.fix(b0, 7.0);
  CHECK(prog.num_vars() == n - 1);
  CHECK(prog.reduced_index(b0) == -1);
  prog.tie(c1, tp.layout.at(1, S::R), 0.5);
  CHECK(prog.num_vars() == n - 2);
  Vec z = Vec::LinSpaced(prog.num_vars(), 0.1, 0.9);
  const Vec x = prog.expand(z);
  CHECK(x(b0) == 7.0);
  CHECK(x(c1) == doctest::Approx(x(tp.layout.at(1, S::R)) + 0.5));
  CHECK(prog.reduce(x) == z);
  CHECK(prog.objective(z) == doctest::Approx(prog.full_objective(x)));
  // Fixing a tie target fixes its dependants too.
  prog.fix(tp.layout.at(1, S::R), std::log(0.8));
  CHECK(prog.is_fixed(c1));
  CHECK(prog.fixed_value(c1) == doctest::Approx(std::log(0.8) + 0.5));
  prog.free(b0);
  prog.free(c1);
  CHECK(prog.is_free(b0));
  CHECK(prog.num_vars() == n - 1);
  CHECK_THROWS_AS(prog.tie(m0, tp.layout.at(1, S::R), 0.0), std::logic_error);  // target is fixed
  prog.tie(m0, b0, -6.0);
  CHECK_THROWS_AS(prog.free(b0), std::logic_error);
}

TEST_CASE("analytic gradients agree with central differences") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = fixtures::random_instance(rng, 5, 4000, 4);
    auto tp = build_program(inst);
    CHECK(finite_diff_check(tp.program, 20, trial + 1) < 1e-5);
    tp.program.fix(tp.layout.at(0, S::B), 6.0);
    CHECK(finite_diff_check(tp.program, 20, trial + 1) < 1e-5);
  }
}

TEST_CASE("transformed program is midpoint convex") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const auto inst = fixtures::random_instance(rng, 5, 4000, 4);
    const auto tp = build_program(inst);
    CHECK(convexity_sample(tp.program, 2000, trial + 1) <= 1e-9);
  }
}

TEST_CASE("negative controls are detected") {
  const fixtures::RawPowerProgram raw;
  CHECK(finite_diff_check(raw, 50) < 1e-5);
  CHECK(convexity_sample(raw, 2000) > 1e-3);

  const auto inst = fixtures::three_requests();
  const auto tp = build_program(inst);
  const fixtures::CorruptedGradient bad(tp.program, 1.01);
  CHECK(finite_diff_check(bad, 20) > 1e-3);
}
