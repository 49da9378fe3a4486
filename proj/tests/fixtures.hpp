#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "eon/instance.hpp"
#include "eon/program.hpp"
#include "eon/ros.hpp"

namespace fixtures {

using nlohmann::json;

struct Req {
  std::int64_t id;
  std::string src, dst;
  double gbps;
};

// Bidirectional chain A - B - C ... with the given link lengths.
inline json line_topology(const std::vector<double>& km, int modes = 3, double bandwidth_ghz = 2000) {
  json nodes = json::array(), links = json::array();
  for (std::size_t i = 0; i <= km.size(); ++i) nodes.push_back(std::string(1, char('A' + i)));
  for (std::size_t i = 0; i < km.size(); ++i) {
    const std::string a(1, char('A' + i)), b(1, char('A' + i + 1));
    links.push_back({{"id", a + b}, {"src", a}, {"dst", b}, {"length_km", km[i]}});
    links.push_back({{"id", b + a}, {"src", b}, {"dst", a}, {"length_km", km[i]}});
  }
  return {{"nodes", nodes}, {"links", links}, {"modes", modes}, {"bandwidth_ghz", bandwidth_ghz}};
}

inline json traffic(const std::vector<Req>& reqs) {
  json out = json::array();
  for (const auto& r : reqs) out.push_back({{"id", r.id}, {"src", r.src}, {"dst", r.dst}, {"rate_gbps", r.gbps}});
  return {{"requests", out}};
}

inline eon::ProblemInstance instance(const json& topo, const std::vector<Req>& reqs,
                                     eon::CouplingModel coupling = eon::CouplingModel::strong) {
  eon::ProblemInstance inst;
  inst.topology = eon::load_topology(topo, inst.constants.L_spn);
  inst.requests = eon::load_traffic(traffic(reqs), inst.topology);
  inst.routing = eon::solve_ros(inst.topology, inst.requests, {});
  inst.coupling = coupling;
  inst.validate();
  return inst;
}

// Three-node chain with three requests, the usual small test network.
inline eon::ProblemInstance three_requests() {
  return instance(line_topology({400, 400}),
                  {{1, "A", "C", 200}, {2, "A", "B", 100}, {3, "B", "C", 400}});
}

// Random chain instance: 2-4 nodes, 1..max_requests requests with rates
// between 20 and 150 Gb/s. Narrow spectrum when `bandwidth_ghz` is set.
inline eon::ProblemInstance random_instance(std::mt19937_64& rng, int max_requests, double bandwidth_ghz,
                                            int modes, int b_min = 4, int b_max = 11) {
  std::uniform_int_distribution<int> node_count(2, 4), req_count(1, max_requests);
  std::uniform_real_distribution<double> km(80, 800), gbps(20, 150);
  const int nodes = node_count(rng);
  std::vector<double> lengths;
  for (int i = 1; i < nodes; ++i) lengths.push_back(std::round(km(rng)));
  std::vector<Req> reqs;
  const int count = req_count(rng);
  std::uniform_int_distribution<int> pick(0, nodes - 1);
  for (int q = 0; q < count; ++q) {
    int s = pick(rng), d = pick(rng);
    while (d == s) d = pick(rng);
    reqs.push_back({q + 1, std::string(1, char('A' + s)), std::string(1, char('A' + d)), std::round(gbps(rng))});
  }
  auto inst = instance(line_topology(lengths, modes, bandwidth_ghz), reqs);
  inst.discrete.b_min = b_min;
  inst.discrete.b_max = b_max;
  inst.validate();
  return inst;
}

// Negative control for convexity: the power objective and a QoS-like
// constraint written in the original variables (m, b, r, p) with no
// exponential change of variables.
class RawPowerProgram : public eon::SmoothProgram {
 public:
  RawPowerProgram() {
    lo_.resize(4);
    hi_.resize(4);
    lo_ << 1.0, 4.0, 0.6, 1e-4;
    hi_ << 7.0, 11.0, 0.9, 1e-2;
  }
  eon::Index num_vars() const override { return 4; }
  eon::Index num_constraints() const override { return 1; }
  const eon::Vec& lower() const override { return lo_; }
  const eon::Vec& upper() const override { return hi_; }

  // P_trb + 2 P_edc m / r + 2 m b 2^b P_fft + 2 m^2 2^b P_dsp
  double objective(const eon::Vec& x, eon::Vec* grad) const override {
    const double m = x(0), b = x(1), r = x(2), e = std::exp2(b), l2 = std::log(2.0);
    if (grad) {
      grad->resize(4);
      (*grad)(0) = 6.4 / r + 2 * b * e * 4e-3 + 4 * m * e * 3e-3;
      (*grad)(1) = 2 * m * e * (1 + b * l2) * 4e-3 + 2 * m * m * e * l2 * 3e-3;
      (*grad)(2) = -6.4 * m / (r * r);
      (*grad)(3) = 0.0;
    }
    return 36 + 6.4 * m / r + 2 * m * b * e * 4e-3 + 2 * m * m * e * 3e-3;
  }

  // threshold * noise - per-mode power <= 0, noise growing with 2^b
  double constraint(eon::Index, const eon::Vec& x, eon::Vec* grad) const override {
    const double m = x(0), b = x(1), r = x(2), p = x(3), e = std::exp2(b);
    const double theta = std::pow(r, 3.37), noise = 1e-8 * e;
    if (grad) {
      grad->resize(4);
      (*grad)(0) = p / (m * m);
      (*grad)(1) = theta * noise * std::log(2.0);
      (*grad)(2) = 3.37 * theta / r * noise;
      (*grad)(3) = -1.0 / m;
    }
    return theta * noise - p / m;
  }

 private:
  eon::Vec lo_, hi_;
};

// Wraps a program and perturbs one gradient coordinate.
class CorruptedGradient : public eon::SmoothProgram {
 public:
  CorruptedGradient(const eon::SmoothProgram& inner, double factor) : inner_(inner), factor_(factor) {}
  eon::Index num_vars() const override { return inner_.num_vars(); }
  eon::Index num_constraints() const override { return inner_.num_constraints(); }
  const eon::Vec& lower() const override { return inner_.lower(); }
  const eon::Vec& upper() const override { return inner_.upper(); }
  double objective(const eon::Vec& z, eon::Vec* grad) const override {
    const double v = inner_.objective(z, grad);
    if (grad && grad->size()) (*grad)(0) = (*grad)(0) * factor_ + 1.0;
    return v;
  }
  double constraint(eon::Index i, const eon::Vec& z, eon::Vec* grad) const override {
    return inner_.constraint(i, z, grad);
  }

 private:
  const eon::SmoothProgram& inner_;
  double factor_;
};

}  // namespace fixtures
