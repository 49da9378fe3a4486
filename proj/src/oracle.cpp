#include "eon/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <ostream>
#include <random>

#include "eon/errors.hpp"

namespace eon {

std::vector<double> GridSpec::p_values(const ProblemInstance& inst) const {
  std::vector<double> out;
  const int count = p_decades * p_per_decade;
  for (int k = 0; k <= count; ++k) {
    const double p = p_low * std::pow(10.0, double(k) / p_per_decade);
    if (p >= inst.p_min * (1 - 1e-12) && p <= inst.p_max * (1 + 1e-12)) out.push_back(p);
  }
  return out;
}

std::vector<double> GridSpec::omega_values(const ProblemInstance& inst) const {
  const double step = omega_step > 0.0 ? omega_step : 0.25 * inst.constants.G;
  std::vector<double> out;
  for (int k = 1; k * step < inst.bandwidth(); ++k) out.push_back(k * step);
  return out;
}

namespace {

// Everything the oracle needs, derived from the instance without going
// through the solver's physics or routing helpers.
struct Model {
  const ProblemInstance& inst;
  const PhysicalConstants& k;
  int n;
  std::vector<int> spans;                      // N_q
  std::vector<std::vector<int>> shared;        // N_{q,i}
  std::vector<std::vector<int>> link_requests; // spectral order per link
  double zeta;
  double varsigma;

  explicit Model(const ProblemInstance& in)
      : inst(in), k(in.constants), n(int(in.size())), spans(n, 0), shared(n, std::vector<int>(n, 0)) {
    const auto& links = inst.topology.links;
    std::vector<std::vector<int>> uses(links.size());
    for (int q = 0; q < n; ++q)
      for (int l : inst.routing.route[q]) {
        spans[q] += links[l].span_count;
        uses[l].push_back(q);
      }
    for (std::size_t l = 0; l < links.size(); ++l)
      for (int q : uses[l])
        for (int i : uses[l])
          if (q != i) shared[q][i] += links[l].span_count;
    link_requests = inst.routing.link_order;
    zeta = (std::exp(k.alpha * k.L_spn) - 1.0) * k.planck_h * k.nu * k.n_sp;
    varsigma = 3.0 * k.gamma_nl * k.gamma_nl / (2.0 * k.alpha * std::acos(-1.0) * k.beta2_abs);
  }

  double delta(int b) const { return k.F * std::pow(2.0, b); }

  double power(int m, int b, double r) const {
    const double sub = std::pow(2.0, b);
    return k.P_trb + 2.0 * k.P_edc * m / r + 2.0 * m * sub * b * k.P_fft + 2.0 * m * m * sub * k.P_dsp;
  }

  double threshold(double c, double r) const {
    return std::pow(r, k.kappa2) * std::pow(1.0 + k.kappa3 * c, k.kappa4);
  }

  bool in_grid(const std::vector<double>& grid, double v) const {
    for (double g : grid)
      if (std::abs(g - v) <= 1e-12 * g) return true;
    return false;
  }

  bool config_ok(const TransponderConfig& cfg) const {
    return cfg.m >= 1 && cfg.m <= inst.mode_budget() && cfg.b >= inst.discrete.b_min &&
           cfg.b <= inst.discrete.b_max && in_grid(inst.discrete.c, cfg.c) && in_grid(inst.discrete.r, cfg.r) &&
           cfg.p > 0.0;
  }

  bool spectrum_ok(int b, double omega) const {
    const double half = 0.5 * delta(b), B = inst.bandwidth();
    return omega - half >= -1e-12 * B && omega + half <= B * (1 + 1e-12);
  }

  // Every pair on a link, not only neighbours.
  bool order_ok(std::span<const TransponderConfig> cfgs) const {
    for (const auto& on : link_requests)
      for (std::size_t a = 0; a < on.size(); ++a)
        for (std::size_t z = a + 1; z < on.size(); ++z) {
          const auto& lo = cfgs[on[a]];
          const auto& hi = cfgs[on[z]];
          const double need = 0.5 * (delta(lo.b) + delta(hi.b)) + k.G * (1 - 1e-9);
          if (hi.omega - lo.omega < need) return false;
        }
    return true;
  }

  double capacity(int q, int m, int b, double r, double c) const {
    const double g = inst.coupling == CouplingModel::strong ? std::sqrt(double(spans[q])) : double(spans[q]);
    const double cp = k.F * (k.sigma_cd * spans[q] * std::pow(2.0, b) + k.rho_mc * std::pow(m, -k.mode_exp) * g);
    return 2.0 * m * r * c * delta(b) / (1.0 + cp);
  }

  bool rate_ok(int q, int m, int b, double r, double c) const {
    return inst.requests[q].rate <= capacity(q, m, b, r, c) * (1 + 1e-9);
  }

  // x >= Theta' (A + kappa1 varsigma x S) with x the per-mode power and
  // Theta' the relaxed threshold, i.e. Psi >= Theta (1 - 1e-6).
  bool qos_ok(int q, std::span<const TransponderConfig> cfgs) const {
    const auto& s = cfgs[q];
    const double x = s.p / s.m;
    double nli = 0.0;
    for (int i = 0; i < n; ++i) {
      if (i == q || shared[q][i] == 0) continue;
      const auto& o = cfgs[i];
      const double d = std::abs(s.omega - o.omega);
      if (d <= 0.0) return false;
      const double xi = o.p / o.m;
      nli += o.m * xi * xi * shared[q][i] / (delta(o.b) * d);
    }
    const double noise = zeta * spans[q] * delta(s.b) + k.kappa1 * varsigma * x * nli;
    return x >= threshold(s.c, s.r) * (1 - 1e-6) * noise;
  }

  bool feasible(std::span<const TransponderConfig> cfgs) const {
    if (int(cfgs.size()) != n) return false;
    for (int q = 0; q < n; ++q) {
      const auto& c = cfgs[q];
      if (!config_ok(c) || !spectrum_ok(c.b, c.omega) || !rate_ok(q, c.m, c.b, c.r, c.c)) return false;
    }
    if (!order_ok(cfgs)) return false;
    for (int q = 0; q < n; ++q)
      if (!qos_ok(q, cfgs)) return false;
    return true;
  }
};

struct Tuple {
  int b, m;
  double r, c;
  double power;
};

}  // namespace

bool oracle_feasible(const ProblemInstance& inst, std::span<const TransponderConfig> configs) {
  return Model(inst).feasible(configs);
}

BruteForceResult brute_force_tcs(const ProblemInstance& inst, const GridSpec& grid) {
  const auto start = std::chrono::steady_clock::now();
  const Model model(inst);
  const int n = model.n;
  const auto p_grid = grid.p_values(inst);
  const auto w_grid = grid.omega_values(inst);
  if (p_grid.empty() || w_grid.empty()) throw InputError("grid", "empty power or frequency grid");
  BruteForceResult out;

  // Per-request candidates: smallest rate-feasible c for each (b, m, r),
  // dropped if even the largest grid power without interference misses the
  // threshold.
  std::vector<std::vector<Tuple>> options(n);
  for (int q = 0; q < n; ++q) {
    for (int b = inst.discrete.b_min; b <= inst.discrete.b_max; ++b)
      for (int m = 1; m <= inst.mode_budget(); ++m)
        for (double r : inst.discrete.r)
          for (double c : inst.discrete.c) {
            if (!model.rate_ok(q, m, b, r, c)) continue;
            const double best_psi = (p_grid.back() / m) / (model.zeta * model.spans[q] * model.delta(b));
            if (best_psi >= model.threshold(c, r) * (1 - 1e-6))
              options[q].push_back({b, m, r, c, model.power(m, b, r)});
            break;
          }
    if (options[q].empty()) {
      out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return out;
    }
  }

  // Frequency assignments admissible at minimum bandwidth bound those of
  // any tuple.
  std::vector<TransponderConfig> cfgs(n);
  for (auto& c : cfgs) c.b = inst.discrete.b_min;
  double assignments = 0.0;
  auto count_omega = [&](int q, auto&& self) -> void {
    if (q == n) {
      if (model.order_ok(cfgs)) assignments += 1.0;
      return;
    }
    for (double w : w_grid) {
      if (!model.spectrum_ok(cfgs[q].b, w)) continue;
      cfgs[q].omega = w;
      self(q + 1, self);
    }
  };
  count_omega(0, count_omega);

  double joint = 1.0;
  for (const auto& o : options) joint *= double(o.size());
  const double per_assignment =
      grid.exhaustive_power ? std::pow(double(p_grid.size()), n) : double(n) * double(p_grid.size());
  out.size_estimate = joint * assignments * per_assignment;
  if (out.size_estimate > grid.cap) throw CapExceededError(out.size_estimate, grid.cap);

  struct Joint {
    double power;
    std::vector<int> pick;
  };
  std::vector<Joint> joints;
  std::vector<int> pick(n, 0);
  std::function<void(int, double)> build = [&](int q, double power) {
    if (q == n) {
      joints.push_back({power, pick});
      return;
    }
    for (int j = 0; j < int(options[q].size()); ++j) {
      pick[q] = j;
      build(q + 1, power + options[q][j].power);
    }
  };
  build(0, 0.0);
  std::stable_sort(joints.begin(), joints.end(), [](const Joint& a, const Joint& b) { return a.power < b.power; });

  auto exhaustive = [&](int q, auto&& self) -> bool {
    if (q == n) {
      ++out.points_evaluated;
      for (int i = 0; i < n; ++i)
        if (!model.qos_ok(i, cfgs)) return false;
      return true;
    }
    for (double p : p_grid) {
      cfgs[q].p = p;
      if (self(q + 1, self)) return true;
    }
    return false;
  };
  std::vector<std::size_t> level(n);
  auto least_power = [&]() -> bool {
    std::fill(level.begin(), level.end(), 0);
    for (int q = 0; q < n; ++q) cfgs[q].p = p_grid[0];
    for (bool raised = true; raised;) {
      raised = false;
      for (int q = 0; q < n; ++q) {
        ++out.points_evaluated;
        while (!model.qos_ok(q, cfgs)) {
          if (++level[q] == p_grid.size()) return false;
          cfgs[q].p = p_grid[level[q]];
          raised = true;
        }
      }
    }
    return true;
  };
  auto search_power = [&]() { return grid.exhaustive_power ? exhaustive(0, exhaustive) : least_power(); };
  auto search_omega = [&](int q, auto&& self) -> bool {
    if (q == n) return model.order_ok(cfgs) && search_power();
    for (double w : w_grid) {
      if (!model.spectrum_ok(cfgs[q].b, w)) continue;
      cfgs[q].omega = w;
      if (self(q + 1, self)) return true;
    }
    return false;
  };

  for (const auto& j : joints) {
    for (int q = 0; q < n; ++q) {
      const auto& t = options[q][j.pick[q]];
      cfgs[q] = TransponderConfig{t.c, t.b, t.r, 0.0, t.m, 0.0};
    }
    if (!search_omega(0, search_omega)) continue;
    out.ranked.push_back({j.power, cfgs});
    if (int(out.ranked.size()) >= grid.top_k) break;
  }

  if (!out.ranked.empty()) {
    out.feasible = true;
    out.objective = out.ranked.front().objective;
    out.configs = out.ranked.front().configs;
  }
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void write_ranked_csv(std::ostream& os, const ProblemInstance& inst, const BruteForceResult& result) {
  os << "rank,objective_W,request_id,c,b,r,p_mW,m,omega_GHz\n";
  for (std::size_t rank = 0; rank < result.ranked.size(); ++rank) {
    const auto& pt = result.ranked[rank];
    for (std::size_t q = 0; q < pt.configs.size(); ++q) {
      const auto& c = pt.configs[q];
      os << rank + 1 << ',' << pt.objective << ',' << inst.requests[q].id << ',' << c.c << ',' << c.b << ','
         << c.r << ',' << c.p * 1e3 << ',' << c.m << ',' << c.omega * 1e-9 << '\n';
    }
  }
}

namespace {

Vec sample_point(const SmoothProgram& prog, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Vec z(prog.num_vars());
  for (Index j = 0; j < z.size(); ++j) {
    const double lo = std::isfinite(prog.lower()(j)) ? prog.lower()(j) : -10.0;
    const double hi = std::isfinite(prog.upper()(j)) ? prog.upper()(j) : 10.0;
    z(j) = lo + (hi - lo) * unit(rng);
  }
  return z;
}

}  // namespace

double finite_diff_check(const SmoothProgram& prog, int points, std::uint64_t seed, double step) {
  const Index nv = prog.num_vars();
  if (nv == 0) return 0.0;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  Vec grad(nv);
  for (int s = 0; s < points; ++s) {
    const Vec z = sample_point(prog, rng);
    auto check = [&](const std::function<double(const Vec&, Vec*)>& f) {
      f(z, &grad);
      Vec zp = z, zm = z;
      for (Index j = 0; j < nv; ++j) {
        zp(j) = z(j) + step;
        zm(j) = z(j) - step;
        const double fd = (f(zp, nullptr) - f(zm, nullptr)) / (2.0 * step);
        worst = std::max(worst, std::abs(grad(j) - fd) / std::max(1.0, std::abs(grad(j))));
        zp(j) = zm(j) = z(j);
      }
    };
    check([&](const Vec& x, Vec* g) { return prog.objective(x, g); });
    for (Index i = 0; i < prog.num_constraints(); ++i)
      check([&](const Vec& x, Vec* g) { return prog.constraint(i, x, g); });
  }
  return worst;
}

double convexity_sample(const SmoothProgram& prog, int pairs, std::uint64_t seed) {
  if (prog.num_vars() == 0) return 0.0;
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  auto midpoint_gap = [](double fx, double fy, double fm) {
    const double avg = 0.5 * (fx + fy);
    return (fm - avg) / std::max(1.0, std::abs(avg));
  };
  for (int s = 0; s < pairs; ++s) {
    const Vec x = sample_point(prog, rng);
    const Vec y = sample_point(prog, rng);
    const Vec mid = 0.5 * (x + y);
    worst = std::max(worst, midpoint_gap(prog.objective(x), prog.objective(y), prog.objective(mid)));
    for (Index i = 0; i < prog.num_constraints(); ++i)
      worst = std::max(worst,
                       midpoint_gap(prog.constraint(i, x), prog.constraint(i, y), prog.constraint(i, mid)));
  }
  return worst;
}

}  // namespace eon
