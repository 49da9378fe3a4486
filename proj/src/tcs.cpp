#include "eon/tcs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <set>

#include "eon/errors.hpp"

namespace eon {

namespace {

constexpr double kLn2 = std::numbers::ln2;

std::string rid(const ProblemInstance& inst, int q) { return std::to_string(inst.requests[q].id); }

}  // namespace

int VariableLayout::pair_index(int q, int i) const {
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if ((pairs[k].left == q && pairs[k].right == i) || (pairs[k].left == i && pairs[k].right == q))
      return int(k);
  return -1;
}

PowerMode parse_power_mode(const std::string& s) {
  if (s == "adaptive") return PowerMode::adaptive;
  if (s == "fixed") return PowerMode::fixed;
  throw InputError("power_mode", "expected \"adaptive\" or \"fixed\", got \"" + s + "\"");
}

const char* to_string(PowerMode m) { return m == PowerMode::adaptive ? "adaptive" : "fixed"; }

TcsProgram build_program(const ProblemInstance& inst) {
  using S = VariableLayout;
  const auto& k = inst.constants;
  const auto& rs = inst.routing;
  const int n = int(inst.size());
  const double bw = inst.bandwidth();
  const double min_delta = std::ldexp(k.F, inst.discrete.b_min);

  for (std::size_t l = 0; l < rs.link_order.size(); ++l) {
    const auto& users = rs.link_order[l];
    if (users.empty()) continue;
    const double need = double(users.size()) * min_delta + double(users.size() - 1) * k.G;
    if (need > bw)
      throw InfeasibleError("link " + inst.topology.links[l].id + " needs " + std::to_string(need * 1e-9) +
                                " GHz at minimum bandwidth but has " + std::to_string(bw * 1e-9),
                            {"spectrum[" + inst.topology.links[l].id + "]"});
  }

  TcsProgram out;
  auto& layout = out.layout;
  layout.requests = n;
  const auto rank = rs.rank();
  for (int q = 0; q < n; ++q)
    for (int i = q + 1; i < n; ++i)
      if (rs.shared_spans(q, i) > 0)
        layout.pairs.push_back(rank[q] < rank[i] ? S::Pair{q, i} : S::Pair{i, q});

  const int nv = layout.size();
  std::vector<std::string> names(nv);
  Vec lo(nv), hi(nv);
  const auto& cg = inst.discrete.c;
  const auto& rg = inst.discrete.r;
  for (int q = 0; q < n; ++q) {
    const std::string id = rid(inst, q);
    auto set = [&](S::Slot s, const char* name, double l, double h) {
      names[layout.at(q, s)] = std::string(name) + "[" + id + "]";
      lo(layout.at(q, s)) = l;
      hi(layout.at(q, s)) = h;
    };
    set(S::C, "ln_c", std::log(cg.front()), std::log(cg.back()));
    set(S::R, "ln_r", std::log(rg.front()), std::log(rg.back()));
    set(S::P, "ln_p", std::log(inst.p_min), std::log(inst.p_max));
    set(S::M, "ln_m", 0.0, std::log(double(inst.mode_budget())));
    set(S::Omega, "ln_omega", std::log(0.5 * min_delta), std::log(bw));
    set(S::T, "ln_t", std::log1p(k.kappa3 * cg.front()), std::log1p(k.kappa3 * cg.back()) + 1.0);
    set(S::B, "b", inst.discrete.b_min, inst.discrete.b_max);
  }
  for (std::size_t p = 0; p < layout.pairs.size(); ++p) {
    const int j = layout.distance(int(p));
    names[j] = "ln_d[" + rid(inst, layout.pairs[p].left) + "|" + rid(inst, layout.pairs[p].right) + "]";
    lo(j) = std::log(k.F);
    hi(j) = std::log(bw);
  }

  // Objective: transponder power with the FFT surrogate, plus the distance penalty.
  std::vector<Monomial> obj;
  for (int q = 0; q < n; ++q) {
    const int M = layout.at(q, S::M), R = layout.at(q, S::R), B = layout.at(q, S::B);
    if (k.P_edc > 0) obj.push_back({std::log(2.0 * k.P_edc), {{M, 1.0}, {R, -1.0}}});
    if (k.P_fft > 0) obj.push_back({std::log(5.36 * k.P_fft), {{B, 0.82}, {M, 1.0}}});
    if (k.P_dsp > 0) obj.push_back({std::log(2.0 * k.P_dsp), {{M, 2.0}, {B, kLn2}}});
  }
  // Each unordered pair appears twice in the sum over q != i.
  for (std::size_t p = 0; p < layout.pairs.size(); ++p)
    obj.push_back({std::log(2.0 * inst.penalty_K), {{layout.distance(int(p)), -1.0}}});

  std::vector<LseConstraint> cons;
  const double zeta = derived_zeta(k);
  const double varsigma = derived_varsigma(k);

  for (int q = 0; q < n; ++q) {
    const std::string id = rid(inst, q);
    const int C = layout.at(q, S::C), R = layout.at(q, S::R), P = layout.at(q, S::P),
              M = layout.at(q, S::M), W = layout.at(q, S::Omega), T = layout.at(q, S::T),
              B = layout.at(q, S::B);
    const int spans = rs.span_count(q);

    LseConstraint qos{"qos[" + id + "]", {}};
    qos.terms.push_back({std::log(zeta * k.F * spans),
                         {{R, k.kappa2}, {T, k.kappa4}, {M, 1.0}, {P, -1.0}, {B, kLn2}}});
    for (int i = 0; i < n; ++i) {
      if (i == q || rs.shared_spans(q, i) == 0) continue;
      const int D = layout.distance(layout.pair_index(q, i));
      qos.terms.push_back({std::log(k.kappa1 * varsigma * rs.shared_spans(q, i) / k.F),
                           {{R, k.kappa2},
                            {T, k.kappa4},
                            {layout.at(i, S::P), 2.0},
                            {layout.at(i, S::M), -1.0},
                            {D, -1.0},
                            {layout.at(i, S::B), -kLn2}}});
    }
    cons.push_back(std::move(qos));

    cons.push_back({"spectrum_hi[" + id + "]",
                    {{std::log(0.5 * k.F / bw), {{B, kLn2}}}, {-std::log(bw), {{W, 1.0}}}}});
    cons.push_back({"spectrum_lo[" + id + "]", {{std::log(0.5 * k.F), {{B, kLn2}, {W, -1.0}}}}});

    const double rate = inst.requests[q].rate;
    LseConstraint rc{"rate[" + id + "]", {}};
    rc.terms.push_back({std::log(0.5 * rate / k.F), {{R, -1.0}, {C, -1.0}, {M, -1.0}, {B, -kLn2}}});
    if (k.sigma_cd > 0)
      rc.terms.push_back({std::log(0.5 * k.sigma_cd * spans * rate), {{R, -1.0}, {C, -1.0}, {M, -1.0}}});
    if (k.rho_mc > 0)
      rc.terms.push_back({std::log(0.5 * k.rho_mc * coupling_span_factor(spans, inst.coupling) * rate),
                          {{R, -1.0}, {C, -1.0}, {M, -(1.0 + k.mode_exp)}, {B, -kLn2}}});
    cons.push_back(std::move(rc));

    cons.push_back({"threshold_aux[" + id + "]", {{0.0, {{T, -1.0}}}, {std::log(k.kappa3), {{C, 1.0}, {T, -1.0}}}}});
  }

  std::set<std::pair<int, int>> adjacent;
  for (const auto& order : rs.link_order)
    for (std::size_t j = 1; j < order.size(); ++j) adjacent.emplace(order[j - 1], order[j]);
  for (const auto& [l, r] : adjacent) {
    const int WL = layout.at(l, S::Omega), WR = layout.at(r, S::Omega);
    cons.push_back({"nonoverlap[" + rid(inst, l) + "|" + rid(inst, r) + "]",
                    {{0.0, {{WL, 1.0}, {WR, -1.0}}},
                     {std::log(0.5 * k.F), {{layout.at(l, S::B), kLn2}, {WR, -1.0}}},
                     {std::log(k.G), {{WR, -1.0}}},
                     {std::log(0.5 * k.F), {{layout.at(r, S::B), kLn2}, {WR, -1.0}}}}});
  }

  for (std::size_t p = 0; p < layout.pairs.size(); ++p) {
    const auto [l, r] = layout.pairs[p];
    const int WL = layout.at(l, S::Omega), WR = layout.at(r, S::Omega);
    cons.push_back({"distance[" + rid(inst, l) + "|" + rid(inst, r) + "]",
                    {{0.0, {{layout.distance(int(p)), 1.0}, {WR, -1.0}}}, {0.0, {{WL, 1.0}, {WR, -1.0}}}}});
  }

  out.program = ConvexProgram(std::move(names), std::move(lo), std::move(hi), n * k.P_trb, std::move(obj),
                              std::move(cons));
  return out;
}

Vec initial_point(const ProblemInstance& inst, const VariableLayout& layout) {
  using S = VariableLayout;
  const auto& k = inst.constants;
  const auto& cg = inst.discrete.c;
  const auto& rg = inst.discrete.r;
  const int n = layout.requests;
  Vec x(layout.size());
  const double b0 = 0.5 * (inst.discrete.b_min + inst.discrete.b_max);
  const double m0 = std::min(2, inst.mode_budget());
  const double c0 = cg[cg.size() / 2];
  const double r0 = rg[rg.size() / 2];
  const auto rank = inst.routing.rank();
  const double zeta = derived_zeta(k);
  std::vector<double> omega(n);
  for (int q = 0; q < n; ++q) {
    omega[q] = inst.bandwidth() * (rank[q] + 0.5) / n;
    const double delta = std::exp2(b0) * k.F;
    const double per_mode = 2.0 * osnr_threshold(c0, r0, k) * zeta * inst.routing.span_count(q) * delta;
    const double p = std::clamp(m0 * per_mode, inst.p_min, inst.p_max);
    x(layout.at(q, S::C)) = std::log(c0);
    x(layout.at(q, S::R)) = std::log(r0);
    x(layout.at(q, S::P)) = std::log(p);
    x(layout.at(q, S::M)) = std::log(m0);
    x(layout.at(q, S::Omega)) = std::log(omega[q]);
    x(layout.at(q, S::T)) = std::log1p(k.kappa3 * c0) + 0.5;
    x(layout.at(q, S::B)) = b0;
  }
  for (std::size_t p = 0; p < layout.pairs.size(); ++p) {
    const auto [l, r] = layout.pairs[p];
    x(layout.distance(int(p))) = std::log(0.5 * std::abs(omega[r] - omega[l]));
  }
  return x;
}

FeasibilityResult feasibility_check(std::span<const TransponderConfig> configs, const ProblemInstance& inst,
                                    std::span<const PairDistance> distances) {
  const auto& k = inst.constants;
  const auto& rs = inst.routing;
  const int n = int(inst.size());
  const double bw = inst.bandwidth();
  FeasibilityResult out;
  auto record = [&](std::string label, double violation, double tol = 0.0) {
    if (violation > tol) out.pass = false;
    if (violation > out.worst_violation) {
      out.worst_violation = violation;
      out.worst_label = label;
    }
    out.residuals.push_back({std::move(label), violation});
  };
  if (int(configs.size()) != n) {
    record("configs", 1.0);
    return out;
  }

  auto on_grid = [](const std::vector<double>& grid, double v) {
    return std::any_of(grid.begin(), grid.end(), [&](double g) { return std::abs(g - v) <= 1e-12 * g; });
  };
  for (int q = 0; q < n; ++q) {
    const auto& cfg = configs[q];
    const std::string id = rid(inst, q);
    const bool valid = cfg.m >= 1 && cfg.m <= inst.mode_budget() && cfg.b >= inst.discrete.b_min &&
                       cfg.b <= inst.discrete.b_max && on_grid(inst.discrete.c, cfg.c) &&
                       on_grid(inst.discrete.r, cfg.r) && cfg.p > 0.0;
    record("config[" + id + "]", valid ? -1.0 : 1.0);

    const double delta = cfg.delta(k);
    record("spectrum_lo[" + id + "]", (0.5 * delta - cfg.omega) / bw, 1e-12);
    record("spectrum_hi[" + id + "]", (cfg.omega + 0.5 * delta - bw) / bw, 1e-12);

    const double cap = rate_capacity(cfg, rs.span_count(q), inst.coupling, k);
    record("rate[" + id + "]", inst.requests[q].rate / cap - 1.0, 1e-9);

    double psi = 0.0;
    try {
      psi = osnr(std::size_t(q), configs, rs.span_count, rs.shared_spans, k);
    } catch (const std::domain_error&) {
      psi = 0.0;
    }
    const double theta = osnr_threshold(cfg.c, cfg.r, k);
    // Pass iff psi >= theta (1 - 1e-6).
    record("qos[" + id + "]", 1.0 - psi / (theta * (1.0 - 1e-6)));
  }

  std::set<std::pair<int, int>> adjacent;
  for (const auto& order : rs.link_order)
    for (std::size_t j = 1; j < order.size(); ++j) adjacent.emplace(order[j - 1], order[j]);
  for (const auto& [l, r] : adjacent) {
    const double need = 0.5 * (configs[l].delta(k) + configs[r].delta(k)) + k.G;
    record("nonoverlap[" + rid(inst, l) + "|" + rid(inst, r) + "]",
           (need - (configs[r].omega - configs[l].omega)) / k.G, 1e-9);
  }

  for (const auto& pd : distances) {
    const double gap = std::abs(configs[pd.q].omega - configs[pd.i].omega);
    record("distance[" + rid(inst, pd.q) + "|" + rid(inst, pd.i) + "]",
           std::abs(pd.d - gap) / (1e-3 * k.G) - 1.0);
  }
  return out;
}

std::vector<double> fixed_per_mode_power(const ProblemInstance& inst) {
  const auto& k = inst.constants;
  const auto& rs = inst.routing;
  const int n = int(inst.size());
  const double delta = std::ldexp(k.F, inst.discrete.b_min);
  const double d = delta + k.G;
  const double cap = inst.p_max / inst.mode_budget();
  std::vector<double> out(n);
  for (int q = 0; q < n; ++q) {
    double shared = 0.0;
    for (int i = 0; i < n; ++i)
      if (i != q) shared += rs.shared_spans(q, i);
    if (shared == 0.0) {
      out[q] = cap;
      continue;
    }
    const double ase = derived_zeta(k) * rs.span_count(q) * delta;
    const double eta = k.kappa1 * derived_varsigma(k) * shared / (delta * d);
    out[q] = std::clamp(std::cbrt(ase / (2.0 * eta)), inst.p_min, cap);
  }
  return out;
}

namespace {

struct IntegerVariable {
  int request = 0;
  char kind = '?';
  int index = 0;  // full-space variable
  std::vector<double> values;
  int position = -1;  // fixed position into values, -1 while free

  double to_program(double v) const { return kind == 'b' ? v : std::log(v); }
  double from_program(double x) const { return kind == 'b' ? x : std::exp(x); }
  bool integral() const { return kind == 'b' || kind == 'm'; }

  int nearest(double v) const {
    int best = 0;
    for (int k = 1; k < int(values.size()); ++k)
      if (std::abs(v - values[k]) < std::abs(v - values[best])) best = k;
    return best;
  }
  double ratio(double v, int pos, const SolveOptions& opts) const {
    const double dist = std::abs(v - values[pos]);
    return integral() ? dist / opts.int_precision : dist / values[pos] / opts.grid_precision;
  }
  // b and m step up, c and r step down.
  int conservative_step() const { return integral() ? +1 : -1; }
};

class RoundingLoop {
 public:
  RoundingLoop(TcsProgram& prog, const ProblemInstance& inst, const SolveOptions& opts, PowerMode mode)
      : prog_(prog), inst_(inst), opts_(opts), mode_(mode) {}

  SolveReport run();

 private:
  void fix(IntegerVariable& v, int pos) {
    v.position = pos;
    prog_.program.fix(v.index, v.to_program(v.values[pos]));
  }
  void unfix(IntegerVariable& v) {
    v.position = -1;
    prog_.program.free(v.index);
    if (mode_ == PowerMode::fixed && v.kind == 'm') {
      const int P = prog_.layout.at(v.request, VariableLayout::P);
      prog_.program.free(P);
      prog_.program.tie(P, v.index, power_offset_[v.request]);
    }
  }
  // True if a strictly feasible point exists; updates z_ on success.
  bool try_feasible(const Vec& x, std::vector<std::string>* binding) {
    try {
      z_ = find_strictly_feasible(prog_.program, prog_.program.reduce(x), opts_.barrier, &newton_);
      return true;
    } catch (const InfeasibleError& e) {
      if (binding) *binding = e.binding();
      return false;
    }
  }

  struct Candidate {
    std::vector<int> vars;  // integer-variable indices fixed together
    std::vector<double> relaxed;
    std::vector<int> nearest;
    double ratio = 0.0;  // worst distance / precision over vars
  };

  Candidate make_candidate(std::vector<int> vars, const Vec& x) const {
    Candidate c;
    c.vars = std::move(vars);
    for (int k : c.vars) {
      const auto& v = ints_[k];
      const double relaxed = v.from_program(x(v.index));
      const int pos = v.nearest(relaxed);
      c.relaxed.push_back(relaxed);
      c.nearest.push_back(pos);
      c.ratio = std::max(c.ratio, v.ratio(relaxed, pos, opts_));
    }
    return c;
  }

  void apply(const Candidate& c, const std::vector<int>& pos) {
    for (std::size_t k = 0; k < c.vars.size(); ++k) fix(ints_[c.vars[k]], pos[k]);
  }
  void revert(const Candidate& c) {
    for (int k : c.vars) unfix(ints_[k]);
  }
  void record(SolveReport& report, int epoch, const Candidate& c, const std::vector<int>& pos, bool fallback) const {
    for (std::size_t k = 0; k < c.vars.size(); ++k) {
      const auto& v = ints_[c.vars[k]];
      report.rounding_trace.push_back({epoch, v.request, v.kind, c.relaxed[k], v.values[pos[k]], fallback});
    }
  }

  // Fallback order. A single b or m: the nearest value, then the conservative
  // direction, then outward the other way. A (c, r) pair: the nearest pair,
  // then all others by descending r (lower power), then by closeness of c.
  std::vector<std::vector<int>> alternatives(const Candidate& c) const {
    std::vector<std::vector<int>> out;
    if (c.vars.size() == 1 && ints_[c.vars[0]].integral()) {
      const auto& v = ints_[c.vars[0]];
      const int step = v.conservative_step();
      for (int pos = c.nearest[0]; pos >= 0 && pos < int(v.values.size()); pos += step) out.push_back({pos});
      for (int pos = c.nearest[0] - step; pos >= 0 && pos < int(v.values.size()); pos -= step)
        out.push_back({pos});
      return out;
    }
    std::vector<std::vector<int>> all{{}};
    for (int k : c.vars) {
      std::vector<std::vector<int>> next;
      for (const auto& prefix : all)
        for (int pos = 0; pos < int(ints_[k].values.size()); ++pos) {
          auto e = prefix;
          e.push_back(pos);
          next.push_back(std::move(e));
        }
      all = std::move(next);
    }
    auto key = [&](const std::vector<int>& pos) {
      double r = 1.0, c_dist = 0.0;
      for (std::size_t k = 0; k < c.vars.size(); ++k) {
        const auto& v = ints_[c.vars[k]];
        if (v.kind == 'r') r = v.values[pos[k]];
        if (v.kind == 'c') c_dist = std::abs(std::log(v.values[pos[k]] / c.relaxed[k]));
      }
      return std::make_pair(-r, c_dist);
    };
    std::stable_sort(all.begin(), all.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    out.push_back(c.nearest);
    for (auto& e : all)
      if (e != c.nearest) out.push_back(std::move(e));
    return out;
  }

  // No (c, r) pair fits the request's fixed b and m. Reopen both and walk
  // them in conservative order (m first), retrying the pairs on each.
  bool repair(SolveReport& report, int epoch, const Candidate& pair, const Vec& x,
              std::vector<std::string>* binding) {
    const int q = ints_[pair.vars.front()].request;
    auto& b = ints_[4 * q];
    auto& m = ints_[4 * q + 1];
    const int b0 = b.position, m0 = m.position;
    auto order = [](const IntegerVariable& v, int start) {
      std::vector<int> out;
      for (int pos = start; pos >= 0 && pos < int(v.values.size()); pos += v.conservative_step()) out.push_back(pos);
      for (int pos = start - v.conservative_step(); pos >= 0 && pos < int(v.values.size());
           pos -= v.conservative_step())
        out.push_back(pos);
      return out;
    };
    for (int mp : order(m, m0))
      for (int bp : order(b, b0)) {
        if (mp == m0 && bp == b0) continue;
        unfix(b);
        unfix(m);
        fix(b, bp);
        fix(m, mp);
        if (!try_feasible(x, binding)) continue;
        for (const auto& option : alternatives(pair)) {
          apply(pair, option);
          if (try_feasible(x, binding)) {
            report.rounding_trace.push_back({epoch, q, 'b', b.values[b0], b.values[bp], true});
            report.rounding_trace.push_back({epoch, q, 'm', m.values[m0], m.values[mp], true});
            record(report, epoch, pair, option, true);
            return true;
          }
          revert(pair);
        }
      }
    unfix(b);
    unfix(m);
    fix(b, b0);
    fix(m, m0);
    return false;
  }

  std::vector<IntegerVariable> ints_;
  TcsProgram& prog_;
  const ProblemInstance& inst_;
  const SolveOptions& opts_;
  PowerMode mode_;
  std::vector<double> power_offset_;
  Vec z_;
  int newton_ = 0;
};

SolveReport RoundingLoop::run() {
  using S = VariableLayout;
  const auto start_time = std::chrono::steady_clock::now();
  const auto& layout = prog_.layout;
  auto& program = prog_.program;
  const int n = layout.requests;

  SolveReport report;
  report.power_mode = mode_;

  Vec x = initial_point(inst_, layout);
  if (mode_ == PowerMode::fixed) {
    const auto per_mode = fixed_per_mode_power(inst_);
    power_offset_.resize(n);
    for (int q = 0; q < n; ++q) {
      power_offset_[q] = std::log(per_mode[q]);
      program.tie(layout.at(q, S::P), layout.at(q, S::M), power_offset_[q]);
      x(layout.at(q, S::P)) = x(layout.at(q, S::M)) + power_offset_[q];
    }
  }

  auto& ints = ints_;
  std::vector<double> b_values, m_values;
  for (int b = inst_.discrete.b_min; b <= inst_.discrete.b_max; ++b) b_values.push_back(b);
  for (int m = 1; m <= inst_.mode_budget(); ++m) m_values.push_back(m);
  for (int q = 0; q < n; ++q) {
    ints.push_back({q, 'b', layout.at(q, S::B), b_values});
    ints.push_back({q, 'm', layout.at(q, S::M), m_values});
    ints.push_back({q, 'c', layout.at(q, S::C), inst_.discrete.c});
    ints.push_back({q, 'r', layout.at(q, S::R), inst_.discrete.r});
  }
  for (auto& v : ints)
    if (v.values.size() == 1) fix(v, 0);
  report.integer_variables = int(ints.size());
  const int max_epochs = opts_.max_epochs > 0 ? opts_.max_epochs : report.integer_variables;

  z_ = program.reduce(x);
  BarrierResult res;
  for (;;) {
    res = solve_continuous(program, z_, opts_.barrier);
    newton_ += res.newton_iterations;
    x = program.expand(res.z);
    if (report.epochs == 0) report.relaxed_objective = res.objective;

    // Candidates: each free b or m on its own; a request's free (c, r)
    // jointly once its b and m are fixed.
    std::vector<Candidate> cands;
    bool any_free = false;
    for (int q = 0; q < n; ++q) {
      for (int k : {4 * q, 4 * q + 1})
        if (ints[k].position < 0) {
          any_free = true;
          cands.push_back(make_candidate({k}, x));
        }
      std::vector<int> pair;
      for (int k : {4 * q + 2, 4 * q + 3})
        if (ints[k].position < 0) pair.push_back(k);
      if (!pair.empty()) {
        any_free = true;
        if (ints[4 * q].position >= 0 && ints[4 * q + 1].position >= 0) cands.push_back(make_candidate(pair, x));
      }
    }
    if (!any_free) break;
    if (report.epochs >= max_epochs)
      throw InfeasibleError("epoch limit reached with integer variables still free", {});
    const int epoch = ++report.epochs;

    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) { return a.ratio < b.ratio; });
    std::vector<const Candidate*> accepted;
    for (const auto& c : cands)
      if (c.ratio <= 1.0) accepted.push_back(&c);
    if (accepted.empty()) accepted.push_back(&cands.front());

    for (const auto* c : accepted) apply(*c, c->nearest);
    if (try_feasible(x, nullptr)) {
      for (const auto* c : accepted) record(report, epoch, *c, c->nearest, false);
      continue;
    }

    // Joint fixing failed: fix only the closest candidate, trying its
    // alternatives in order until a strictly feasible point exists.
    for (const auto* c : accepted) revert(*c);
    const Candidate& best = *accepted.front();
    std::vector<std::string> binding;
    bool ok = false;
    for (const auto& option : alternatives(best)) {
      apply(best, option);
      if (try_feasible(x, &binding)) {
        record(report, epoch, best, option, option != best.nearest);
        ok = true;
        break;
      }
      revert(best);
    }
    if (!ok && !ints_[best.vars.front()].integral()) ok = repair(report, epoch, best, x, &binding);
    if (!ok) {
      const auto& v = ints_[best.vars.front()];
      throw InfeasibleError(std::string("rounding ") + v.kind + " of request " + rid(inst_, v.request) +
                                " leaves no feasible point",
                            binding);
    }
  }

  report.kkt_residual = res.kkt_residual;
  report.solution = x;
  report.newton_iterations = newton_;

  auto& cfgs = report.configs;
  cfgs.resize(n);
  for (const auto& v : ints_) {
    auto& cfg = cfgs[v.request];
    const double val = v.values[v.position];
    switch (v.kind) {
      case 'b': cfg.b = int(val); break;
      case 'm': cfg.m = int(val); break;
      case 'c': cfg.c = val; break;
      case 'r': cfg.r = val; break;
    }
  }
  for (int q = 0; q < n; ++q) {
    cfgs[q].p = std::exp(x(layout.at(q, S::P)));
    cfgs[q].omega = std::exp(x(layout.at(q, S::Omega)));
  }
  for (std::size_t p = 0; p < layout.pairs.size(); ++p)
    report.distances.push_back(
        {layout.pairs[p].left, layout.pairs[p].right, std::exp(x(layout.distance(int(p))))});

  if (opts_.polish_pairs) {
    // Power depends on r but not on c; OSNR and rate of q depend on its own
    // (c, r) only. Take the largest r admitting some c, then the smallest c.
    const auto& k = inst_.constants;
    for (int q = 0; q < n; ++q) {
      const double psi = osnr(std::size_t(q), cfgs, inst_.routing.span_count, inst_.routing.shared_spans, k);
      bool done = false;
      for (auto r = inst_.discrete.r.rbegin(); r != inst_.discrete.r.rend() && !done && *r > cfgs[q].r; ++r)
        for (double c : inst_.discrete.c) {
          TransponderConfig trial = cfgs[q];
          trial.c = c;
          trial.r = *r;
          if (rate_capacity(trial, inst_.routing.span_count(q), inst_.coupling, k) >= inst_.requests[q].rate &&
              osnr_threshold(c, *r, k) <= psi) {
            cfgs[q] = trial;
            done = true;
            break;
          }
        }
    }
  }

  for (const auto& cfg : cfgs)
    report.power += transponder_power_breakdown(cfg.m, cfg.b, cfg.r, inst_.constants);
  report.objective_power_W = report.power.total();
  for (const auto& pd : report.distances) report.penalty_value += 2.0 * inst_.penalty_K / pd.d;
  for (Index i = 0; i < program.num_constraints(); ++i)
    report.residuals.push_back({program.constraint_label(i), program.full_constraint(i, x)});
  report.feasibility = feasibility_check(cfgs, inst_, report.distances);
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start_time).count();
  return report;
}

}  // namespace

SolveReport round_and_fix(TcsProgram& prog, const ProblemInstance& inst, const SolveOptions& opts, PowerMode mode) {
  return RoundingLoop(prog, inst, opts, mode).run();
}

SolveReport solve(const ProblemInstance& inst, PowerMode mode, const SolveOptions& opts) {
  auto prog = build_program(inst);
  return round_and_fix(prog, inst, opts, mode);
}

SolveReport solve_tcs(const ProblemInstance& inst, const SolveOptions& opts) {
  return solve(inst, PowerMode::adaptive, opts);
}

SolveReport fixed_power_baseline(const ProblemInstance& inst, const SolveOptions& opts) {
  return solve(inst, PowerMode::fixed, opts);
}

}  // namespace eon
