#include "eon/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <Eigen/SparseCholesky>

#include "eon/errors.hpp"

namespace eon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// t * objective + log barrier. In phase 1 the objective is the slack
// variable s stored after the program variables and every constraint reads
// g_i(z) - s <= 0.
class BarrierFunction {
 public:
  BarrierFunction(const ConvexProgram& prog, bool phase1) : prog_(prog), phase1_(phase1), n_(prog.num_vars()) {}

  Index dim() const { return phase1_ ? n_ + 1 : n_; }
  Index barrier_terms() const {
    Index count = prog_.num_constraints();
    for (Index k = 0; k < n_; ++k)
      count += std::isfinite(prog_.lower()(k)) + std::isfinite(prog_.upper()(k));
    return count;
  }

  double t = 1.0;

  double value(const Vec& w) const {
    const auto z = w.head(n_);
    const double s = phase1_ ? w(n_) : 0.0;
    double f = 0.0;
    const Vec& lo = prog_.lower();
    const Vec& hi = prog_.upper();
    for (Index k = 0; k < n_; ++k) {
      if (std::isfinite(lo(k))) {
        if (!(z(k) > lo(k))) return kInf;
        f -= std::log(z(k) - lo(k));
      }
      if (std::isfinite(hi(k))) {
        if (!(z(k) < hi(k))) return kInf;
        f -= std::log(hi(k) - z(k));
      }
    }
    const Vec zz = z;
    for (Index i = 0; i < prog_.num_constraints(); ++i) {
      const double h = prog_.constraint(i, zz) - s;
      if (!(h < 0.0)) return kInf;
      f -= std::log(-h);
    }
    return f + t * (phase1_ ? s : prog_.objective(zz));
  }

  void derivatives(const Vec& w, Vec& grad, SparseMat& hess) const {
    const Vec z = w.head(n_);
    const double s = phase1_ ? w(n_) : 0.0;
    grad.setZero(dim());
    Triplets trips;
    if (phase1_) {
      grad(n_) = t;
    } else {
      Vec gf;
      prog_.objective(z, &gf);
      grad.head(n_) = t * gf;
      prog_.objective_hessian(z, t, trips);
    }
    const Vec& lo = prog_.lower();
    const Vec& hi = prog_.upper();
    for (Index k = 0; k < n_; ++k) {
      double diag = 0.0;
      if (std::isfinite(lo(k))) {
        const double d = z(k) - lo(k);
        grad(k) -= 1.0 / d;
        diag += 1.0 / (d * d);
      }
      if (std::isfinite(hi(k))) {
        const double d = hi(k) - z(k);
        grad(k) += 1.0 / d;
        diag += 1.0 / (d * d);
      }
      trips.emplace_back(k, k, diag);
    }
    if (phase1_) trips.emplace_back(n_, n_, 0.0);

    LocalDerivatives ld;
    for (Index i = 0; i < prog_.num_constraints(); ++i) {
      prog_.constraint_local(i, z, ld);
      const double h = ld.value - s;
      const double inv = -1.0 / h;  // 1 / (-h) > 0
      const auto sz = Index(ld.support.size());
      for (Index a = 0; a < sz; ++a) {
        grad(ld.support[a]) += inv * ld.grad(a);
        for (Index b = 0; b < sz; ++b)
          trips.emplace_back(ld.support[a], ld.support[b],
                             inv * ld.hess(a, b) + inv * inv * ld.grad(a) * ld.grad(b));
      }
      if (phase1_) {
        // d h / d s = -1
        grad(n_) -= inv;
        for (Index a = 0; a < sz; ++a) {
          const double v = -inv * inv * ld.grad(a);
          trips.emplace_back(ld.support[a], n_, v);
          trips.emplace_back(n_, ld.support[a], v);
        }
        trips.emplace_back(n_, n_, inv * inv);
      }
    }
    hess.resize(dim(), dim());
    hess.setFromTriplets(trips.begin(), trips.end());
  }

 private:
  const ConvexProgram& prog_;
  bool phase1_;
  Index n_;
};

Vec newton_direction(const SparseMat& hess, const Vec& grad) {
  Eigen::SimplicialLDLT<SparseMat> ldlt;
  ldlt.compute(hess);
  Vec dx;
  if (ldlt.info() == Eigen::Success) {
    dx = ldlt.solve(-grad);
    if (ldlt.info() == Eigen::Success && dx.allFinite() && grad.dot(dx) < 0.0) return dx;
  }
  // Regularize until the factorization succeeds.
  double scale = 0.0;
  for (Index k = 0; k < hess.outerSize(); ++k)
    for (SparseMat::InnerIterator it(hess, k); it; ++it)
      if (it.row() == it.col()) scale = std::max(scale, std::abs(it.value()));
  SparseMat id(hess.rows(), hess.cols());
  id.setIdentity();
  for (double delta = 1e-12 * std::max(scale, 1.0); delta < 1e12 * std::max(scale, 1.0); delta *= 100.0) {
    SparseMat reg = hess + delta * id;
    ldlt.compute(reg);
    if (ldlt.info() != Eigen::Success) continue;
    dx = ldlt.solve(-grad);
    if (dx.allFinite() && grad.dot(dx) < 0.0) return dx;
  }
  return -grad;
}

// Damped Newton minimization of the barrier function from a strictly
// feasible w. `early_stop` is checked after every accepted step.
bool center(const BarrierFunction& fn, Vec& w, const BarrierOptions& opts, int& iterations,
            const std::function<bool(const Vec&)>& early_stop = {}) {
  Vec grad;
  SparseMat hess;
  double fw = fn.value(w);
  for (int it = 0; it < opts.max_newton; ++it) {
    fn.derivatives(w, grad, hess);
    const Vec dx = newton_direction(hess, grad);
    const double slope = grad.dot(dx);
    const double decrement = -slope;
    if (decrement / 2.0 <= opts.newton_tol) return true;
    ++iterations;

    double step = 1.0;
    Vec next = w + step * dx;
    double fn_next = fn.value(next);
    // Within the quadratic-convergence region, rounding in F (which carries
    // t * f) can hide the Armijo decrease; accept any feasible full step.
    const bool quadratic_region = decrement < 1e-6 * std::max(1.0, std::abs(fw) * 1e-10);
    while (!(std::isfinite(fn_next) && (fn_next <= fw + 0.01 * step * slope ||
                                        (quadratic_region && step == 1.0)))) {
      step *= 0.5;
      if (step < 1e-16) return decrement < 1e-6;
      next = w + step * dx;
      fn_next = fn.value(next);
    }
    w = std::move(next);
    fw = fn_next;
    if (early_stop && early_stop(w)) return true;
  }
  return false;
}

double max_constraint(const ConvexProgram& prog, const Vec& z) {
  double worst = -kInf;
  for (Index i = 0; i < prog.num_constraints(); ++i) worst = std::max(worst, prog.constraint(i, z));
  return worst;
}

std::vector<std::string> most_violated(const ConvexProgram& prog, const Vec& z, std::size_t count) {
  std::vector<std::pair<double, Index>> v;
  for (Index i = 0; i < prog.num_constraints(); ++i) v.emplace_back(prog.constraint(i, z), i);
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::string> out;
  for (std::size_t k = 0; k < v.size() && k < count && v[k].first >= 0.0; ++k)
    out.push_back(prog.constraint_label(v[k].second) + " (" + std::to_string(v[k].first) + ")");
  return out;
}

}  // namespace

Vec interior_point(const SmoothProgram& prog, const Vec& z, double margin) {
  Vec out = z;
  for (Index k = 0; k < z.size(); ++k) {
    const double lo = prog.lower()(k);
    const double hi = prog.upper()(k);
    if (std::isfinite(lo) && std::isfinite(hi)) {
      const double pad = margin * (hi - lo);
      out(k) = std::clamp(z(k), lo + pad, hi - pad);
      if (!(hi > lo)) out(k) = 0.5 * (lo + hi);
    } else if (std::isfinite(lo)) {
      out(k) = std::max(z(k), lo + margin * std::max(1.0, std::abs(lo)));
    } else if (std::isfinite(hi)) {
      out(k) = std::min(z(k), hi - margin * std::max(1.0, std::abs(hi)));
    }
  }
  return out;
}

Vec find_strictly_feasible(const ConvexProgram& prog, const Vec& start, const BarrierOptions& opts,
                           int* newton_iterations) {
  const Index n = prog.num_vars();
  for (Index k = 0; k < n; ++k)
    if (!(prog.upper()(k) > prog.lower()(k)))
      throw InfeasibleError("empty variable box", {"bounds[" + std::to_string(k) + "]"});
  Vec z = interior_point(prog, start, opts.interior_margin);
  const double worst = max_constraint(prog, z);
  if (prog.num_constraints() == 0 || worst < -opts.phase1_target) return z;

  BarrierFunction fn(prog, true);
  Vec w(n + 1);
  w.head(n) = z;
  w(n) = std::max(worst, 0.0) + 1.0;
  fn.t = opts.t0;
  int iterations = 0;
  Vec best = z;
  double best_worst = worst;
  auto early = [&](const Vec& cur) {
    if (cur(n) >= -opts.phase1_target) return false;
    const Vec zc = cur.head(n);
    const double wc = max_constraint(prog, zc);
    if (wc < best_worst) {
      best_worst = wc;
      best = zc;
    }
    return wc < -opts.phase1_target;
  };
  for (;;) {
    center(fn, w, opts, iterations, early);
    const Vec zc = w.head(n);
    const double wc = max_constraint(prog, zc);
    if (wc < best_worst) {
      best_worst = wc;
      best = zc;
    }
    if (newton_iterations) *newton_iterations += iterations;
    iterations = 0;
    if (best_worst < -opts.phase1_target) return best;
    // Centered: the optimal slack is at least s - terms / t.
    if (w(n) - double(fn.barrier_terms()) / fn.t > 0.0) break;
    if (1.0 / fn.t <= opts.gap_tol) break;
    fn.t *= opts.mu;
  }
  if (best_worst < 0.0) return best;
  throw InfeasibleError("no strictly feasible point (phase-1 optimum " + std::to_string(best_worst) + ")",
                        most_violated(prog, best, 5));
}

BarrierResult solve_continuous(const ConvexProgram& prog, const Vec& start, const BarrierOptions& opts) {
  BarrierResult res;
  Vec z = find_strictly_feasible(prog, start, opts, &res.newton_iterations);
  BarrierFunction fn(prog, false);
  const double terms = double(fn.barrier_terms());
  fn.t = opts.t0;
  for (;;) {
    center(fn, z, opts, res.newton_iterations);
    if (terms == 0.0 || terms / fn.t <= opts.gap_tol * terms) break;
    fn.t *= opts.mu;
  }
  res.z = z;
  res.t = fn.t;
  res.objective = prog.objective(z);

  Vec gf;
  prog.objective(z, &gf);
  Vec grad;
  SparseMat hess;
  fn.derivatives(z, grad, hess);
  const double scale = std::max(1.0, gf.size() ? gf.cwiseAbs().maxCoeff() : 0.0);
  res.kkt_residual = z.size() ? (grad / fn.t).cwiseAbs().maxCoeff() / scale : 0.0;
  const double worst = max_constraint(prog, z);
  res.feasibility_residual = std::max(0.0, worst);
  res.min_slack = prog.num_constraints() ? -worst : kInf;
  return res;
}

}  // namespace eon
