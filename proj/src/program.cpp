#include "eon/program.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace eon {

namespace {

double affine(const Monomial& m, const Vec& x) {
  double v = m.log_coef;
  for (const auto& [j, a] : m.exps) v += a * x(j);
  return v;
}

double log_sum_exp(std::span<const double> v) {
  const double top = *std::max_element(v.begin(), v.end());
  if (!std::isfinite(top)) return top;
  double s = 0.0;
  for (double x : v) s += std::exp(x - top);
  return top + std::log(s);
}

}  // namespace

ConvexProgram::ConvexProgram(std::vector<std::string> var_names, Vec lower, Vec upper,
                             double objective_constant, std::vector<Monomial> objective_terms,
                             std::vector<LseConstraint> constraints)
    : names_(std::move(var_names)),
      lower_(std::move(lower)),
      upper_(std::move(upper)),
      obj_constant_(objective_constant),
      obj_terms_(std::move(objective_terms)),
      cons_(std::move(constraints)) {
  const auto n = names_.size();
  if (Index(n) != lower_.size() || Index(n) != upper_.size())
    throw std::invalid_argument("bounds size mismatch");
  kind_.assign(n, Kind::free);
  value_.assign(n, 0.0);
  tie_to_.assign(n, -1);
  compile();
}

double ConvexProgram::full_objective(const Vec& x) const {
  double f = obj_constant_;
  for (const auto& m : obj_terms_) f += std::exp(affine(m, x));
  return f;
}

double ConvexProgram::full_constraint(Index i, const Vec& x) const {
  std::vector<double> v;
  v.reserve(cons_[i].terms.size());
  for (const auto& m : cons_[i].terms) v.push_back(affine(m, x));
  return log_sum_exp(v);
}

void ConvexProgram::fix(int j, double value) {
  // Variables tied to j become fixed along with it.
  for (std::size_t k = 0; k < kind_.size(); ++k)
    if (kind_[k] == Kind::tied && tie_to_[k] == j) {
      kind_[k] = Kind::fixed;
      value_[k] += value;
      tie_to_[k] = -1;
    }
  kind_[j] = Kind::fixed;
  value_[j] = value;
  tie_to_[j] = -1;
  compile();
}

void ConvexProgram::tie(int j, int to, double offset) {
  if (j == to || kind_[to] != Kind::free) throw std::logic_error("tie target must be a free variable");
  kind_[j] = Kind::tied;
  value_[j] = offset;
  tie_to_[j] = to;
  compile();
}

void ConvexProgram::free(int j) {
  for (std::size_t k = 0; k < kind_.size(); ++k)
    if (kind_[k] == Kind::tied && tie_to_[k] == j) throw std::logic_error("variable is a tie target");
  kind_[j] = Kind::free;
  value_[j] = 0.0;
  tie_to_[j] = -1;
  compile();
}

Vec ConvexProgram::expand(const Vec& z) const {
  Vec x(num_full_vars());
  for (Index j = 0; j < x.size(); ++j) {
    switch (kind_[j]) {
      case Kind::free: x(j) = z(reduced_[j]); break;
      case Kind::fixed: x(j) = value_[j]; break;
      case Kind::tied: x(j) = z(reduced_[j]) + value_[j]; break;
    }
  }
  return x;
}

Vec ConvexProgram::reduce(const Vec& x) const {
  Vec z(num_vars());
  for (std::size_t k = 0; k < free_.size(); ++k) z(Index(k)) = x(free_[k]);
  return z;
}

ConvexProgram::CompiledTerm ConvexProgram::compile_term(const Monomial& m) const {
  CompiledTerm out;
  out.log_coef = m.log_coef;
  std::map<int, double> merged;
  for (const auto& [j, a] : m.exps) {
    switch (kind_[j]) {
      case Kind::fixed: out.log_coef += a * value_[j]; break;
      case Kind::tied:
        out.log_coef += a * value_[j];
        merged[reduced_[j]] += a;
        break;
      case Kind::free: merged[reduced_[j]] += a; break;
    }
  }
  for (const auto& [k, a] : merged)
    if (a != 0.0) out.exps.emplace_back(k, a);
  return out;
}

void ConvexProgram::compile() {
  const auto n = names_.size();
  free_.clear();
  reduced_.assign(n, -1);
  for (std::size_t j = 0; j < n; ++j)
    if (kind_[j] == Kind::free) {
      reduced_[j] = int(free_.size());
      free_.push_back(int(j));
    }
  for (std::size_t j = 0; j < n; ++j)
    if (kind_[j] == Kind::tied) reduced_[j] = reduced_[tie_to_[j]];

  red_lower_.resize(Index(free_.size()));
  red_upper_.resize(Index(free_.size()));
  for (std::size_t k = 0; k < free_.size(); ++k) {
    red_lower_(Index(k)) = lower_(free_[k]);
    red_upper_(Index(k)) = upper_(free_[k]);
  }
  for (std::size_t j = 0; j < n; ++j)
    if (kind_[j] == Kind::tied) {
      const int k = reduced_[j];
      red_lower_(k) = std::max(red_lower_(k), lower_(Index(j)) - value_[j]);
      red_upper_(k) = std::min(red_upper_(k), upper_(Index(j)) - value_[j]);
    }

  compiled_constant_ = obj_constant_;
  compiled_obj_.clear();
  for (const auto& m : obj_terms_) {
    auto t = compile_term(m);
    if (t.exps.empty())
      compiled_constant_ += std::exp(t.log_coef);
    else
      compiled_obj_.push_back(std::move(t));
  }

  compiled_cons_.clear();
  compiled_cons_.reserve(cons_.size());
  for (const auto& c : cons_) {
    CompiledConstraint cc;
    for (const auto& m : c.terms) cc.terms.push_back(compile_term(m));
    for (const auto& t : cc.terms)
      for (const auto& [k, a] : t.exps) cc.support.push_back(k);
    std::sort(cc.support.begin(), cc.support.end());
    cc.support.erase(std::unique(cc.support.begin(), cc.support.end()), cc.support.end());
    for (auto& t : cc.terms)
      for (auto& [k, a] : t.exps)
        k = int(std::lower_bound(cc.support.begin(), cc.support.end(), k) - cc.support.begin());
    compiled_cons_.push_back(std::move(cc));
  }
}

double ConvexProgram::objective(const Vec& z, Vec* grad) const {
  double f = compiled_constant_;
  if (grad) grad->setZero(num_vars());
  for (const auto& t : compiled_obj_) {
    double v = t.log_coef;
    for (const auto& [k, a] : t.exps) v += a * z(k);
    const double e = std::exp(v);
    f += e;
    if (grad)
      for (const auto& [k, a] : t.exps) (*grad)(k) += a * e;
  }
  return f;
}

void ConvexProgram::objective_hessian(const Vec& z, double scale, Triplets& out) const {
  for (const auto& t : compiled_obj_) {
    double v = t.log_coef;
    for (const auto& [k, a] : t.exps) v += a * z(k);
    const double e = scale * std::exp(v);
    for (const auto& [k1, a1] : t.exps)
      for (const auto& [k2, a2] : t.exps) out.emplace_back(k1, k2, e * a1 * a2);
  }
}

void ConvexProgram::constraint_local(Index i, const Vec& z, LocalDerivatives& out) const {
  const auto& cc = compiled_cons_[i];
  const auto s = Index(cc.support.size());
  std::vector<double> v(cc.terms.size());
  for (std::size_t k = 0; k < cc.terms.size(); ++k) {
    double val = cc.terms[k].log_coef;
    for (const auto& [loc, a] : cc.terms[k].exps) val += a * z(cc.support[loc]);
    v[k] = val;
  }
  out.value = log_sum_exp(v);
  out.support = cc.support;
  out.grad.setZero(s);
  out.hess.setZero(s, s);
  for (std::size_t k = 0; k < cc.terms.size(); ++k) {
    const double w = std::exp(v[k] - out.value);
    for (const auto& [l1, a1] : cc.terms[k].exps) {
      out.grad(l1) += w * a1;
      for (const auto& [l2, a2] : cc.terms[k].exps) out.hess(l1, l2) += w * a1 * a2;
    }
  }
  out.hess.noalias() -= out.grad * out.grad.transpose();
}

double ConvexProgram::constraint(Index i, const Vec& z, Vec* grad) const {
  const auto& cc = compiled_cons_[i];
  if (!grad) {
    std::vector<double> v(cc.terms.size());
    for (std::size_t k = 0; k < cc.terms.size(); ++k) {
      double val = cc.terms[k].log_coef;
      for (const auto& [loc, a] : cc.terms[k].exps) val += a * z(cc.support[loc]);
      v[k] = val;
    }
    return log_sum_exp(v);
  }
  LocalDerivatives d;
  constraint_local(i, z, d);
  grad->setZero(num_vars());
  for (std::size_t l = 0; l < d.support.size(); ++l) (*grad)(d.support[l]) = d.grad(Index(l));
  return d.value;
}

}  // namespace eon
