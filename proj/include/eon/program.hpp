#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eon/linalg.hpp"

namespace eon {

/// Smooth inequality-constrained program over a box:
///   minimize f(z)  subject to  g_i(z) <= 0,  lower <= z <= upper.
/// This is the surface the numerical checks (finite differences, midpoint
/// convexity) operate on.
class SmoothProgram {
 public:
  virtual ~SmoothProgram() = default;

  virtual Index num_vars() const = 0;
  virtual Index num_constraints() const = 0;
  virtual const Vec& lower() const = 0;
  virtual const Vec& upper() const = 0;

  virtual double objective(const Vec& z, Vec* grad = nullptr) const = 0;
  virtual double constraint(Index i, const Vec& z, Vec* grad = nullptr) const = 0;

  virtual std::string constraint_label(Index i) const { return "g" + std::to_string(i); }
};

/// exp(log_coef + sum_j a_j x_j) over full-space variable indices j.
struct Monomial {
  double log_coef = 0.0;
  std::vector<std::pair<int, double>> exps;
};

/// log(sum_k exp(monomial_k)) <= 0.
struct LseConstraint {
  std::string label;
  std::vector<Monomial> terms;
};

/// Second-order information of one constraint restricted to its support.
struct LocalDerivatives {
  double value = 0.0;
  std::span<const int> support;  // reduced indices
  Vec grad;                      // d value / d z[support]
  Mat hess;
};

/// A geometric program after the exponential change of variables:
/// objective = constant + sum of monomials (convex), every constraint a
/// log-sum-exp of affine forms (convex).
///
/// Full-space variables may be fixed to a value or tied to another variable
/// with an offset (x_j = x_k + offset). The SmoothProgram interface exposes
/// the reduced space of the remaining free variables.
class ConvexProgram : public SmoothProgram {
 public:
  ConvexProgram() = default;
  ConvexProgram(std::vector<std::string> var_names, Vec lower, Vec upper, double objective_constant,
                std::vector<Monomial> objective_terms, std::vector<LseConstraint> constraints);

  // Full-space description.
  Index num_full_vars() const { return Index(names_.size()); }
  const std::string& var_name(int j) const { return names_[j]; }
  const Vec& full_lower() const { return lower_; }
  const Vec& full_upper() const { return upper_; }
  double objective_constant() const { return obj_constant_; }
  const std::vector<Monomial>& objective_terms() const { return obj_terms_; }
  const std::vector<LseConstraint>& constraints() const { return cons_; }

  double full_objective(const Vec& x) const;
  double full_constraint(Index i, const Vec& x) const;

  // Variable map.
  void fix(int j, double value);
  void tie(int j, int to, double offset);
  void free(int j);
  bool is_free(int j) const { return kind_[j] == Kind::free; }
  bool is_fixed(int j) const { return kind_[j] == Kind::fixed; }
  double fixed_value(int j) const { return value_[j]; }
  int reduced_index(int j) const { return reduced_[j]; }  // -1 if fixed

  Vec expand(const Vec& z) const;  // reduced -> full
  Vec reduce(const Vec& x) const;  // full -> reduced (free coordinates)

  // SmoothProgram over reduced variables.
  Index num_vars() const override { return Index(free_.size()); }
  Index num_constraints() const override { return Index(cons_.size()); }
  const Vec& lower() const override { return red_lower_; }
  const Vec& upper() const override { return red_upper_; }
  double objective(const Vec& z, Vec* grad = nullptr) const override;
  double constraint(Index i, const Vec& z, Vec* grad = nullptr) const override;
  std::string constraint_label(Index i) const override { return cons_[i].label; }

  /// Objective Hessian entries, scaled, appended as triplets.
  void objective_hessian(const Vec& z, double scale, Triplets& out) const;
  void constraint_local(Index i, const Vec& z, LocalDerivatives& out) const;

 private:
  enum class Kind { free, fixed, tied };

  struct CompiledTerm {
    double log_coef = 0.0;
    std::vector<std::pair<int, double>> exps;  // local (support) or reduced indices
  };
  struct CompiledConstraint {
    std::vector<int> support;
    std::vector<CompiledTerm> terms;  // exps use local indices into support
  };

  void compile();
  CompiledTerm compile_term(const Monomial& m) const;

  std::vector<std::string> names_;
  Vec lower_, upper_;
  double obj_constant_ = 0.0;
  std::vector<Monomial> obj_terms_;
  std::vector<LseConstraint> cons_;

  std::vector<Kind> kind_;
  std::vector<double> value_;  // fixed value or tie offset
  std::vector<int> tie_to_;
  std::vector<int> reduced_;   // full -> reduced index (tied vars share their target's)
  std::vector<int> free_;      // reduced -> full index

  Vec red_lower_, red_upper_;
  double compiled_constant_ = 0.0;
  std::vector<CompiledTerm> compiled_obj_;  // reduced indices
  std::vector<CompiledConstraint> compiled_cons_;
};

}  // namespace eon
