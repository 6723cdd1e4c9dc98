#pragma once

#include <vector>

#include "vnet/errors.hpp"

namespace vnet {

enum class Relation { LessEq, Equal, GreaterEq };
enum class Objective { Maximize, Minimize };

struct LinearConstraint {
  std::vector<double> coeffs;
  Relation rel = Relation::LessEq;
  double rhs = 0;
};

// A small dense LP. Variables are nonnegative unless `lower_bounds` is
// supplied (one entry per variable; variables then live in [lb, inf)).
struct LinearProgram {
  Objective direction = Objective::Maximize;
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<double> lower_bounds;  // empty -> all zero

  int add_variable(double objective_coeff);
  void add_constraint(std::vector<double> coeffs, Relation rel, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0;
  std::vector<double> x;
  int pivots = 0;
};

// Two-phase dense simplex with Bland's least-index anti-cycling rule, so
// solving the same LP twice is bit-identical. Throws NumericalError when
// the pivot count exceeds 50 * (rows + cols).
LpSolution lp_solve(const LinearProgram& lp);

}  // namespace vnet
