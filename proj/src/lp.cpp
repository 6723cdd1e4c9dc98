#include "vnet/lp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vnet {

namespace {
constexpr double kPivotEps = 1e-9;
constexpr double kFeasEps = 1e-7;
}  // namespace

int LinearProgram::add_variable(double objective_coeff) {
  objective.push_back(objective_coeff);
  for (auto& c : constraints) c.coeffs.push_back(0.0);
  if (!lower_bounds.empty()) lower_bounds.push_back(0.0);
  return static_cast<int>(objective.size()) - 1;
}

void LinearProgram::add_constraint(std::vector<double> coeffs, Relation rel, double rhs) {
  coeffs.resize(objective.size(), 0.0);
  constraints.push_back({std::move(coeffs), rel, rhs});
}

namespace {

// Dense tableau: rows_ holds the constraint rows (rhs in the last column),
// cost_ the reduced-cost row. Basic variable per row in basis_.
class SimplexTableau {
 public:
  SimplexTableau(int rows, int cols) : m_(rows), n_(cols) {
    rows_.assign(m_, std::vector<double>(n_ + 1, 0.0));
    active_.assign(m_, true);
    basis_.assign(m_, -1);
  }

  std::vector<double>& row(int i) { return rows_[i]; }
  int& basis(int i) { return basis_[i]; }
  bool active(int i) const { return active_[i]; }
  void deactivate(int i) { active_[i] = false; }

  // Price out the basic columns of `costs` (one entry per column) and run
  // Bland pivoting to optimality of the minimization. Returns false when
  // the problem is unbounded below.
  bool minimize(const std::vector<double>& costs, const std::vector<bool>& allowed,
                int pivot_cap, int* pivots) {
    cost_.assign(n_ + 1, 0.0);
    std::copy(costs.begin(), costs.end(), cost_.begin());
    for (int i = 0; i < m_; ++i) {
      if (!active_[i]) continue;
      double cb = cost_[basis_[i]];
      if (cb != 0.0) {
        for (int j = 0; j <= n_; ++j) cost_[j] -= cb * rows_[i][j];
      }
    }
    for (;;) {
      int enter = -1;
      for (int j = 0; j < n_; ++j) {
        if (allowed[j] && cost_[j] < -kPivotEps) {
          enter = j;
          break;  // Bland: least index
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best_ratio = 0;
      for (int i = 0; i < m_; ++i) {
        if (!active_[i] || rows_[i][enter] <= kPivotEps) continue;
        double ratio = rows_[i][n_] / rows_[i][enter];
        if (leave < 0) {
          leave = i;
          best_ratio = ratio;
        } else if (ratio < best_ratio - kPivotEps ||
                   (ratio < best_ratio + kPivotEps && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = std::min(best_ratio, ratio);
        }
      }
      if (leave < 0) return false;  // unbounded direction
      pivot(leave, enter);
      if (++*pivots > pivot_cap) {
        throw NumericalError("simplex pivot cap exceeded (" + std::to_string(pivot_cap) + ")");
      }
    }
  }

  void pivot(int r, int c) {
    double p = rows_[r][c];
    for (int j = 0; j <= n_; ++j) rows_[r][j] /= p;
    rows_[r][c] = 1.0;
    for (int i = 0; i < m_; ++i) {
      if (i == r || !active_[i]) continue;
      double f = rows_[i][c];
      if (f == 0.0) continue;
      for (int j = 0; j <= n_; ++j) rows_[i][j] -= f * rows_[r][j];
      rows_[i][c] = 0.0;
    }
    double f = cost_[c];
    if (f != 0.0) {
      for (int j = 0; j <= n_; ++j) cost_[j] -= f * rows_[r][j];
      cost_[c] = 0.0;
    }
    basis_[r] = c;
  }

  double objective_value() const { return -cost_[n_]; }

  int m() const { return m_; }
  int n() const { return n_; }

 private:
  int m_, n_;
  std::vector<std::vector<double>> rows_;
  std::vector<double> cost_;
  std::vector<bool> active_;
  std::vector<int> basis_;
};

}  // namespace

LpSolution lp_solve(const LinearProgram& lp) {
  const int nvars = static_cast<int>(lp.objective.size());
  const int nrows = static_cast<int>(lp.constraints.size());
  for (const auto& c : lp.constraints) {
    if (static_cast<int>(c.coeffs.size()) != nvars) {
      throw ValidationError("lp: constraint dimension mismatch");
    }
  }
  if (!lp.lower_bounds.empty() && static_cast<int>(lp.lower_bounds.size()) != nvars) {
    throw ValidationError("lp: lower bound dimension mismatch");
  }

  // Canonicalize: minimize over shifted nonnegative variables, rhs >= 0.
  std::vector<double> min_obj(lp.objective);
  if (lp.direction == Objective::Maximize) {
    for (double& c : min_obj) c = -c;
  }
  std::vector<double> lb(nvars, 0.0);
  if (!lp.lower_bounds.empty()) lb = lp.lower_bounds;

  struct Row {
    std::vector<double> a;
    Relation rel;
    double rhs;
  };
  std::vector<Row> rows;
  rows.reserve(nrows);
  for (const auto& c : lp.constraints) {
    Row r{c.coeffs, c.rel, c.rhs};
    for (int j = 0; j < nvars; ++j) r.rhs -= r.a[j] * lb[j];
    if (r.rhs < 0) {
      for (double& a : r.a) a = -a;
      r.rhs = -r.rhs;
      if (r.rel == Relation::LessEq) {
        r.rel = Relation::GreaterEq;
      } else if (r.rel == Relation::GreaterEq) {
        r.rel = Relation::LessEq;
      }
    }
    rows.push_back(std::move(r));
  }

  int nslack = 0, nartificial = 0;
  for (const auto& r : rows) {
    if (r.rel != Relation::Equal) ++nslack;
    if (r.rel != Relation::LessEq) ++nartificial;
  }
  const int ncols = nvars + nslack + nartificial;
  SimplexTableau tab(nrows, ncols);

  std::vector<bool> allowed(ncols, true);
  std::vector<double> phase1(ncols, 0.0);
  int slack_at = nvars, art_at = nvars + nslack;
  for (int i = 0; i < nrows; ++i) {
    auto& trow = tab.row(i);
    for (int j = 0; j < nvars; ++j) trow[j] = rows[i].a[j];
    trow[ncols] = rows[i].rhs;
    switch (rows[i].rel) {
      case Relation::LessEq:
        trow[slack_at] = 1.0;
        tab.basis(i) = slack_at++;
        break;
      case Relation::GreaterEq:
        trow[slack_at] = -1.0;
        ++slack_at;
        trow[art_at] = 1.0;
        phase1[art_at] = 1.0;
        tab.basis(i) = art_at++;
        break;
      case Relation::Equal:
        trow[art_at] = 1.0;
        phase1[art_at] = 1.0;
        tab.basis(i) = art_at++;
        break;
    }
  }
  for (int j = nvars + nslack; j < ncols; ++j) allowed[j] = false;  // never re-enter

  const int pivot_cap = 50 * (nrows + ncols);
  int pivots = 0;
  LpSolution sol;

  if (nartificial > 0) {
    // allowed[] excludes artificials from entering; the ones seeded basic
    // leave through the ratio test.
    if (!tab.minimize(phase1, allowed, pivot_cap, &pivots)) {
      throw NumericalError("simplex: phase 1 unbounded");
    }
    if (tab.objective_value() > kFeasEps) {
      sol.status = LpStatus::Infeasible;
      sol.pivots = pivots;
      return sol;
    }
    // Drive leftover zero-level artificials out; rows that admit no pivot
    // are redundant and get dropped.
    for (int i = 0; i < nrows; ++i) {
      if (!tab.active(i) || tab.basis(i) < nvars + nslack) continue;
      int col = -1;
      for (int j = 0; j < nvars + nslack; ++j) {
        if (std::abs(tab.row(i)[j]) > kPivotEps) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(i, col);
      } else {
        tab.deactivate(i);
      }
    }
  }

  std::vector<double> phase2(ncols, 0.0);
  std::copy(min_obj.begin(), min_obj.end(), phase2.begin());
  if (!tab.minimize(phase2, allowed, pivot_cap, &pivots)) {
    sol.status = LpStatus::Unbounded;
    sol.pivots = pivots;
    return sol;
  }

  sol.status = LpStatus::Optimal;
  sol.pivots = pivots;
  sol.x.assign(nvars, 0.0);
  for (int i = 0; i < nrows; ++i) {
    if (tab.active(i) && tab.basis(i) < nvars) {
      sol.x[tab.basis(i)] = tab.row(i)[ncols];
    }
  }
  for (int j = 0; j < nvars; ++j) sol.x[j] += lb[j];
  double value = 0;
  for (int j = 0; j < nvars; ++j) value += lp.objective[j] * sol.x[j];
  sol.value = value;
  return sol;
}

}  // namespace vnet
