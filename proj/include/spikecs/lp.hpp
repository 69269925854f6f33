#pragma once

#include "spikecs/types.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <vector>

namespace spikecs {

using Rational = boost::multiprecision::cpp_rational;

/// Equality-constrained LP with per-variable bounds:
///   min objective . x   s.t.  eq_lhs x = eq_rhs,  lower <= x <= upper.
/// Bounds may be -inf / +inf.
struct LPInstance {
  Vector objective;
  Matrix eq_lhs;
  Vector eq_rhs;
  Vector lower;
  Vector upper;

  Index num_vars() const { return objective.size(); }
  Index num_rows() const { return eq_rhs.size(); }

  /// All-free-variable instance with the given objective and constraints.
  static LPInstance make(Matrix lhs, Vector rhs, Vector obj);

  void check_well_formed() const;  // throws std::invalid_argument
};

enum class LPStatus { optimal, infeasible, unbounded };

struct LPTolerances {
  double feasibility = 1e-9;
  double optimality = 1e-9;
  int max_iter_factor = 50;  // iteration cap = factor * (n + k)
};

struct LPResult {
  LPStatus status = LPStatus::infeasible;
  double value = 0.0;
  Vector point;
  /// A nonbasic variable with zero reduced cost exists at the optimum,
  /// i.e. the optimal point may not be unique.
  bool dual_degenerate = false;
  long iterations = 0;
};

/// Deterministic primal simplex (Bland's smallest-index rule, bounded
/// variables, two phases).  Identical instances give bit-identical results.
LPResult solve(const LPInstance& inst, const LPTolerances& tol = {});

struct ExactLPResult {
  LPStatus status = LPStatus::infeasible;
  Rational value = 0;
  std::vector<Rational> point;
  bool dual_degenerate = false;
  long iterations = 0;
};

/// Exact-rational solve for oracle duties (boundary cases where an optimum
/// sits exactly at a threshold).  Instance entries are converted from double
/// to rationals exactly.  Refuses instances with more than 64 variables.
ExactLPResult solve_exact(const LPInstance& inst);

}  // namespace spikecs
