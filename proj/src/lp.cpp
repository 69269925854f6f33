#include "spikecs/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace spikecs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class Scalar>
struct ScalarPolicy;

template <>
struct ScalarPolicy<double> {
  double opt_tol, feas_tol;
  static constexpr double pivot_tol = 1e-11;
  static double from_double(double v) { return v; }
  bool is_zero_rc(double r) const { return std::abs(r) <= opt_tol; }
};

template <>
struct ScalarPolicy<Rational> {
  double opt_tol = 0, feas_tol = 0;
  static constexpr double pivot_tol = 0;
  static Rational from_double(double v) { return Rational(v); }
  bool is_zero_rc(const Rational& r) const { return r == 0; }
};

enum class VarState : unsigned char { Basic, AtLower, AtUpper };

// Internal canonical form: min c.x + c0, A x = b, 0 <= x_j (<= ub_j).
// Free variables are split into a difference of two nonnegative columns;
// finite lower bounds are shifted out; upper-bounded-only variables are
// mirrored.  `back` recovers the original variables.
template <class Scalar>
struct Canonical {
  int n = 0, k = 0;
  std::vector<Scalar> c;
  std::vector<std::vector<Scalar>> rows;  // k x n
  std::vector<Scalar> b;
  std::vector<bool> has_ub;
  std::vector<Scalar> ub;
  Scalar c0{};
  struct BackMap {
    int col = -1;
    int col_neg = -1;  // second column of a split pair, else -1
    int sign = 1;
    Scalar offset{};
  };
  std::vector<BackMap> back;
  std::vector<int> partner;  // split-pair partner column, else -1

  bool trivially_infeasible = false;
};

template <class Scalar>
Canonical<Scalar> canonicalize(const LPInstance& inst) {
  const int n0 = static_cast<int>(inst.num_vars());
  const int k = static_cast<int>(inst.num_rows());
  Canonical<Scalar> cf;
  cf.k = k;
  cf.back.resize(n0);
  cf.b.resize(k);
  for (int i = 0; i < k; ++i) cf.b[i] = ScalarPolicy<Scalar>::from_double(inst.eq_rhs[i]);

  std::vector<std::vector<Scalar>> cols;  // canonical columns, k entries each
  auto orig_col = [&](int j) {
    std::vector<Scalar> col(k);
    for (int i = 0; i < k; ++i) col[i] = ScalarPolicy<Scalar>::from_double(inst.eq_lhs(i, j));
    return col;
  };

  for (int j = 0; j < n0; ++j) {
    const double lo = inst.lower[j];
    const double hi = inst.upper[j];
    const double cj = inst.objective[j];
    auto col = orig_col(j);
    auto& bm = cf.back[j];
    if (lo > hi) {
      cf.trivially_infeasible = true;
      continue;
    }
    if (lo > -kInf) {
      // x = lo + x', 0 <= x' (<= hi - lo)
      bm.col = static_cast<int>(cols.size());
      bm.sign = 1;
      bm.offset = ScalarPolicy<Scalar>::from_double(lo);
      const Scalar off = bm.offset;
      for (int i = 0; i < k; ++i) cf.b[i] -= col[i] * off;
      cf.c0 += ScalarPolicy<Scalar>::from_double(cj) * off;
      cols.push_back(std::move(col));
      cf.c.push_back(ScalarPolicy<Scalar>::from_double(cj));
      cf.has_ub.push_back(hi < kInf);
      cf.ub.push_back(hi < kInf ? ScalarPolicy<Scalar>::from_double(hi) - bm.offset
                                : Scalar{});
      cf.partner.push_back(-1);
    } else if (hi < kInf) {
      // x = hi - x', 0 <= x'
      bm.col = static_cast<int>(cols.size());
      bm.sign = -1;
      bm.offset = ScalarPolicy<Scalar>::from_double(hi);
      const Scalar off = bm.offset;
      for (int i = 0; i < k; ++i) cf.b[i] -= col[i] * off;
      cf.c0 += ScalarPolicy<Scalar>::from_double(cj) * off;
      std::vector<Scalar> neg(k);
      for (int i = 0; i < k; ++i) neg[i] = -col[i];
      cols.push_back(std::move(neg));
      cf.c.push_back(ScalarPolicy<Scalar>::from_double(-cj));
      cf.has_ub.push_back(false);
      cf.ub.push_back(Scalar{});
      cf.partner.push_back(-1);
    } else {
      // free: x = x+ - x-
      const int jp = static_cast<int>(cols.size());
      bm.col = jp;
      bm.col_neg = jp + 1;
      bm.sign = 1;
      bm.offset = Scalar{};
      std::vector<Scalar> neg(k);
      for (int i = 0; i < k; ++i) neg[i] = -col[i];
      cols.push_back(std::move(col));
      cols.push_back(std::move(neg));
      cf.c.push_back(ScalarPolicy<Scalar>::from_double(cj));
      cf.c.push_back(ScalarPolicy<Scalar>::from_double(-cj));
      cf.has_ub.push_back(false);
      cf.has_ub.push_back(false);
      cf.ub.push_back(Scalar{});
      cf.ub.push_back(Scalar{});
      cf.partner.push_back(jp + 1);
      cf.partner.push_back(jp);
    }
  }

  cf.n = static_cast<int>(cols.size());
  cf.rows.assign(k, std::vector<Scalar>(cf.n, Scalar{}));
  for (int j = 0; j < cf.n; ++j)
    for (int i = 0; i < k; ++i) cf.rows[i][j] = cols[j][i];
  return cf;
}

template <class Scalar>
struct SimplexOutcome {
  LPStatus status = LPStatus::optimal;
  std::vector<Scalar> x;
  Scalar value{};
  bool dual_degenerate = false;
  long iterations = 0;
};

// Bounded-variable primal simplex on a dense tableau.  Entering variable by
// Bland's smallest-index rule; leaving variable by minimum ratio with
// smallest-variable-index tie break.  Deterministic by construction.
template <class Scalar>
class BoundedSimplex {
 public:
  BoundedSimplex(Canonical<Scalar> cf, const ScalarPolicy<Scalar>& pol, long max_iter)
      : cf_(std::move(cf)), pol_(pol), max_iter_(max_iter) {
    n_total_ = cf_.n + cf_.k;  // artificials appended after the real columns
    T_.assign(cf_.k, std::vector<Scalar>(n_total_, Scalar{}));
    x_.assign(n_total_, Scalar{});
    state_.assign(n_total_, VarState::AtLower);
    has_ub_ = cf_.has_ub;
    ub_ = cf_.ub;
    has_ub_.resize(n_total_, false);
    ub_.resize(n_total_, Scalar{});
    basis_.resize(cf_.k);

    // Start with every real variable at its lower bound (0); the artificial
    // for row i carries |b_i| and the tableau is sign(b_i) * row_i.
    for (int i = 0; i < cf_.k; ++i) {
      const bool flip = cf_.b[i] < 0;
      for (int j = 0; j < cf_.n; ++j) T_[i][j] = flip ? -cf_.rows[i][j] : cf_.rows[i][j];
      T_[i][cf_.n + i] = Scalar(1);
      const int art = cf_.n + i;
      basis_[i] = art;
      state_[art] = VarState::Basic;
      x_[art] = flip ? -cf_.b[i] : cf_.b[i];
    }
  }

  SimplexOutcome<Scalar> run() {
    SimplexOutcome<Scalar> out;

    // Phase 1: drive the artificial variables to zero.
    std::vector<Scalar> phase1_cost(n_total_, Scalar{});
    for (int i = 0; i < cf_.k; ++i) phase1_cost[cf_.n + i] = Scalar(1);
    const LPStatus ph1 = iterate(phase1_cost, out.iterations);
    if (ph1 != LPStatus::optimal) throw SolverFailure("phase 1 did not terminate cleanly");
    Scalar infeas{};
    for (int i = 0; i < cf_.k; ++i) infeas += x_[cf_.n + i];
    if (!(infeas <= ScalarPolicy<Scalar>::from_double(pol_.feas_tol * feas_scale()))) {
      out.status = LPStatus::infeasible;
      return out;
    }

    // Phase 2: artificials are pinned at zero and never re-enter.
    std::vector<Scalar> cost(n_total_, Scalar{});
    for (int j = 0; j < cf_.n; ++j) cost[j] = cf_.c[j];
    for (int i = 0; i < cf_.k; ++i) {
      const int art = cf_.n + i;
      has_ub_[art] = true;
      ub_[art] = Scalar{};
    }
    out.status = iterate(cost, out.iterations);
    if (out.status == LPStatus::optimal) {
      out.value = cf_.c0;
      for (int j = 0; j < cf_.n; ++j) out.value += cf_.c[j] * x_[j];
      out.dual_degenerate = scan_degenerate(cost);
    }
    out.x.assign(x_.begin(), x_.begin() + cf_.n);
    return out;
  }

 private:
  double feas_scale() const {
    if constexpr (std::is_same_v<Scalar, Rational>) {
      return 1.0;
    } else {
      double s = 1.0;
      for (const auto& bi : cf_.b) s = std::max(s, std::abs(bi));
      return s;
    }
  }

  Scalar reduced_cost(const std::vector<Scalar>& cost, int j) const {
    Scalar r = cost[j];
    for (int i = 0; i < cf_.k; ++i) {
      const Scalar& t = T_[i][j];
      if (!(t == Scalar{})) r -= cost[basis_[i]] * t;
    }
    return r;
  }

  bool is_fixed(int j) const { return has_ub_[j] && ub_[j] == Scalar{}; }

  LPStatus iterate(const std::vector<Scalar>& cost, long& iterations) {
    const Scalar opt_tol = ScalarPolicy<Scalar>::from_double(pol_.opt_tol);
    const Scalar pivot_tol = ScalarPolicy<Scalar>::from_double(ScalarPolicy<Scalar>::pivot_tol);
    while (true) {
      if (iterations++ > max_iter_) throw SolverFailure("simplex iteration cap exceeded");

      // Entering variable: smallest index with a favorable reduced cost.
      int enter = -1;
      int dir = +1;
      for (int j = 0; j < n_total_; ++j) {
        if (state_[j] == VarState::Basic || is_fixed(j)) continue;
        const Scalar r = reduced_cost(cost, j);
        if (state_[j] == VarState::AtLower && r < -opt_tol) {
          enter = j;
          dir = +1;
          break;
        }
        if (state_[j] == VarState::AtUpper && r > opt_tol) {
          enter = j;
          dir = -1;
          break;
        }
      }
      if (enter < 0) return LPStatus::optimal;

      // Ratio test: first bound hit as x_enter moves by dir * t, t >= 0.
      bool bounded = false;
      Scalar t_best{};
      int leave_row = -1;        // row index, or -1 for the entering bound flip
      bool leave_to_upper = false;
      int leave_var = -1;
      if (has_ub_[enter]) {
        bounded = true;
        t_best = ub_[enter];
        leave_var = enter;
      }
      for (int i = 0; i < cf_.k; ++i) {
        const Scalar& y = T_[i][enter];
        Scalar ay = y < Scalar{} ? -y : y;
        if (!(ay > pivot_tol)) continue;
        const Scalar rate = dir > 0 ? Scalar{} - y : y;  // d x_basis[i] / d t
        Scalar ti{};
        bool to_upper = false;
        if (rate > Scalar{}) {
          if (!has_ub_[basis_[i]]) continue;
          ti = (ub_[basis_[i]] - x_[basis_[i]]) / rate;
          to_upper = true;
        } else {
          ti = x_[basis_[i]] / (Scalar{} - rate);
        }
        if (ti < Scalar{}) ti = Scalar{};  // numerical guard
        if (!bounded || ti < t_best ||
            (ti == t_best && leave_row >= 0 && basis_[i] < leave_var)) {
          bounded = true;
          t_best = ti;
          leave_row = i;
          leave_var = basis_[i];
          leave_to_upper = to_upper;
        }
      }
      if (!bounded) return LPStatus::unbounded;

      // Move.
      if (dir > 0)
        x_[enter] += t_best;
      else
        x_[enter] -= t_best;
      for (int i = 0; i < cf_.k; ++i) {
        const Scalar& y = T_[i][enter];
        if (y == Scalar{}) continue;
        if (dir > 0)
          x_[basis_[i]] -= y * t_best;
        else
          x_[basis_[i]] += y * t_best;
      }

      if (leave_row < 0) {
        // Entering variable flipped to its opposite bound.
        state_[enter] = dir > 0 ? VarState::AtUpper : VarState::AtLower;
        x_[enter] = dir > 0 ? ub_[enter] : Scalar{};
        continue;
      }

      // Pivot: basis_[leave_row] leaves exactly at a bound.
      const int out_var = basis_[leave_row];
      x_[out_var] = leave_to_upper ? ub_[out_var] : Scalar{};
      state_[out_var] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
      state_[enter] = VarState::Basic;
      basis_[leave_row] = enter;

      auto& prow = T_[leave_row];
      const Scalar piv = prow[enter];
      for (auto& v : prow) v /= piv;
      for (int i = 0; i < cf_.k; ++i) {
        if (i == leave_row) continue;
        const Scalar f = T_[i][enter];
        if (f == Scalar{}) continue;
        auto& row = T_[i];
        for (int j = 0; j < n_total_; ++j)
          if (!(prow[j] == Scalar{})) row[j] -= f * prow[j];
      }
    }
  }

  // Zero reduced cost on a movable nonbasic variable at the optimum.  The
  // second column of a free-variable split always has zero reduced cost when
  // its partner is basic; that direction keeps the original point unchanged,
  // so it is skipped.
  bool scan_degenerate(const std::vector<Scalar>& cost) const {
    for (int j = 0; j < n_total_; ++j) {
      if (state_[j] == VarState::Basic || is_fixed(j)) continue;
      if (j < cf_.n && cf_.partner[j] >= 0 && state_[cf_.partner[j]] == VarState::Basic)
        continue;
      if (pol_.is_zero_rc(reduced_cost(cost, j))) return true;
    }
    return false;
  }

  Canonical<Scalar> cf_;
  ScalarPolicy<Scalar> pol_;
  long max_iter_;
  int n_total_ = 0;
  std::vector<std::vector<Scalar>> T_;
  std::vector<Scalar> x_;
  std::vector<bool> has_ub_;
  std::vector<Scalar> ub_;
  std::vector<VarState> state_;
  std::vector<int> basis_;
};

template <class Scalar>
SimplexOutcome<Scalar> solve_canonical(const LPInstance& inst, const ScalarPolicy<Scalar>& pol,
                                       int max_iter_factor, std::vector<Scalar>* orig_point) {
  auto cf = canonicalize<Scalar>(inst);
  SimplexOutcome<Scalar> out;
  if (cf.trivially_infeasible) {
    out.status = LPStatus::infeasible;
    return out;
  }
  const long cap = static_cast<long>(max_iter_factor) * (cf.n + 2L * cf.k);
  BoundedSimplex<Scalar> simplex(cf, pol, cap);
  out = simplex.run();
  if (orig_point && out.status == LPStatus::optimal) {
    orig_point->resize(inst.num_vars());
    for (Index j = 0; j < inst.num_vars(); ++j) {
      const auto& bm = cf.back[j];
      Scalar v = bm.offset;
      if (bm.col >= 0) {
        if (bm.sign > 0)
          v += out.x[bm.col];
        else
          v -= out.x[bm.col];
      }
      if (bm.col_neg >= 0) v -= out.x[bm.col_neg];
      (*orig_point)[j] = v;
    }
  }
  return out;
}

}  // namespace

LPInstance LPInstance::make(Matrix lhs, Vector rhs, Vector obj) {
  LPInstance inst;
  const Index n = obj.size();
  inst.objective = std::move(obj);
  inst.eq_lhs = std::move(lhs);
  inst.eq_rhs = std::move(rhs);
  inst.lower = Vector::Constant(n, -kInf);
  inst.upper = Vector::Constant(n, kInf);
  return inst;
}

void LPInstance::check_well_formed() const {
  const Index n = num_vars();
  const Index k = num_rows();
  if (eq_lhs.rows() != k || eq_lhs.cols() != n)
    throw std::invalid_argument("LPInstance: constraint shape mismatch");
  if (lower.size() != n || upper.size() != n)
    throw std::invalid_argument("LPInstance: bound size mismatch");
  auto finite_ok = [](double v) { return !std::isnan(v); };
  for (Index j = 0; j < n; ++j)
    if (!finite_ok(objective[j]) || !finite_ok(lower[j]) || !finite_ok(upper[j]) ||
        !std::isfinite(objective[j]))
      throw std::invalid_argument("LPInstance: non-finite objective or NaN bound");
  for (Index i = 0; i < k; ++i) {
    if (!std::isfinite(eq_rhs[i])) throw std::invalid_argument("LPInstance: non-finite rhs");
    for (Index j = 0; j < n; ++j)
      if (!std::isfinite(eq_lhs(i, j)))
        throw std::invalid_argument("LPInstance: non-finite constraint entry");
  }
}

LPResult solve(const LPInstance& inst, const LPTolerances& tol) {
  inst.check_well_formed();
  ScalarPolicy<double> pol{tol.optimality, tol.feasibility};
  std::vector<double> point;
  auto out = solve_canonical<double>(inst, pol, tol.max_iter_factor, &point);
  LPResult res;
  res.status = out.status;
  res.iterations = out.iterations;
  if (out.status == LPStatus::optimal) {
    res.value = out.value;
    res.point = Eigen::Map<Vector>(point.data(), static_cast<Index>(point.size()));
    res.dual_degenerate = out.dual_degenerate;
  }
  return res;
}

ExactLPResult solve_exact(const LPInstance& inst) {
  inst.check_well_formed();
  if (inst.num_vars() > 64)
    throw std::invalid_argument("solve_exact: exact mode is limited to 64 variables");
  ScalarPolicy<Rational> pol;
  std::vector<Rational> point;
  auto out = solve_canonical<Rational>(inst, pol, 200, &point);
  ExactLPResult res;
  res.status = out.status;
  res.iterations = out.iterations;
  if (out.status == LPStatus::optimal) {
    res.value = out.value;
    res.point = std::move(point);
    res.dual_degenerate = out.dual_degenerate;
  }
  return res;
}

}  // namespace spikecs
