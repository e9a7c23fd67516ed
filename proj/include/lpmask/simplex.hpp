#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lpmask/errors.hpp"
#include "lpmask/linalg.hpp"
#include "lpmask/model.hpp"

namespace lpmask {

enum class Verdict { Optimal, Infeasible, Unbounded };

struct SolveOutcome {
  Verdict verdict = Verdict::Infeasible;
  std::optional<RatVector> x_opt; // present iff Optimal
  std::optional<Rational> value;  // present iff Optimal
  std::optional<RatVector> ray;   // present iff Unbounded
  std::uint64_t pivots_used = 0;

  bool operator==(const SolveOutcome&) const = default;
};

/// Number of bases of a tableau with `cols` columns and `rows` rows:
/// C(cols, rows). Under Bland's rule no basis repeats within a phase, so
/// pivot counts stay below this bound.
inline BigInt pivot_bound(std::size_t cols, std::size_t rows) {
  if (rows > cols) return 0;
  BigInt out = 1;
  for (std::size_t i = 0; i < rows; ++i) {
    out *= BigInt(cols - i);
    out /= BigInt(i + 1);
  }
  return out;
}

namespace detail {

// Dense simplex tableau over exact rationals. Rows store coefficients plus
// the rhs in the last slot; `reduced` is the reduced-cost row. The rhs
// column stays nonnegative after every pivot.
struct Tableau {
  std::vector<std::vector<Rational>> rows; // each of length num_cols + 1
  std::vector<std::size_t> basis;          // basis[i]: column basic in row i
  std::vector<Rational> reduced;           // length num_cols
  std::size_t num_cols = 0;
  std::size_t first_artificial = 0; // columns >= this never enter
  std::uint64_t pivots = 0;
  BigInt pivot_cap = 0;

  void set_costs(const std::vector<Rational>& costs) {
    reduced = costs;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Rational cb = costs[basis[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < num_cols; ++j) reduced[j] -= cb * rows[i][j];
    }
  }

  void pivot_at(std::size_t pr, std::size_t pc) {
    auto& prow = rows[pr];
    const Rational piv = prow[pc];
    if (piv != 1) {
      for (auto& v : prow) v /= piv;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == pr) continue;
      const Rational f = rows[i][pc];
      if (f == 0) continue;
      for (std::size_t j = 0; j <= num_cols; ++j) rows[i][j] -= f * prow[j];
    }
    const Rational fz = reduced[pc];
    if (fz != 0) {
      for (std::size_t j = 0; j < num_cols; ++j) reduced[j] -= fz * prow[j];
    }
    basis[pr] = pc;
    ++pivots;
    if (BigInt(pivots) > pivot_cap) {
      throw InternalError("simplex exceeded its pivot bound; cycling despite Bland's rule");
    }
  }

  // Minimum ratio test in column pc; ties broken by the smallest basic
  // variable index (Bland). Empty when the column has no positive entry.
  std::optional<std::size_t> ratio_test(std::size_t pc) const {
    std::optional<std::size_t> best;
    Rational best_ratio;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const Rational& a = rows[i][pc];
      if (a <= 0) continue;
      Rational ratio = rows[i][num_cols] / a;
      if (!best || ratio < best_ratio ||
          (ratio == best_ratio && basis[i] < basis[*best])) {
        best = i;
        best_ratio = ratio;
      }
    }
    return best;
  }

  // Pivots until optimality (returns nullopt) or an unbounded entering
  // column (returns it). Entering variable: lowest column index with a
  // negative reduced cost, artificials excluded.
  std::optional<std::size_t> run() {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < first_artificial; ++j) {
        if (reduced[j] < 0) {
          enter = j;
          break;
        }
      }
      if (!enter) return std::nullopt;
      auto leave = ratio_test(*enter);
      if (!leave) return enter;
      pivot_at(*leave, *enter);
    }
  }

  // After a zero-value phase one, pivots every basic artificial onto some
  // structural column, dropping rows that turn out redundant.
  void drive_out_artificials() {
    for (std::size_t i = 0; i < rows.size();) {
      if (basis[i] < first_artificial) {
        ++i;
        continue;
      }
      if (rows[i][num_cols] != 0) {
        throw InternalError("basic artificial with nonzero value after phase one");
      }
      std::size_t j = 0;
      while (j < first_artificial && rows[i][j] == 0) ++j;
      if (j < first_artificial) {
        pivot_at(i, j);
        ++i;
      } else {
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
      }
    }
  }

  RatVector solution(std::size_t width) const {
    RatVector x(width);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (basis[i] < width) x[basis[i]] = rows[i][num_cols];
    }
    return x;
  }

  // Direction of unbounded descent for entering column pc, over the first
  // `width` columns: the entering variable grows at rate one while each
  // basic variable moves by minus its column coefficient.
  RatVector direction(std::size_t pc, std::size_t width) const {
    RatVector d(width);
    if (pc < width) d[pc] = 1;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (basis[i] < width) d[basis[i]] = -rows[i][pc];
    }
    return d;
  }
};

} // namespace detail

/// Two-phase tableau simplex for an LP whose variables are all sign
/// restricted. Surplus variables turn each inequality row G x >= 0 into
/// G x - s = 0; phase one minimizes the sum of one artificial per row.
/// Bland's rule (lowest index) picks both entering and leaving variables,
/// so the solve terminates and is a pure function of the input.
inline SolveOutcome solve_nonneg(const GeneralLP& p) {
  p.validate();
  for (VarSign s : p.sign) {
    if (s != VarSign::Nonnegative) {
      throw PreconditionError(
          "solve_nonneg: problem has a free variable; use solve_general");
    }
  }

  const std::size_t n = p.num_vars();
  const std::size_t k = p.aeq.rows();
  const std::size_t q = p.gineq.rows();
  const std::size_t structural = n + q;
  const std::size_t nrows = k + q;

  detail::Tableau t;
  t.num_cols = structural + nrows;
  t.first_artificial = structural;
  t.pivot_cap = 2 * pivot_bound(t.num_cols, nrows) + nrows + 1;
  t.rows.assign(nrows, std::vector<Rational>(t.num_cols + 1));
  t.basis.resize(nrows);

  for (std::size_t i = 0; i < k; ++i) {
    const bool flip = p.beq[i] < 0; // keep the rhs column nonnegative
    for (std::size_t j = 0; j < n; ++j)
      t.rows[i][j] = flip ? -p.aeq(i, j) : p.aeq(i, j);
    t.rows[i][t.num_cols] = flip ? -p.beq[i] : p.beq[i];
  }
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < n; ++j) t.rows[k + i][j] = p.gineq(i, j);
    t.rows[k + i][n + i] = -1; // surplus
  }
  for (std::size_t i = 0; i < nrows; ++i) {
    t.rows[i][structural + i] = 1;
    t.basis[i] = structural + i;
  }

  // phase one
  std::vector<Rational> phase1(t.num_cols);
  for (std::size_t i = 0; i < nrows; ++i) phase1[structural + i] = 1;
  t.set_costs(phase1);
  if (t.run()) {
    throw InternalError("phase one reported unbounded");
  }
  Rational artificial_sum = 0;
  for (std::size_t i = 0; i < nrows; ++i) {
    if (t.basis[i] >= structural) artificial_sum += t.rows[i][t.num_cols];
  }
  if (artificial_sum > 0) {
    return SolveOutcome{Verdict::Infeasible, std::nullopt, std::nullopt,
                        std::nullopt, t.pivots};
  }
  t.drive_out_artificials();

  // phase two
  std::vector<Rational> phase2(t.num_cols);
  for (std::size_t j = 0; j < n; ++j) phase2[j] = p.c[j];
  t.set_costs(phase2);
  if (auto enter = t.run()) {
    RatVector lifted = t.direction(*enter, structural);
    RatVector ray(n);
    for (std::size_t j = 0; j < n; ++j) ray[j] = lifted[j];
    if (!is_recession_direction(p, ray) || dot(p.c, ray) >= 0) {
      throw InternalError("simplex produced an invalid unbounded ray");
    }
    return SolveOutcome{Verdict::Unbounded, std::nullopt, std::nullopt,
                        std::move(ray), t.pivots};
  }
  RatVector lifted = t.solution(structural);
  RatVector x(n);
  for (std::size_t j = 0; j < n; ++j) x[j] = lifted[j];
  if (!is_feasible(p, x)) {
    throw InternalError("simplex optimum fails exact feasibility recheck");
  }
  Rational value = dot(p.c, x);
  return SolveOutcome{Verdict::Optimal, std::move(x), std::move(value),
                      std::nullopt, t.pivots};
}

/// Solver for arbitrary sign patterns: every free variable is split into a
/// difference of two sign-restricted ones, solve_nonneg does the work, and
/// the outcome is mapped back to the original space.
inline SolveOutcome solve_general(const GeneralLP& p) {
  p.validate();
  const std::size_t n = p.num_vars();

  std::vector<std::size_t> pos_col(n);
  std::size_t split_cols = 0;
  for (std::size_t i = 0; i < n; ++i) {
    pos_col[i] = split_cols;
    split_cols += p.sign[i] == VarSign::Free ? 2 : 1;
  }

  GeneralLP split;
  split.c = RatVector(split_cols);
  split.aeq = RatMatrix(p.aeq.rows(), split_cols);
  split.beq = p.beq;
  split.gineq = RatMatrix(p.gineq.rows(), split_cols);
  split.sign.assign(split_cols, VarSign::Nonnegative);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t u = pos_col[i];
    split.c[u] = p.c[i];
    for (std::size_t r = 0; r < p.aeq.rows(); ++r) split.aeq(r, u) = p.aeq(r, i);
    for (std::size_t r = 0; r < p.gineq.rows(); ++r) split.gineq(r, u) = p.gineq(r, i);
    if (p.sign[i] == VarSign::Free) {
      const std::size_t v = u + 1;
      split.c[v] = -p.c[i];
      for (std::size_t r = 0; r < p.aeq.rows(); ++r) split.aeq(r, v) = -p.aeq(r, i);
      for (std::size_t r = 0; r < p.gineq.rows(); ++r)
        split.gineq(r, v) = -p.gineq(r, i);
    }
  }

  SolveOutcome inner = solve_nonneg(split);
  auto map_back = [&](const RatVector& z) {
    RatVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = z[pos_col[i]];
      if (p.sign[i] == VarSign::Free) x[i] -= z[pos_col[i] + 1];
    }
    return x;
  };

  SolveOutcome out;
  out.verdict = inner.verdict;
  out.pivots_used = inner.pivots_used;
  if (inner.verdict == Verdict::Optimal) {
    out.x_opt = map_back(*inner.x_opt);
    if (!is_feasible(p, *out.x_opt)) {
      throw InternalError("split solution fails feasibility in the original space");
    }
    out.value = dot(p.c, *out.x_opt);
  } else if (inner.verdict == Verdict::Unbounded) {
    out.ray = map_back(*inner.ray);
    if (!is_recession_direction(p, *out.ray) || dot(p.c, *out.ray) >= 0) {
      throw InternalError("split ray fails the recession check in the original space");
    }
  }
  return out;
}

} // namespace lpmask
