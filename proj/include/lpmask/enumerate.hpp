#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lpmask/errors.hpp"
#include "lpmask/linalg.hpp"
#include "lpmask/model.hpp"
#include "lpmask/simplex.hpp"

namespace lpmask {

namespace detail {

// All constraints of a GeneralLP as explicit rows: equalities, inequality
// rows, then one sign row e_i per sign-restricted variable.
struct ConstraintRows {
  std::vector<RatVector> lhs;
  std::vector<Rational> rhs;
  std::vector<bool> is_eq;
};

inline ConstraintRows gather_rows(const GeneralLP& p) {
  ConstraintRows rows;
  const std::size_t n = p.num_vars();
  for (std::size_t i = 0; i < p.aeq.rows(); ++i) {
    rows.lhs.push_back(p.aeq.row(i));
    rows.rhs.push_back(p.beq[i]);
    rows.is_eq.push_back(true);
  }
  for (std::size_t i = 0; i < p.gineq.rows(); ++i) {
    rows.lhs.push_back(p.gineq.row(i));
    rows.rhs.push_back(0);
    rows.is_eq.push_back(false);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (p.sign[i] == VarSign::Nonnegative) {
      rows.lhs.push_back(RatVector::unit(n, i));
      rows.rhs.push_back(0);
      rows.is_eq.push_back(false);
    }
  }
  return rows;
}

// Lexicographic walk over all size-k index subsets of {0..total-1}.
inline bool next_combination(std::vector<std::size_t>& idx, std::size_t total) {
  const std::size_t k = idx.size();
  std::size_t i = k;
  while (i-- > 0) {
    if (idx[i] < total - (k - i)) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

} // namespace detail

/// Brute-force ground truth for small instances: enumerates every basic
/// solution (each choice of n constraint rows with a unique solution),
/// keeps the feasible ones, and separately enumerates candidate extreme
/// rays of the recession cone to flag unboundedness. Never shares code
/// with the simplex path. Refuses instances it cannot adjudicate: more
/// than max_dim variables, fewer constraints than variables, or constraint
/// rows that do not span (the region then has no extreme points).
inline SolveOutcome enumerate_optimum(const GeneralLP& p, std::size_t max_dim = 6) {
  p.validate();
  const std::size_t n = p.num_vars();
  if (n > max_dim) {
    throw OracleRefusal("enumerate_optimum: " + std::to_string(n) +
                        " variables exceeds the cap of " + std::to_string(max_dim));
  }
  auto rows = detail::gather_rows(p);
  const std::size_t total = rows.lhs.size();
  if (total < n) {
    throw OracleRefusal("enumerate_optimum: fewer constraints than variables");
  }
  {
    RatMatrix all(total, n);
    for (std::size_t i = 0; i < total; ++i)
      for (std::size_t j = 0; j < n; ++j) all(i, j) = rows.lhs[i][j];
    if (rank_of(all) < n) {
      throw OracleRefusal(
          "enumerate_optimum: constraint rows do not span; no extreme points");
    }
  }

  auto feasible = [&](const RatVector& x) {
    for (std::size_t i = 0; i < total; ++i) {
      const Rational v = dot(rows.lhs[i], x);
      if (rows.is_eq[i] ? v != rows.rhs[i] : v < rows.rhs[i]) return false;
    }
    return true;
  };

  // Basic solutions: every n-subset of rows treated as tight.
  std::optional<RatVector> best_x;
  std::optional<Rational> best_value;
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  bool more = true;
  while (more) {
    RatMatrix sub(n, n);
    RatVector sub_rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) sub(i, j) = rows.lhs[idx[i]][j];
      sub_rhs[i] = rows.rhs[idx[i]];
    }
    if (auto x = try_solve(sub, sub_rhs); x && feasible(*x)) {
      Rational v = dot(p.c, *x);
      if (!best_value || v < *best_value) {
        best_value = std::move(v);
        best_x = std::move(*x);
      }
    }
    more = detail::next_combination(idx, total);
  }
  if (!best_x) {
    return SolveOutcome{Verdict::Infeasible, std::nullopt, std::nullopt,
                        std::nullopt, 0};
  }

  // Candidate extreme rays: null directions of (n-1)-subsets of the
  // homogeneous rows. A pointed region is unbounded below exactly when one
  // of these lies in the recession cone with negative cost.
  std::vector<std::size_t> ridx(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) ridx[i] = i;
  more = true;
  while (more) {
    RatMatrix sub(n - 1, n);
    for (std::size_t i = 0; i + 1 < n; ++i)
      for (std::size_t j = 0; j < n; ++j) sub(i, j) = rows.lhs[ridx[i]][j];
    auto kernel = kernel_basis(sub);
    if (kernel.size() == 1) {
      for (const RatVector& cand : {kernel[0], -kernel[0]}) {
        if (is_recession_direction(p, cand) && dot(p.c, cand) < 0) {
          return SolveOutcome{Verdict::Unbounded, std::nullopt, std::nullopt,
                              cand, 0};
        }
      }
    }
    more = n > 1 && detail::next_combination(ridx, total);
  }

  return SolveOutcome{Verdict::Optimal, std::move(best_x), std::move(best_value),
                      std::nullopt, 0};
}

/// Exact certificate check of an outcome against the problem it came from.
/// Optimal and Unbounded verdicts are verified directly; Infeasible is
/// cross-checked against the enumeration oracle, which throws
/// UnverifiedError when the instance is out of its reach.
inline bool check_certificate(const GeneralLP& p, const SolveOutcome& out,
                              std::size_t oracle_max_dim = 6) {
  p.validate();
  switch (out.verdict) {
    case Verdict::Optimal: {
      if (!out.x_opt || !out.value) return false;
      if (!is_feasible(p, *out.x_opt)) return false;
      return dot(p.c, *out.x_opt) == *out.value;
    }
    case Verdict::Unbounded: {
      if (!out.ray) return false;
      if (!is_recession_direction(p, *out.ray)) return false;
      return dot(p.c, *out.ray) < 0;
    }
    case Verdict::Infeasible: {
      try {
        return enumerate_optimum(p, oracle_max_dim).verdict == Verdict::Infeasible;
      } catch (const OracleRefusal& e) {
        throw UnverifiedError(std::string("check_certificate: ") + e.what());
      }
    }
  }
  throw InternalError("check_certificate: unknown verdict");
}

} // namespace lpmask
