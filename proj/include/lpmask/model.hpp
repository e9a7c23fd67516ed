#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lpmask/errors.hpp"
#include "lpmask/linalg.hpp"

namespace lpmask {

// The client's problem: minimize c.x subject to A x = b, B x >= 0, with B
// square and nonsingular. Variables carry no sign restriction of their own.
struct PeculiarProblem {
  RatMatrix A; // m x n
  RatVector b; // m
  RatMatrix B; // n x n
  RatVector c; // n

  std::size_t num_rows() const { return A.rows(); }
  std::size_t num_vars() const { return A.cols(); }

  void validate() const {
    const std::size_t m = A.rows(), n = A.cols();
    if (m == 0 || n == 0) throw ValidationError("peculiar problem: empty A");
    if (b.size() != m)
      throw ValidationError("peculiar problem: b length " + std::to_string(b.size()) +
                            ", expected " + std::to_string(m));
    if (B.rows() != n || B.cols() != n)
      throw ValidationError("peculiar problem: B is " + shape_of(B) + ", expected " +
                            std::to_string(n) + "x" + std::to_string(n));
    if (c.size() != n)
      throw ValidationError("peculiar problem: c length " + std::to_string(c.size()) +
                            ", expected " + std::to_string(n));
    if (determinant(B) == 0) throw ValidationError("peculiar problem: B is singular");
  }
};

// The transformed problem the client ships out: minimize c.y subject to
// A y = b, B y >= 0. Same shape as the original, but b is never zero.
struct MaskedProblem {
  RatMatrix A; // m x n
  RatVector b; // m
  RatMatrix B; // n x n
  RatVector c; // n

  std::size_t num_rows() const { return A.rows(); }
  std::size_t num_vars() const { return A.cols(); }

  void validate() const {
    const std::size_t m = A.rows(), n = A.cols();
    if (m == 0 || n == 0) throw ValidationError("masked problem: empty A");
    if (b.size() != m)
      throw ValidationError("masked problem: b length " + std::to_string(b.size()) +
                            ", expected " + std::to_string(m));
    if (B.rows() != n || B.cols() != n)
      throw ValidationError("masked problem: B is " + shape_of(B) + ", expected " +
                            std::to_string(n) + "x" + std::to_string(n));
    if (c.size() != n)
      throw ValidationError("masked problem: c length " + std::to_string(c.size()) +
                            ", expected " + std::to_string(n));
    if (determinant(B) == 0) throw ValidationError("masked problem: B is singular");
    if (is_zero(b)) throw ValidationError("masked problem: b is zero");
  }
};

// Textbook standard form: maximize c.x subject to A x <= b, x >= 0.
struct StandardMaxProblem {
  RatMatrix A; // m x n
  RatVector b; // m
  RatVector c; // n

  void validate() const {
    if (A.rows() == 0 || A.cols() == 0) throw ValidationError("standard problem: empty A");
    if (b.size() != A.rows())
      throw ValidationError("standard problem: b length mismatch");
    if (c.size() != A.cols())
      throw ValidationError("standard problem: c length mismatch");
  }
};

// Equality form [A, I](x; x_s) = b with zero-cost slack variables x_s.
struct AugmentedProblem {
  RatMatrix aug;           // m x (n + m), columns n.. form the identity
  RatVector b;             // m
  RatVector c_ext;         // n + m, zero beyond slack_offset
  std::size_t slack_offset; // = n

  void validate() const {
    const std::size_t m = aug.rows();
    if (m == 0) throw ValidationError("augmented problem: empty system");
    if (aug.cols() != slack_offset + m)
      throw ValidationError("augmented problem: expected " +
                            std::to_string(slack_offset + m) + " columns, got " +
                            std::to_string(aug.cols()));
    if (b.size() != m || c_ext.size() != aug.cols())
      throw ValidationError("augmented problem: vector length mismatch");
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        if (aug(i, slack_offset + j) != Rational(i == j ? 1 : 0))
          throw ValidationError("augmented problem: slack block is not the identity");
    for (std::size_t j = slack_offset; j < c_ext.size(); ++j)
      if (c_ext[j] != 0)
        throw ValidationError("augmented problem: slack cost is not zero");
  }
};

enum class VarSign { Nonnegative, Free };

// Unified minimization LP: equality rows, homogeneous inequality rows
// G x >= 0, and a per-variable sign flag. Either constraint block may be
// empty.
struct GeneralLP {
  RatVector c;               // n
  RatMatrix aeq;             // k x n (k may be 0)
  RatVector beq;             // k
  RatMatrix gineq;           // p x n (p may be 0), rows mean row.x >= 0
  std::vector<VarSign> sign; // n

  std::size_t num_vars() const { return c.size(); }

  void validate() const {
    const std::size_t n = c.size();
    if (n == 0) throw ValidationError("general LP: no variables");
    if (aeq.rows() > 0 && aeq.cols() != n)
      throw ValidationError("general LP: equality block has " +
                            std::to_string(aeq.cols()) + " columns, expected " +
                            std::to_string(n));
    if (beq.size() != aeq.rows())
      throw ValidationError("general LP: equality rhs length mismatch");
    if (gineq.rows() > 0 && gineq.cols() != n)
      throw ValidationError("general LP: inequality block has " +
                            std::to_string(gineq.cols()) + " columns, expected " +
                            std::to_string(n));
    if (sign.size() != n)
      throw ValidationError("general LP: sign vector length mismatch");
  }
};

/// Exact feasibility of a point for every constraint of the LP.
inline bool is_feasible(const GeneralLP& p, const RatVector& x) {
  if (x.size() != p.num_vars()) return false;
  for (std::size_t i = 0; i < p.aeq.rows(); ++i)
    if (dot(p.aeq.row(i), x) != p.beq[i]) return false;
  for (std::size_t i = 0; i < p.gineq.rows(); ++i)
    if (dot(p.gineq.row(i), x) < 0) return false;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (p.sign[i] == VarSign::Nonnegative && x[i] < 0) return false;
  return true;
}

/// Membership of d in the recession cone of the LP's feasible region.
inline bool is_recession_direction(const GeneralLP& p, const RatVector& d) {
  if (d.size() != p.num_vars() || is_zero(d)) return false;
  for (std::size_t i = 0; i < p.aeq.rows(); ++i)
    if (dot(p.aeq.row(i), d) != 0) return false;
  for (std::size_t i = 0; i < p.gineq.rows(); ++i)
    if (dot(p.gineq.row(i), d) < 0) return false;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (p.sign[i] == VarSign::Nonnegative && d[i] < 0) return false;
  return true;
}

/// Slack-variable conversion of the standard form to the equality form.
inline AugmentedProblem to_augmented(const StandardMaxProblem& p) {
  p.validate();
  const std::size_t m = p.A.rows(), n = p.A.cols();
  AugmentedProblem out;
  out.aug = RatMatrix(m, n + m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.aug(i, j) = p.A(i, j);
    out.aug(i, n + i) = 1;
  }
  out.b = p.b;
  out.c_ext = RatVector(n + m);
  for (std::size_t j = 0; j < n; ++j) out.c_ext[j] = p.c[j];
  out.slack_offset = n;
  return out;
}

/// The augmented equality form as a minimization LP (costs negated, so the
/// optimal value is the negated maximum).
inline GeneralLP augmented_as_general(const AugmentedProblem& p) {
  p.validate();
  GeneralLP out;
  out.c = -p.c_ext;
  out.aeq = p.aug;
  out.beq = p.b;
  out.gineq = RatMatrix(0, p.aug.cols());
  out.sign.assign(p.aug.cols(), VarSign::Nonnegative);
  return out;
}

/// The standard max form as a minimization LP without slack rewriting:
/// A x <= b is encoded homogeneously as [-A, b](x; t) >= 0 with an auxiliary
/// variable pinned to t = 1. Gives an independent route to the same optimum
/// as the augmented form.
inline GeneralLP standard_as_general(const StandardMaxProblem& p) {
  p.validate();
  const std::size_t m = p.A.rows(), n = p.A.cols();
  GeneralLP out;
  out.c = RatVector(n + 1);
  for (std::size_t j = 0; j < n; ++j) out.c[j] = -p.c[j];
  out.aeq = RatMatrix(1, n + 1);
  out.aeq(0, n) = 1;
  out.beq = RatVector{1};
  out.gineq = RatMatrix(m, n + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.gineq(i, j) = -p.A(i, j);
    out.gineq(i, n) = p.b[i];
  }
  out.sign.assign(n + 1, VarSign::Nonnegative);
  return out;
}

/// Field mapping of the client's problem into the unified form. With
/// add_nonneg the variables become sign-restricted (the form a simplex
/// solver actually requires); without it they stay free.
inline GeneralLP peculiar_as_general(const PeculiarProblem& p, bool add_nonneg) {
  GeneralLP out;
  out.c = p.c;
  out.aeq = p.A;
  out.beq = p.b;
  out.gineq = p.B;
  out.sign.assign(p.num_vars(), add_nonneg ? VarSign::Nonnegative : VarSign::Free);
  return out;
}

/// Same mapping for the masked problem.
inline GeneralLP masked_as_general(const MaskedProblem& p, bool add_nonneg) {
  GeneralLP out;
  out.c = p.c;
  out.aeq = p.A;
  out.beq = p.b;
  out.gineq = p.B;
  out.sign.assign(p.num_vars(), add_nonneg ? VarSign::Nonnegative : VarSign::Free);
  return out;
}

/// True iff m is diagonal with every diagonal entry strictly positive. For
/// such a matrix, m y >= 0 is equivalent to y >= 0.
inline bool is_positive_diagonal(const RatMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("is_positive_diagonal: matrix is " + shape_of(m) +
                         ", not square");
  }
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (i == j) {
        if (m(i, j) <= 0) return false;
      } else if (m(i, j) != 0) {
        return false;
      }
    }
  }
  return true;
}

} // namespace lpmask
