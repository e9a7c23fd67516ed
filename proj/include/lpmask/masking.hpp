#pragma once

#include <cstdint>
#include <utility>

#include "lpmask/errors.hpp"
#include "lpmask/linalg.hpp"
#include "lpmask/model.hpp"
#include "lpmask/rng.hpp"

namespace lpmask {

// Client-side masking material. Against a bound problem (A, b, B, c) the key
// must satisfy: Q and M nonsingular, gamma > 0, b + A r != 0,
// P b' = B r for b' = Q (b + A r), and det((B - P Q A) M) != 0.
struct MaskingKey {
  RatMatrix Q;    // m x m row mixer
  RatMatrix M;    // n x n variable mixer
  RatMatrix P;    // n x m coupling block
  RatVector r;    // n, variable shift
  Rational gamma; // positive objective scale

  bool operator==(const MaskingKey&) const = default;
};

/// Q=I, M=I, P=0, r=0, gamma=1. Valid for any problem with b != 0, and
/// turns the whole scheme into the identity transformation.
inline MaskingKey trivial_key(const PeculiarProblem& p) {
  return MaskingKey{RatMatrix::identity(p.num_rows()),
                    RatMatrix::identity(p.num_vars()),
                    RatMatrix(p.num_vars(), p.num_rows()),
                    RatVector(p.num_vars()), Rational(1)};
}

/// Checks every key invariant against the problem; throws ValidationError
/// with the first violated condition.
inline void validate_key(const PeculiarProblem& p, const MaskingKey& k) {
  p.validate();
  const std::size_t m = p.num_rows(), n = p.num_vars();
  if (k.Q.rows() != m || k.Q.cols() != m)
    throw ValidationError("key: Q is " + shape_of(k.Q) + ", expected " +
                          std::to_string(m) + "x" + std::to_string(m));
  if (k.M.rows() != n || k.M.cols() != n)
    throw ValidationError("key: M is " + shape_of(k.M) + ", expected " +
                          std::to_string(n) + "x" + std::to_string(n));
  if (k.P.rows() != n || k.P.cols() != m)
    throw ValidationError("key: P is " + shape_of(k.P) + ", expected " +
                          std::to_string(n) + "x" + std::to_string(m));
  if (k.r.size() != n) throw ValidationError("key: r has wrong length");
  if (determinant(k.Q) == 0) throw ValidationError("key: Q is singular");
  if (determinant(k.M) == 0) throw ValidationError("key: M is singular");
  if (k.gamma <= 0) throw ValidationError("key: gamma must be positive");
  const RatVector shifted = p.b + p.A * k.r;
  if (is_zero(shifted)) throw ValidationError("key: b + A r is zero");
  const RatVector bp = k.Q * shifted;
  if (k.P * bp != p.B * k.r)
    throw ValidationError("key: P b' != B r");
  const RatMatrix Bp = (p.B - k.P * k.Q * p.A) * k.M;
  if (determinant(Bp) == 0)
    throw ValidationError("key: (B - P Q A) M is singular");
}

namespace detail {

inline RatMatrix random_int_matrix(SplitMix64& rng, std::size_t rows,
                                   std::size_t cols, std::int64_t lo,
                                   std::int64_t hi) {
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.next_in(lo, hi);
  return m;
}

inline RatVector random_int_vector(SplitMix64& rng, std::size_t n,
                                   std::int64_t lo, std::int64_t hi) {
  RatVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rng.next_in(lo, hi);
  return v;
}

inline RatMatrix random_nonsingular(SplitMix64& rng, std::size_t n,
                                    std::int64_t bound, int attempts) {
  for (int t = 0; t < attempts; ++t) {
    auto m = random_int_matrix(rng, n, n, -bound, bound);
    if (determinant(m) != 0) return m;
  }
  throw ResamplingExhausted("keygen: could not draw a nonsingular matrix");
}

// Rows spanning the orthogonal complement of v (nonzero, length m):
// for the first index j0 with v[j0] != 0, the m-1 vectors
// v[j0] e_j - v[j] e_j0, j != j0.
inline RatMatrix complement_rows(const RatVector& v) {
  const std::size_t m = v.size();
  std::size_t j0 = 0;
  while (v[j0] == 0) ++j0;
  RatMatrix w(m - 1, m);
  std::size_t row = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (j == j0) continue;
    w(row, j) = v[j0];
    w(row, j0) = -v[j];
    ++row;
  }
  return w;
}

} // namespace detail

/// Draws a key valid for p, deterministically from the seed. Q and M get
/// integer entries in [-10, 10] (resampled while singular), r likewise until
/// b + A r != 0, gamma = a/b with a, b in [1, 8]. P is the rank-one solution
/// (B r) b'^T / (b'.b') of P b' = B r plus a random combination of the
/// complement of b', redrawn until (B - P Q A) M is nonsingular.
inline MaskingKey keygen(const PeculiarProblem& p, std::uint64_t seed,
                         int max_attempts = 64) {
  p.validate();
  const std::size_t m = p.num_rows(), n = p.num_vars();
  SplitMix64 rng(seed);

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    MaskingKey k;
    k.Q = detail::random_nonsingular(rng, m, 10, max_attempts);
    k.M = detail::random_nonsingular(rng, n, 10, max_attempts);

    bool shift_ok = false;
    for (int t = 0; t < max_attempts; ++t) {
      k.r = detail::random_int_vector(rng, n, -10, 10);
      if (!is_zero(p.b + p.A * k.r)) {
        shift_ok = true;
        break;
      }
    }
    if (!shift_ok) {
      throw ResamplingExhausted(
          "keygen: b + A r != 0 unreachable (A and b may both be zero)");
    }
    k.gamma = frac(rng.next_in(1, 8), rng.next_in(1, 8));

    const RatVector bp = k.Q * (p.b + p.A * k.r);
    const RatMatrix base = (Rational(1) / dot(bp, bp)) * outer(p.B * k.r, bp);
    for (int t = 0; t < 8; ++t) {
      k.P = base;
      if (m > 1) {
        const RatMatrix coeff = detail::random_int_matrix(rng, n, m - 1, -3, 3);
        k.P = base + coeff * detail::complement_rows(bp);
      }
      if (determinant((p.B - k.P * k.Q * p.A) * k.M) != 0) {
        try {
          validate_key(p, k);
        } catch (const ValidationError& e) {
          throw InternalError(std::string("keygen built an invalid key: ") +
                              e.what());
        }
        return k;
      }
      if (m == 1) break; // P is forced by the rank-one solution; redraw Q, M, r
    }
  }
  throw ResamplingExhausted("keygen: no valid key after the attempt cap");
}

/// The masking transformation: A' = Q A M, B' = (B - P Q A) M,
/// b' = Q (b + A r), c' = gamma M^T c.
inline MaskedProblem encrypt(const PeculiarProblem& p, const MaskingKey& k) {
  validate_key(p, k);
  MaskedProblem out;
  out.A = k.Q * p.A * k.M;
  out.B = (p.B - k.P * k.Q * p.A) * k.M;
  out.b = k.Q * (p.b + p.A * k.r);
  out.c = k.gamma * (transpose(k.M) * p.c);
  out.validate();
  return out;
}

struct Decryption {
  RatVector x;
  Rational value; // c.x with the client's own cost vector
};

/// Inverts the variable substitution y = M^-1 (x + r): x = M y - r. The
/// reported value uses the client's c, not the masked c'.
inline Decryption decrypt_solution(const RatVector& y, const PeculiarProblem& p,
                                   const MaskingKey& k) {
  if (y.size() != p.num_vars()) {
    throw DimensionError("decrypt: solution length " + std::to_string(y.size()) +
                         ", expected " + std::to_string(p.num_vars()));
  }
  RatVector x = k.M * y - k.r;
  Rational value = dot(p.c, x);
  return Decryption{std::move(x), std::move(value)};
}

struct FeasibilityPair {
  bool original; // A x = b and B x >= 0
  bool masked;   // A' y = b' and B' y >= 0 at y = M^-1 (x + r)
};

/// Evaluates the same point on both sides of the transformation. For any
/// valid key the two flags agree: A' y - b' = Q (A x - b), and when
/// A x = b also B' y = B x.
inline FeasibilityPair verify_feasibility_map(const PeculiarProblem& p,
                                              const MaskingKey& k,
                                              const RatVector& x) {
  validate_key(p, k);
  if (x.size() != p.num_vars()) {
    throw DimensionError("verify_feasibility_map: x has wrong length");
  }
  const MaskedProblem mp = encrypt(p, k);
  const RatVector y = solve_linear(k.M, x + k.r);
  FeasibilityPair out;
  out.original = p.A * x == p.b && is_nonneg(p.B * x);
  out.masked = mp.A * y == mp.b && is_nonneg(mp.B * y);
  return out;
}

} // namespace lpmask
