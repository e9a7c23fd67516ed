#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "lpmask/enumerate.hpp"
#include "lpmask/errors.hpp"
#include "lpmask/masking.hpp"
#include "lpmask/model.hpp"
#include "lpmask/rng.hpp"
#include "lpmask/simplex.hpp"

namespace lpmask {

// Outcome of one round trip through the masking pipeline, judged against the
// sign-restricted version of the client's problem.
enum class TrialTag {
  Faithful,           // recovered value equals the true optimum
  Suboptimal,         // recovered point feasible but strictly worse
  InfeasibleRecovery, // recovered point violates x >= 0
  MaskedInfeasible,   // server's problem has no solution
  MaskedUnbounded,
  TrueInfeasible,     // the client's own sign-restricted problem fails
  TrueUnbounded,
};

inline constexpr std::size_t kNumTrialTags = 7;

inline const char* tag_name(TrialTag tag) {
  switch (tag) {
    case TrialTag::Faithful: return "FAITHFUL";
    case TrialTag::Suboptimal: return "SUBOPTIMAL";
    case TrialTag::InfeasibleRecovery: return "INFEASIBLE_RECOVERY";
    case TrialTag::MaskedInfeasible: return "MASKED_INFEASIBLE";
    case TrialTag::MaskedUnbounded: return "MASKED_UNBOUNDED";
    case TrialTag::TrueInfeasible: return "TRUE_INFEASIBLE";
    case TrialTag::TrueUnbounded: return "TRUE_UNBOUNDED";
  }
  throw InternalError("tag_name: unknown tag");
}

enum class BMode { Identity, Random };

inline const char* b_mode_name(BMode mode) {
  return mode == BMode::Identity ? "identity" : "random";
}

struct AuditTrial {
  std::uint64_t seed = 0; // key seed (0 for handcrafted keys)
  PeculiarProblem problem;
  MaskingKey key;
  SolveOutcome server_outcome;        // on the masked problem with y >= 0
  std::optional<RatVector> recovered_x;
  SolveOutcome true_outcome;          // on the original problem with x >= 0
  TrialTag classification = TrialTag::Faithful;
};

struct AuditReport {
  std::uint64_t master_seed = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t trials_requested = 0;
  BMode b_mode = BMode::Identity;
  std::array<std::uint64_t, kNumTrialTags> counts{};
  std::uint64_t error_count = 0; // keygen / generator resampling failures
  std::map<TrialTag, AuditTrial> first_counterexample;
  std::string generator;

  std::uint64_t count_of(TrialTag tag) const {
    return counts[static_cast<std::size_t>(tag)];
  }
};

// Draw ranges baked into generate_instance / keygen; recorded in every
// report so replays can detect a configuration mismatch.
inline constexpr const char* kGeneratorFingerprint =
    "splitmix64;A:-5..5;x0:0..5;c:-5..5;B:-5..5;Q:-10..10;M:-10..10;"
    "r:-10..10;N:-3..3;gamma:1..8/1..8";

/// Instance generator plus the planted point x0 >= 0 with b = A x0 and
/// B x0 >= 0, which witnesses feasibility of the sign-restricted problem.
inline std::pair<PeculiarProblem, RatVector> generate_instance_with_witness(
    std::size_t m, std::size_t n, std::uint64_t seed, BMode b_mode,
    int max_attempts = 256) {
  if (!(1 <= m && m < n && n <= 12)) {
    throw PreconditionError("generate_instance requires 1 <= m < n <= 12, got m=" +
                            std::to_string(m) + ", n=" + std::to_string(n));
  }
  SplitMix64 rng(seed);
  PeculiarProblem p;
  p.A = detail::random_int_matrix(rng, m, n, -5, 5);
  RatVector x0 = detail::random_int_vector(rng, n, 0, 5);
  p.b = p.A * x0;
  p.c = detail::random_int_vector(rng, n, -5, 5);
  if (b_mode == BMode::Identity) {
    p.B = RatMatrix::identity(n);
  } else {
    bool found = false;
    for (int t = 0; t < max_attempts; ++t) {
      p.B = detail::random_int_matrix(rng, n, n, -5, 5);
      if (determinant(p.B) != 0 && is_nonneg(p.B * x0)) {
        found = true;
        break;
      }
    }
    if (!found) {
      throw ResamplingExhausted("generate_instance: no B with B x0 >= 0 after " +
                                std::to_string(max_attempts) + " draws");
    }
  }
  p.validate();
  return {std::move(p), std::move(x0)};
}

inline PeculiarProblem generate_instance(std::size_t m, std::size_t n,
                                         std::uint64_t seed, BMode b_mode) {
  return generate_instance_with_witness(m, n, seed, b_mode).first;
}

/// Re-derives the classification from a trial's embedded outcomes. The
/// recovered point of a server optimum always satisfies A x = b and
/// B x >= 0 (that much of feasibility survives the mapping); only x >= 0
/// can break, and only the comparison against the true optimum remains.
inline TrialTag classify_trial(const AuditTrial& trial) {
  if (trial.true_outcome.verdict == Verdict::Infeasible) return TrialTag::TrueInfeasible;
  if (trial.true_outcome.verdict == Verdict::Unbounded) return TrialTag::TrueUnbounded;
  if (trial.server_outcome.verdict == Verdict::Infeasible)
    return TrialTag::MaskedInfeasible;
  if (trial.server_outcome.verdict == Verdict::Unbounded)
    return TrialTag::MaskedUnbounded;
  if (!trial.recovered_x) {
    throw InternalError("classify_trial: server optimum without a recovered point");
  }
  const RatVector& xhat = *trial.recovered_x;
  const PeculiarProblem& p = trial.problem;
  if (p.A * xhat != p.b || !is_nonneg(p.B * xhat)) {
    throw InternalError(
        "classify_trial: recovered point lost functional feasibility");
  }
  if (!is_nonneg(xhat)) return TrialTag::InfeasibleRecovery;
  const Rational recovered_value = dot(p.c, xhat);
  const Rational& true_value = *trial.true_outcome.value;
  if (recovered_value < true_value) {
    throw InternalError("classify_trial: recovered value beats the true optimum");
  }
  return recovered_value == true_value ? TrialTag::Faithful : TrialTag::Suboptimal;
}

/// One full pipeline pass: keygen, encrypt, server solve with y >= 0
/// appended, decrypt, compare against the sign-restricted original.
inline AuditTrial run_trial(const PeculiarProblem& p, std::uint64_t key_seed) {
  AuditTrial trial;
  trial.seed = key_seed;
  trial.problem = p;
  trial.key = keygen(p, key_seed);
  const MaskedProblem masked = encrypt(p, trial.key);
  trial.server_outcome = solve_nonneg(masked_as_general(masked, true));
  if (trial.server_outcome.verdict == Verdict::Optimal) {
    trial.recovered_x = decrypt_solution(*trial.server_outcome.x_opt, p, trial.key).x;
  }
  trial.true_outcome = solve_nonneg(peculiar_as_general(p, true));
  trial.classification = classify_trial(trial);
  return trial;
}

/// Runs `trials` independent trials. Trial i draws its instance from
/// seed_split(master_seed, i, 0) and its key from seed_split(master_seed,
/// i, 1), so the report is reproducible and order-independent. Resampling
/// failures are counted, not fatal.
inline AuditReport run_audit(std::size_t m, std::size_t n, std::uint64_t trials,
                             std::uint64_t master_seed, BMode b_mode) {
  if (trials < 1) throw PreconditionError("audit requires trials >= 1");
  AuditReport report;
  report.master_seed = master_seed;
  report.m = m;
  report.n = n;
  report.trials_requested = trials;
  report.b_mode = b_mode;
  report.generator = kGeneratorFingerprint;
  for (std::uint64_t i = 0; i < trials; ++i) {
    try {
      auto p = generate_instance(m, n, seed_split(master_seed, i, 0), b_mode);
      AuditTrial trial = run_trial(p, seed_split(master_seed, i, 1));
      const TrialTag tag = trial.classification;
      ++report.counts[static_cast<std::size_t>(tag)];
      const bool failure_tag =
          tag == TrialTag::Suboptimal || tag == TrialTag::InfeasibleRecovery ||
          tag == TrialTag::MaskedInfeasible || tag == TrialTag::MaskedUnbounded;
      if (failure_tag && !report.first_counterexample.contains(tag)) {
        report.first_counterexample.emplace(tag, std::move(trial));
      }
    } catch (const ResamplingExhausted&) {
      ++report.error_count;
    }
  }
  return report;
}

struct NonnegCounterexample {
  RatVector x; // sampled x >= 0
  RatVector y; // M^-1 (x + r)
  std::size_t bad_index;
};

/// Searches for a nonnegative x whose preimage y = M^-1(x + r) leaves the
/// nonnegative orthant. Probes x = 0 and the unit vectors first, then
/// n_samples random integer points in [0, 10]^n.
inline std::optional<NonnegCounterexample> check_nonneg_preservation(
    const MaskingKey& k, std::size_t n_samples, std::uint64_t seed) {
  const std::size_t n = k.M.rows();
  const RatMatrix minv = inverse(k.M);
  auto probe = [&](RatVector x) -> std::optional<NonnegCounterexample> {
    RatVector y = minv * (x + k.r);
    for (std::size_t i = 0; i < n; ++i) {
      if (y[i] < 0) return NonnegCounterexample{std::move(x), std::move(y), i};
    }
    return std::nullopt;
  };
  if (auto hit = probe(RatVector(n))) return hit;
  for (std::size_t i = 0; i < n; ++i) {
    if (auto hit = probe(RatVector::unit(n, i))) return hit;
  }
  SplitMix64 rng(seed);
  for (std::size_t t = 0; t < n_samples; ++t) {
    if (auto hit = probe(detail::random_int_vector(rng, n, 0, 10))) return hit;
  }
  return std::nullopt;
}

/// When the masked B' is diagonal with positive entries, B' y >= 0 really
/// is equivalent to y >= 0; this probes that equivalence on deterministic
/// and random vectors (returning true), and returns false for every other
/// B'. A failed probe would contradict arithmetic and throws.
inline bool positive_diagonal_probe(const PeculiarProblem& p, const MaskingKey& k,
                                    std::size_t n_samples, std::uint64_t seed) {
  const MaskedProblem masked = encrypt(p, k);
  if (!is_positive_diagonal(masked.B)) return false;
  const std::size_t n = masked.num_vars();
  auto assert_equiv = [&](const RatVector& y) {
    if (is_nonneg(masked.B * y) != is_nonneg(y)) {
      throw InternalError(
          "positive_diagonal_probe: equivalence failed on a probe vector");
    }
  };
  assert_equiv(RatVector(n));
  for (std::size_t i = 0; i < n; ++i) {
    assert_equiv(RatVector::unit(n, i));
    assert_equiv(-RatVector::unit(n, i));
  }
  SplitMix64 rng(seed);
  for (std::size_t t = 0; t < n_samples; ++t) {
    assert_equiv(detail::random_int_vector(rng, n, -10, 10));
  }
  return true;
}

/// The fixed witness that the pipeline loses optimality. Every number is
/// recomputed here and checked against its expected value; the function
/// throws rather than return a trial that does not reproduce.
inline AuditTrial builtin_counterexample() {
  auto expect = [](bool ok, const char* what) {
    if (!ok) throw InternalError(std::string("builtin_counterexample: ") + what);
  };

  AuditTrial trial;
  trial.seed = 0;
  trial.problem = PeculiarProblem{RatMatrix{{1, 1}}, RatVector{2},
                                  RatMatrix::identity(2), RatVector{1, 0}};
  trial.key = MaskingKey{RatMatrix{{1}}, RatMatrix::identity(2),
                         RatMatrix{{-1}, {0}}, RatVector{-1, 0}, Rational(1)};
  validate_key(trial.problem, trial.key);

  const MaskedProblem masked = encrypt(trial.problem, trial.key);
  expect(masked.A == (RatMatrix{{1, 1}}), "A' should be [[1, 1]]");
  expect(masked.b == (RatVector{1}), "b' should be (1)");
  expect(masked.B == (RatMatrix{{2, 1}, {0, 1}}), "B' should be [[2, 1], [0, 1]]");
  expect(masked.c == (RatVector{1, 0}), "c' should be (1, 0)");

  trial.server_outcome = solve_nonneg(masked_as_general(masked, true));
  expect(trial.server_outcome.verdict == Verdict::Optimal, "server verdict");
  expect(*trial.server_outcome.value == 0, "server value should be 0");
  expect(*trial.server_outcome.x_opt == (RatVector{0, 1}),
         "server optimum should be y = (0, 1)");

  const Decryption recovered =
      decrypt_solution(*trial.server_outcome.x_opt, trial.problem, trial.key);
  expect(recovered.x == (RatVector{1, 1}), "recovered point should be (1, 1)");
  expect(recovered.value == 1, "recovered value should be 1");
  trial.recovered_x = recovered.x;

  trial.true_outcome = solve_nonneg(peculiar_as_general(trial.problem, true));
  expect(trial.true_outcome.verdict == Verdict::Optimal, "true verdict");
  expect(*trial.true_outcome.value == 0, "true optimum should be 0");
  expect(*trial.true_outcome.x_opt == (RatVector{0, 2}),
         "true argmin should be (0, 2)");

  // why the server misses it: the true argmin maps to y* = (-1, 2), which
  // is feasible for the masked problem with value -1 but violates y >= 0
  const RatVector y_star =
      solve_linear(trial.key.M, *trial.true_outcome.x_opt + trial.key.r);
  expect(y_star == (RatVector{-1, 2}), "y* should be (-1, 2)");
  expect(masked.A * y_star == masked.b, "y* satisfies A' y = b'");
  expect(is_nonneg(masked.B * y_star), "y* satisfies B' y >= 0");
  expect(dot(masked.c, y_star) == -1, "masked value at y* should be -1");
  expect(!is_nonneg(y_star), "y* must leave the nonnegative orthant");

  trial.classification = classify_trial(trial);
  expect(trial.classification == TrialTag::Suboptimal, "classification");
  return trial;
}

} // namespace lpmask
