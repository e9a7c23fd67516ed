#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include <json.hpp>

#include "lpmask/audit.hpp"
#include "lpmask/errors.hpp"
#include "lpmask/linalg.hpp"
#include "lpmask/masking.hpp"
#include "lpmask/model.hpp"
#include "lpmask/simplex.hpp"

// Structured-text file formats for problems, keys, solutions and audit
// reports. One canonical JSON rendering per value (fixed field order,
// two-space indent, trailing newline), so byte equality doubles as a test
// oracle. Every scalar is an exact "p" or "p/q" string.

namespace lpmask {

using OrderedJson = nlohmann::ordered_json;

// ---- scalar grammar ----

/// Strict parser for the canonical scalar grammar: an optional minus sign,
/// digits without leading zeros, and an optional "/q" part with q >= 2,
/// coprime to p. Anything else (including "3/1", "2/4", "-0", "+1") is
/// rejected.
inline Rational parse_rational(std::string_view text) {
  const auto fail = [&]() -> Rational {
    throw ParseError("bad rational scalar: \"" + std::string(text) + "\"");
  };

  const std::size_t slash = text.find('/');
  std::string_view num_part = text.substr(0, slash);
  bool negative = false;
  if (!num_part.empty() && num_part.front() == '-') {
    negative = true;
    num_part.remove_prefix(1);
  }
  if (num_part.empty()) fail();
  for (char ch : num_part)
    if (ch < '0' || ch > '9') fail();
  if (num_part.size() > 1 && num_part.front() == '0') fail();
  if (negative && num_part == "0") fail(); // "-0"
  BigInt num{std::string(num_part)};
  if (negative) num = -num;

  if (slash == std::string_view::npos) return Rational(num);

  std::string_view den_part = text.substr(slash + 1);
  if (den_part.empty()) fail();
  for (char ch : den_part)
    if (ch < '0' || ch > '9') fail();
  if (den_part.front() == '0') fail(); // leading zero, and "/0"
  BigInt den{std::string(den_part)};
  if (den == 1) fail(); // must be written as a plain integer
  if (num == 0) fail(); // zero is written "0"
  if (gcd(abs(num), den) != 1) fail();
  return frac(std::move(num), std::move(den));
}

// ---- json building blocks ----

namespace detail {

inline OrderedJson vector_to_json(const RatVector& v) {
  OrderedJson arr = OrderedJson::array();
  for (const auto& x : v) arr.push_back(to_string(x));
  return arr;
}

inline OrderedJson matrix_to_json(const RatMatrix& m) {
  OrderedJson rows = OrderedJson::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    OrderedJson row = OrderedJson::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(to_string(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline RatVector vector_from_json(const OrderedJson& j, std::size_t expect,
                                  const std::string& name) {
  if (!j.is_array() || j.size() != expect) {
    throw ParseError(name + ": expected an array of length " +
                     std::to_string(expect));
  }
  RatVector v(expect);
  for (std::size_t i = 0; i < expect; ++i) {
    if (!j[i].is_string()) throw ParseError(name + ": scalars must be strings");
    v[i] = parse_rational(j[i].get<std::string>());
  }
  return v;
}

inline RatMatrix matrix_from_json(const OrderedJson& j, std::size_t rows,
                                  std::size_t cols, const std::string& name) {
  if (!j.is_array() || j.size() != rows) {
    throw ParseError(name + ": expected " + std::to_string(rows) + " rows");
  }
  RatMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    const auto& row = j[i];
    if (!row.is_array() || row.size() != cols) {
      throw ParseError(name + ": row " + std::to_string(i) + " must have " +
                       std::to_string(cols) + " entries");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!row[k].is_string()) throw ParseError(name + ": scalars must be strings");
      m(i, k) = parse_rational(row[k].get<std::string>());
    }
  }
  return m;
}

inline std::string render(const OrderedJson& j) { return j.dump(2) + "\n"; }

inline OrderedJson parse_document(std::string_view text, const char* kind) {
  OrderedJson j = OrderedJson::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw ParseError(std::string(kind) + ": not a JSON object");
  }
  return j;
}

inline const OrderedJson& required_field(const OrderedJson& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw ParseError(std::string("missing field \"") + field + "\"");
  }
  return *it;
}

inline std::size_t get_count(const OrderedJson& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_number_unsigned()) {
    throw ParseError(std::string("missing or bad count field \"") + field + "\"");
  }
  return j.at(field).get<std::size_t>();
}

inline std::uint64_t get_u64(const OrderedJson& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_number_unsigned()) {
    throw ParseError(std::string("missing or bad field \"") + field + "\"");
  }
  return j.at(field).get<std::uint64_t>();
}

inline std::string get_string(const OrderedJson& j, const char* field) {
  if (!j.contains(field) || !j.at(field).is_string()) {
    throw ParseError(std::string("missing or bad field \"") + field + "\"");
  }
  return j.at(field).get<std::string>();
}

} // namespace detail

// ---- fingerprints ----

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x00000100000001B3ULL;
  }
  return h;
}

// ---- problem files ----

enum class ProblemKind { Peculiar, Masked, General };

namespace detail {

inline OrderedJson problem_body(const RatMatrix& A, const RatVector& b,
                                const RatMatrix& B, const RatVector& c,
                                const char* kind) {
  OrderedJson j;
  j["kind"] = kind;
  j["m"] = A.rows();
  j["n"] = A.cols();
  j["A"] = matrix_to_json(A);
  j["b"] = vector_to_json(b);
  j["B"] = matrix_to_json(B);
  j["c"] = vector_to_json(c);
  return j;
}

} // namespace detail

inline std::string problem_to_string(const PeculiarProblem& p) {
  return detail::render(detail::problem_body(p.A, p.b, p.B, p.c, "peculiar"));
}

inline std::string problem_to_string(const MaskedProblem& p) {
  return detail::render(detail::problem_body(p.A, p.b, p.B, p.c, "masked"));
}

inline std::string problem_to_string(const GeneralLP& p) {
  OrderedJson j;
  j["kind"] = "general";
  j["m"] = p.aeq.rows();
  j["n"] = p.num_vars();
  j["p"] = p.gineq.rows();
  j["A"] = detail::matrix_to_json(p.aeq);
  j["b"] = detail::vector_to_json(p.beq);
  j["B"] = detail::matrix_to_json(p.gineq);
  j["c"] = detail::vector_to_json(p.c);
  OrderedJson sign = OrderedJson::array();
  for (VarSign s : p.sign)
    sign.push_back(s == VarSign::Nonnegative ? "nonneg" : "free");
  j["sign"] = std::move(sign);
  return detail::render(j);
}

inline ProblemKind peek_problem_kind(std::string_view text) {
  auto j = detail::parse_document(text, "problem file");
  const std::string kind = detail::get_string(j, "kind");
  if (kind == "peculiar") return ProblemKind::Peculiar;
  if (kind == "masked") return ProblemKind::Masked;
  if (kind == "general") return ProblemKind::General;
  throw ParseError("problem file: unknown kind \"" + kind + "\"");
}

namespace detail {

inline void expect_kind(const OrderedJson& j, const char* kind) {
  if (get_string(j, "kind") != kind) {
    throw ParseError(std::string("expected kind \"") + kind + "\", got \"" +
                     get_string(j, "kind") + "\"");
  }
}

template <typename Problem>
Problem parse_abc_problem(std::string_view text, const char* kind) {
  auto j = parse_document(text, kind);
  expect_kind(j, kind);
  const std::size_t m = get_count(j, "m");
  const std::size_t n = get_count(j, "n");
  Problem p;
  p.A = matrix_from_json(detail::required_field(j, "A"), m, n, "A");
  p.b = vector_from_json(detail::required_field(j, "b"), m, "b");
  p.B = matrix_from_json(detail::required_field(j, "B"), n, n, "B");
  p.c = vector_from_json(detail::required_field(j, "c"), n, "c");
  p.validate();
  return p;
}

} // namespace detail

inline PeculiarProblem parse_peculiar(std::string_view text) {
  return detail::parse_abc_problem<PeculiarProblem>(text, "peculiar");
}

inline MaskedProblem parse_masked(std::string_view text) {
  return detail::parse_abc_problem<MaskedProblem>(text, "masked");
}

inline GeneralLP parse_general(std::string_view text) {
  auto j = detail::parse_document(text, "general");
  detail::expect_kind(j, "general");
  const std::size_t k = detail::get_count(j, "m");
  const std::size_t n = detail::get_count(j, "n");
  const std::size_t q = detail::get_count(j, "p");
  GeneralLP p;
  p.aeq = detail::matrix_from_json(detail::required_field(j, "A"), k, n, "A");
  p.beq = detail::vector_from_json(detail::required_field(j, "b"), k, "b");
  p.gineq = detail::matrix_from_json(detail::required_field(j, "B"), q, n, "B");
  p.c = detail::vector_from_json(detail::required_field(j, "c"), n, "c");
  if (!j.contains("sign") || !detail::required_field(j, "sign").is_array() || detail::required_field(j, "sign").size() != n) {
    throw ParseError("general: sign must be an array of length n");
  }
  p.sign.clear();
  for (const auto& s : detail::required_field(j, "sign")) {
    if (s == "nonneg") {
      p.sign.push_back(VarSign::Nonnegative);
    } else if (s == "free") {
      p.sign.push_back(VarSign::Free);
    } else {
      throw ParseError("general: sign entries must be \"nonneg\" or \"free\"");
    }
  }
  p.validate();
  return p;
}

using AnyProblem = std::variant<PeculiarProblem, MaskedProblem, GeneralLP>;

inline AnyProblem parse_problem(std::string_view text) {
  switch (peek_problem_kind(text)) {
    case ProblemKind::Peculiar: return parse_peculiar(text);
    case ProblemKind::Masked: return parse_masked(text);
    case ProblemKind::General: return parse_general(text);
  }
  throw InternalError("parse_problem: unreachable");
}

/// Fingerprint of a problem, defined as FNV-1a over its canonical file
/// bytes. Key files carry it so a key cannot silently be applied to the
/// wrong problem.
inline std::string problem_fingerprint(const PeculiarProblem& p) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(problem_to_string(p))));
  return buf;
}

// ---- key files ----

struct KeyFile {
  MaskingKey key;
  std::uint64_t seed = 0;
  std::string fingerprint; // of the problem the key was generated for
};

inline std::string key_to_string(const KeyFile& kf) {
  OrderedJson j;
  j["kind"] = "key";
  j["m"] = kf.key.Q.rows();
  j["n"] = kf.key.M.rows();
  j["Q"] = detail::matrix_to_json(kf.key.Q);
  j["M"] = detail::matrix_to_json(kf.key.M);
  j["P"] = detail::matrix_to_json(kf.key.P);
  j["r"] = detail::vector_to_json(kf.key.r);
  j["gamma"] = to_string(kf.key.gamma);
  j["seed"] = kf.seed;
  j["problem"] = kf.fingerprint;
  return detail::render(j);
}

inline KeyFile parse_key(std::string_view text) {
  auto j = detail::parse_document(text, "key");
  detail::expect_kind(j, "key");
  const std::size_t m = detail::get_count(j, "m");
  const std::size_t n = detail::get_count(j, "n");
  KeyFile kf;
  kf.key.Q = detail::matrix_from_json(detail::required_field(j, "Q"), m, m, "Q");
  kf.key.M = detail::matrix_from_json(detail::required_field(j, "M"), n, n, "M");
  kf.key.P = detail::matrix_from_json(detail::required_field(j, "P"), n, m, "P");
  kf.key.r = detail::vector_from_json(detail::required_field(j, "r"), n, "r");
  kf.key.gamma = parse_rational(detail::get_string(j, "gamma"));
  kf.seed = detail::get_u64(j, "seed");
  kf.fingerprint = detail::get_string(j, "problem");
  return kf;
}

/// Re-verifies every key invariant against the problem, fingerprint
/// included. The loaded key is only usable after this passes.
inline void validate_key_file(const KeyFile& kf, const PeculiarProblem& p) {
  if (kf.fingerprint != problem_fingerprint(p)) {
    throw ValidationError("key file: problem fingerprint mismatch (key was "
                          "generated for a different problem)");
  }
  validate_key(p, kf.key);
}

// ---- solution files ----

namespace detail {

inline OrderedJson outcome_to_json(const SolveOutcome& out) {
  OrderedJson j;
  switch (out.verdict) {
    case Verdict::Optimal:
      j["verdict"] = "optimal";
      j["x"] = vector_to_json(*out.x_opt);
      j["value"] = to_string(*out.value);
      break;
    case Verdict::Infeasible:
      j["verdict"] = "infeasible";
      break;
    case Verdict::Unbounded:
      j["verdict"] = "unbounded";
      j["ray"] = vector_to_json(*out.ray);
      break;
  }
  j["pivots"] = out.pivots_used;
  return j;
}

inline SolveOutcome outcome_from_json(const OrderedJson& j, std::size_t n) {
  SolveOutcome out;
  const std::string verdict = get_string(j, "verdict");
  if (verdict == "optimal") {
    out.verdict = Verdict::Optimal;
    out.x_opt = vector_from_json(required_field(j, "x"), n, "x");
    out.value = parse_rational(get_string(j, "value"));
  } else if (verdict == "infeasible") {
    out.verdict = Verdict::Infeasible;
  } else if (verdict == "unbounded") {
    out.verdict = Verdict::Unbounded;
    out.ray = vector_from_json(required_field(j, "ray"), n, "ray");
  } else {
    throw ParseError("outcome: unknown verdict \"" + verdict + "\"");
  }
  out.pivots_used = get_u64(j, "pivots");
  return out;
}

} // namespace detail

inline std::string solution_to_string(const SolveOutcome& out, std::size_t n) {
  OrderedJson j;
  j["kind"] = "solution";
  j["n"] = n;
  OrderedJson body = detail::outcome_to_json(out);
  for (auto& [key, value] : body.items()) {
    j[key] = std::move(value);
  }
  return detail::render(j);
}

inline std::pair<SolveOutcome, std::size_t> parse_solution(std::string_view text) {
  auto j = detail::parse_document(text, "solution");
  detail::expect_kind(j, "solution");
  const std::size_t n = detail::get_count(j, "n");
  return {detail::outcome_from_json(j, n), n};
}

// ---- report files ----

namespace detail {

inline OrderedJson trial_to_json(const AuditTrial& t) {
  OrderedJson j;
  j["seed"] = t.seed;
  j["problem"] = OrderedJson::parse(problem_to_string(t.problem));
  j["key"] = OrderedJson::parse(key_to_string(
      KeyFile{t.key, t.seed, problem_fingerprint(t.problem)}));
  j["server"] = outcome_to_json(t.server_outcome);
  j["recovered_x"] =
      t.recovered_x ? vector_to_json(*t.recovered_x) : OrderedJson(nullptr);
  j["true"] = outcome_to_json(t.true_outcome);
  j["classification"] = tag_name(t.classification);
  return j;
}

inline AuditTrial trial_from_json(const OrderedJson& j) {
  AuditTrial t;
  t.seed = get_u64(j, "seed");
  t.problem = parse_peculiar(required_field(j, "problem").dump());
  KeyFile kf = parse_key(required_field(j, "key").dump());
  validate_key_file(kf, t.problem);
  t.key = kf.key;
  const std::size_t n = t.problem.num_vars();
  t.server_outcome = outcome_from_json(required_field(j, "server"), n);
  if (j.contains("recovered_x") && !required_field(j, "recovered_x").is_null()) {
    t.recovered_x = vector_from_json(required_field(j, "recovered_x"), n, "recovered_x");
  }
  t.true_outcome = outcome_from_json(required_field(j, "true"), n);
  const std::string tag = get_string(j, "classification");
  bool tag_ok = false;
  for (std::size_t i = 0; i < kNumTrialTags; ++i) {
    if (tag == tag_name(static_cast<TrialTag>(i))) {
      t.classification = static_cast<TrialTag>(i);
      tag_ok = true;
      break;
    }
  }
  if (!tag_ok) throw ParseError("trial: unknown classification \"" + tag + "\"");
  return t;
}

} // namespace detail

inline std::string report_to_string(const AuditReport& r) {
  OrderedJson j;
  j["kind"] = "report";
  j["m"] = r.m;
  j["n"] = r.n;
  j["trials"] = r.trials_requested;
  j["master_seed"] = r.master_seed;
  j["b_mode"] = b_mode_name(r.b_mode);
  j["generator"] = r.generator;
  OrderedJson counts;
  for (std::size_t i = 0; i < kNumTrialTags; ++i) {
    counts[tag_name(static_cast<TrialTag>(i))] = r.counts[i];
  }
  j["counts"] = std::move(counts);
  j["errors"] = r.error_count;
  OrderedJson ces;
  for (const auto& [tag, trial] : r.first_counterexample) {
    ces[tag_name(tag)] = detail::trial_to_json(trial);
  }
  j["counterexamples"] = std::move(ces);
  return detail::render(j);
}

/// Parses a report and re-validates it: counts must sum to the trial count
/// and every embedded trial must reproduce bit-exactly when its solves are
/// re-run (solving is deterministic, so equality is the right check).
inline AuditReport parse_report(std::string_view text) {
  auto j = detail::parse_document(text, "report");
  detail::expect_kind(j, "report");
  AuditReport r;
  r.m = detail::get_count(j, "m");
  r.n = detail::get_count(j, "n");
  r.trials_requested = detail::get_u64(j, "trials");
  r.master_seed = detail::get_u64(j, "master_seed");
  const std::string mode = detail::get_string(j, "b_mode");
  if (mode == "identity") {
    r.b_mode = BMode::Identity;
  } else if (mode == "random") {
    r.b_mode = BMode::Random;
  } else {
    throw ParseError("report: unknown b_mode \"" + mode + "\"");
  }
  r.generator = detail::get_string(j, "generator");

  if (!j.contains("counts") || !j["counts"].is_object()) {
    throw ParseError("report: missing counts");
  }
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < kNumTrialTags; ++i) {
    r.counts[i] = detail::get_u64(j["counts"], tag_name(static_cast<TrialTag>(i)));
    total += r.counts[i];
  }
  r.error_count = detail::get_u64(j, "errors");
  total += r.error_count;
  if (total != r.trials_requested) {
    throw ValidationError("report: counts sum to " + std::to_string(total) +
                          ", expected " + std::to_string(r.trials_requested));
  }

  if (!j.contains("counterexamples") || !j["counterexamples"].is_object()) {
    throw ParseError("report: missing counterexamples");
  }
  for (const auto& [tag_text, trial_json] : j["counterexamples"].items()) {
    AuditTrial trial = detail::trial_from_json(trial_json);
    if (std::string(tag_name(trial.classification)) != tag_text) {
      throw ValidationError("report: counterexample under \"" + tag_text +
                            "\" is classified " + tag_name(trial.classification));
    }
    if (r.counts[static_cast<std::size_t>(trial.classification)] == 0) {
      throw ValidationError("report: counterexample for a zero-count tag");
    }
    // replay the embedded trial; determinism makes mismatch a corruption
    const MaskedProblem masked = encrypt(trial.problem, trial.key);
    if (solve_nonneg(masked_as_general(masked, true)) != trial.server_outcome) {
      throw ValidationError("report: embedded server outcome fails replay");
    }
    if (solve_nonneg(peculiar_as_general(trial.problem, true)) !=
        trial.true_outcome) {
      throw ValidationError("report: embedded true outcome fails replay");
    }
    if (trial.server_outcome.verdict == Verdict::Optimal &&
        decrypt_solution(*trial.server_outcome.x_opt, trial.problem, trial.key).x !=
            trial.recovered_x) {
      throw ValidationError("report: embedded recovered point fails replay");
    }
    if (classify_trial(trial) != trial.classification) {
      throw ValidationError("report: embedded classification fails replay");
    }
    r.first_counterexample.emplace(trial.classification, std::move(trial));
  }
  return r;
}

} // namespace lpmask
