// Command-line front end: instance generation, the masking pipeline
// (keygen / encrypt / solve / decrypt), the audit harness, and file
// verification. Exit codes: 0 success (any solver verdict counts as
// success), 1 usage or parse error, 2 validation failure, 3 resampling
// exhaustion or internal invariant violation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lpmask/lpmask.hpp"

namespace {

using namespace lpmask;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write " + path);
  out << bytes;
}

BMode parse_b_mode(const std::string& mode) {
  if (mode == "identity") return BMode::Identity;
  if (mode == "random") return BMode::Random;
  throw PreconditionError("--b-mode must be identity or random");
}

void print_outcome(const SolveOutcome& out) {
  switch (out.verdict) {
    case Verdict::Optimal:
      std::cout << "Optimal value " << to_string(*out.value) << " at "
                << to_string(*out.x_opt) << "\n";
      break;
    case Verdict::Infeasible:
      std::cout << "Infeasible\n";
      break;
    case Verdict::Unbounded:
      std::cout << "Unbounded along " << to_string(*out.ray) << "\n";
      break;
  }
}

void print_counts(const AuditReport& report) {
  for (std::size_t i = 0; i < kNumTrialTags; ++i) {
    std::printf("  %-20s %6llu\n", tag_name(static_cast<TrialTag>(i)),
                static_cast<unsigned long long>(report.counts[i]));
  }
  std::printf("  %-20s %6llu\n", "errors",
              static_cast<unsigned long long>(report.error_count));
}

int cmd_gen(std::size_t m, std::size_t n, std::uint64_t seed,
            const std::string& mode, const std::string& out_path) {
  auto p = generate_instance(m, n, seed, parse_b_mode(mode));
  write_file(out_path, problem_to_string(p));
  std::cout << "problem m=" << m << " n=" << n << " seed=" << seed << " b-mode="
            << mode << " -> " << out_path << "\n";
  return 0;
}

int cmd_keygen(const std::string& problem_path, std::uint64_t seed,
               const std::string& out_path) {
  auto p = parse_peculiar(read_file(problem_path));
  KeyFile kf{keygen(p, seed), seed, problem_fingerprint(p)};
  write_file(out_path, key_to_string(kf));
  std::cout << "key seed=" << seed << " -> " << out_path << "\n";
  return 0;
}

int cmd_encrypt(const std::string& problem_path, const std::string& key_path,
                const std::string& out_path) {
  auto p = parse_peculiar(read_file(problem_path));
  auto kf = parse_key(read_file(key_path));
  validate_key_file(kf, p);
  write_file(out_path, problem_to_string(encrypt(p, kf.key)));
  std::cout << "masked problem -> " << out_path << "\n";
  return 0;
}

int cmd_solve(const std::string& path, const std::string& form,
              const std::string& out_path) {
  const std::string text = read_file(path);
  const bool nonneg = form == "nonneg";
  GeneralLP lp;
  switch (peek_problem_kind(text)) {
    case ProblemKind::Peculiar:
      lp = peculiar_as_general(parse_peculiar(text), nonneg);
      break;
    case ProblemKind::Masked:
      lp = masked_as_general(parse_masked(text), nonneg);
      break;
    case ProblemKind::General:
      lp = parse_general(text);
      break;
  }
  SolveOutcome out = nonneg ? solve_nonneg(lp) : solve_general(lp);
  print_outcome(out);
  if (!out_path.empty()) {
    write_file(out_path, solution_to_string(out, lp.num_vars()));
  }
  return 0;
}

int cmd_decrypt(const std::string& problem_path, const std::string& key_path,
                const std::string& solution_path, const std::string& out_path) {
  auto p = parse_peculiar(read_file(problem_path));
  auto kf = parse_key(read_file(key_path));
  validate_key_file(kf, p);
  auto [server, n] = parse_solution(read_file(solution_path));
  if (n != p.num_vars()) {
    throw ValidationError("solution file is for " + std::to_string(n) +
                          " variables, problem has " +
                          std::to_string(p.num_vars()));
  }
  if (server.verdict != Verdict::Optimal) {
    throw ValidationError("solution file carries no optimal point to decrypt");
  }
  Decryption d = decrypt_solution(*server.x_opt, p, kf.key);
  std::cout << "recovered x = " << to_string(d.x) << "\n"
            << "value = " << to_string(d.value) << "\n";
  if (!out_path.empty()) {
    SolveOutcome recovered{Verdict::Optimal, d.x, d.value, std::nullopt,
                           server.pivots_used};
    write_file(out_path, solution_to_string(recovered, p.num_vars()));
  }
  return 0;
}

// Wraps report self-validation: a freshly built report failing its own
// replay is a bug, not a data problem.
std::string render_validated_report(const AuditReport& report) {
  const std::string text = report_to_string(report);
  try {
    parse_report(text);
  } catch (const Error& e) {
    throw InternalError(std::string("fresh report failed re-validation: ") +
                        e.what());
  }
  return text;
}

int cmd_audit(std::size_t m, std::size_t n, std::uint64_t trials,
              std::uint64_t seed, const std::string& mode,
              const std::string& out_path) {
  auto report = run_audit(m, n, trials, seed, parse_b_mode(mode));
  std::cout << "audit m=" << m << " n=" << n << " trials=" << trials
            << " seed=" << seed << " b-mode=" << mode << "\n";
  print_counts(report);
  if (!out_path.empty()) {
    write_file(out_path, render_validated_report(report));
    std::cout << "report -> " << out_path << "\n";
  }
  return 0;
}

int cmd_counterexample(const std::string& out_path) {
  AuditTrial trial = builtin_counterexample();
  const MaskedProblem masked = encrypt(trial.problem, trial.key);
  const RatVector y_star =
      solve_linear(trial.key.M, *trial.true_outcome.x_opt + trial.key.r);

  std::cout
      << "original problem (m=1, n=2): min x1 s.t. x1 + x2 = 2, I x >= 0\n"
      << "  A = [[1, 1]], b = (2), B = I, c = (1, 0)\n"
      << "  true optimum with x >= 0: value "
      << to_string(*trial.true_outcome.value) << " at x = "
      << to_string(*trial.true_outcome.x_opt) << "\n"
      << "masking key: Q = [[1]], M = I, P = [[-1], [0]], r = (-1, 0), gamma = 1\n"
      << "masked problem sent out:\n"
      << "  A' = [[1, 1]], b' = (1), B' = [[2, 1], [0, 1]], c' = (1, 0)\n"
      << "server appends y >= 0 and solves:\n"
      << "  Optimal value " << to_string(*trial.server_outcome.value) << " at y = "
      << to_string(*trial.server_outcome.x_opt) << "\n"
      << "client recovers x = M y - r = " << to_string(*trial.recovered_x)
      << " with objective " << to_string(dot(trial.problem.c, *trial.recovered_x))
      << "\n"
      << "classification: " << tag_name(trial.classification)
      << " (recovered objective 1 > true optimum 0)\n"
      << "why: the true argmin x* = " << to_string(*trial.true_outcome.x_opt)
      << " maps to y* = " << to_string(y_star) << ", feasible for the masked\n"
      << "constraints with value " << to_string(dot(masked.c, y_star))
      << ", but y* has a negative entry, so y >= 0 cuts it off\n";

  if (!out_path.empty()) {
    AuditReport report;
    report.master_seed = 0;
    report.m = trial.problem.num_rows();
    report.n = trial.problem.num_vars();
    report.trials_requested = 1;
    report.b_mode = BMode::Identity;
    report.counts[static_cast<std::size_t>(TrialTag::Suboptimal)] = 1;
    report.first_counterexample.emplace(TrialTag::Suboptimal, trial);
    report.generator = "builtin";
    write_file(out_path, render_validated_report(report));
    std::cout << "report -> " << out_path << "\n";
  }
  return 0;
}

int cmd_verify(const std::string& problem_path, const std::string& key_path,
               const std::string& report_path) {
  if (problem_path.empty() && key_path.empty() && report_path.empty()) {
    throw PreconditionError("verify: pass --problem, --key and/or --report");
  }
  if (!key_path.empty() && problem_path.empty()) {
    throw PreconditionError("verify: --key needs --problem to check against");
  }
  if (!problem_path.empty()) {
    const std::string text = read_file(problem_path);
    switch (peek_problem_kind(text)) {
      case ProblemKind::Peculiar: {
        auto p = parse_peculiar(text);
        std::cout << "problem OK (peculiar, m=" << p.num_rows()
                  << ", n=" << p.num_vars() << ")\n";
        if (!key_path.empty()) {
          validate_key_file(parse_key(read_file(key_path)), p);
          std::cout << "key OK (fingerprint and invariants match)\n";
        }
        break;
      }
      case ProblemKind::Masked:
        parse_masked(text);
        std::cout << "problem OK (masked)\n";
        break;
      case ProblemKind::General:
        parse_general(text);
        std::cout << "problem OK (general)\n";
        break;
    }
  }
  if (!report_path.empty()) {
    auto report = parse_report(read_file(report_path));
    std::cout << "report OK (" << report.trials_requested << " trials, "
              << report.first_counterexample.size()
              << " embedded counterexamples replayed)\n";
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-rational LP masking toolkit"};
  app.require_subcommand(1);

  std::size_t m = 0, n = 0;
  std::uint64_t seed = 0, trials = 0;
  std::string b_mode = "identity";
  std::string out_path, problem_path, key_path, solution_path, report_path;
  std::string solve_path, form;

  auto* gen = app.add_subcommand("gen", "generate a random problem instance");
  gen->add_option("--m", m, "equality row count")->required();
  gen->add_option("--n", n, "variable count")->required();
  gen->add_option("--seed", seed, "instance seed")->default_val(0);
  gen->add_option("--b-mode", b_mode, "identity | random")
      ->default_val("identity")
      ->check(CLI::IsMember({"identity", "random"}));
  gen->add_option("-o,--output", out_path, "problem file to write")->required();

  auto* kg = app.add_subcommand("keygen", "draw a masking key for a problem");
  kg->add_option("--problem", problem_path, "problem file")->required();
  kg->add_option("--seed", seed, "key seed")->default_val(0);
  kg->add_option("-o,--output", out_path, "key file to write")->required();

  auto* enc = app.add_subcommand("encrypt", "apply the masking transformation");
  enc->add_option("--problem", problem_path, "problem file")->required();
  enc->add_option("--key", key_path, "key file")->required();
  enc->add_option("-o,--output", out_path, "masked problem file to write")->required();

  auto* slv = app.add_subcommand("solve", "solve a problem file exactly");
  slv->add_option("file", solve_path, "problem file")->required();
  slv->add_option("--form", form, "nonneg: append sign restrictions and use the "
                                  "two-phase simplex; general: allow free variables")
      ->required()
      ->check(CLI::IsMember({"nonneg", "general"}));
  slv->add_option("-o,--output", out_path, "solution file to write");

  auto* dec = app.add_subcommand("decrypt", "map a masked solution back");
  dec->add_option("--problem", problem_path, "original problem file")->required();
  dec->add_option("--key", key_path, "key file")->required();
  dec->add_option("--solution", solution_path, "server solution file")->required();
  dec->add_option("-o,--output", out_path, "recovered solution file to write");

  auto* aud = app.add_subcommand("audit", "run masked-vs-true trials and classify");
  aud->add_option("--m", m, "equality row count")->required();
  aud->add_option("--n", n, "variable count")->required();
  aud->add_option("--trials", trials, "number of trials")->required();
  aud->add_option("--seed", seed, "master seed")->default_val(0);
  aud->add_option("--b-mode", b_mode, "identity | random")
      ->default_val("identity")
      ->check(CLI::IsMember({"identity", "random"}));
  aud->add_option("-o,--output", out_path, "report file to write");

  auto* ce = app.add_subcommand("counterexample",
                                "replay the built-in suboptimality witness");
  ce->add_option("-o,--output", out_path, "report file to write");

  auto* ver = app.add_subcommand("verify", "re-check invariants of saved files");
  ver->add_option("--problem", problem_path, "problem file");
  ver->add_option("--key", key_path, "key file");
  ver->add_option("--report", report_path, "report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (gen->parsed()) return cmd_gen(m, n, seed, b_mode, out_path);
    if (kg->parsed()) return cmd_keygen(problem_path, seed, out_path);
    if (enc->parsed()) return cmd_encrypt(problem_path, key_path, out_path);
    if (slv->parsed()) return cmd_solve(solve_path, form, out_path);
    if (dec->parsed())
      return cmd_decrypt(problem_path, key_path, solution_path, out_path);
    if (aud->parsed()) return cmd_audit(m, n, trials, seed, b_mode, out_path);
    if (ce->parsed()) return cmd_counterexample(out_path);
    if (ver->parsed()) return cmd_verify(problem_path, key_path, report_path);
  } catch (const ParseError& e) {
    std::cerr << "lpmask: " << e.what() << "\n";
    return 1;
  } catch (const PreconditionError& e) {
    std::cerr << "lpmask: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "lpmask: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "lpmask: " << e.what() << "\n";
    return 2;
  } catch (const SingularMatrixError& e) {
    std::cerr << "lpmask: " << e.what() << "\n";
    return 2;
  } catch (const ResamplingExhausted& e) {
    std::cerr << "lpmask: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "lpmask: internal error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "lpmask: unexpected error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
