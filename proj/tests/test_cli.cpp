// End-to-end tests that drive the installed binary through its file
// formats. The binary path arrives in the LPMASK_CLI environment variable
// (set by ctest).

#include "lpmask/serialize.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace lpmask;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

const std::string& cli_path() {
  static const std::string path = [] {
    const char* env = std::getenv("LPMASK_CLI");
    REQUIRE(env != nullptr);
    return std::string(env);
  }();
  return path;
}

const fs::path& work_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() /
             ("lpmask_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void spit(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path out_file = work_dir() / ("out" + std::to_string(counter++) + ".txt");
  const std::string cmd =
      cli_path() + " " + args + " > " + out_file.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_file);
  return r;
}

fs::path wpath(const char* name) { return work_dir() / name; }

} // namespace

TEST_CASE("gen / keygen / encrypt / solve / decrypt pipeline") {
  const auto prob = wpath("prob.json");
  const auto key = wpath("key.json");
  const auto masked = wpath("masked.json");
  const auto sol = wpath("sol.json");
  const auto rec = wpath("rec.json");

  REQUIRE(run_cli("gen --m 2 --n 4 --seed 42 -o " + prob.string()).code == 0);
  REQUIRE(run_cli("keygen --problem " + prob.string() + " --seed 7 -o " +
                  key.string())
              .code == 0);
  REQUIRE(run_cli("encrypt --problem " + prob.string() + " --key " + key.string() +
                  " -o " + masked.string())
              .code == 0);
  auto solve = run_cli("solve " + masked.string() + " --form nonneg -o " +
                       sol.string());
  REQUIRE(solve.code == 0);
  REQUIRE(solve.out.find("Optimal value") != std::string::npos);
  REQUIRE(run_cli("decrypt --problem " + prob.string() + " --key " + key.string() +
                  " --solution " + sol.string() + " -o " + rec.string())
              .code == 0);

  // library-level replays agree with what went through the files
  auto p = parse_peculiar(slurp(prob));
  auto kf = parse_key(slurp(key));
  validate_key_file(kf, p);
  auto [server, n] = parse_solution(slurp(sol));
  auto [recovered, rn] = parse_solution(slurp(rec));
  REQUIRE(n == 4);
  REQUIRE(recovered.verdict == Verdict::Optimal);
  REQUIRE(*recovered.x_opt == decrypt_solution(*server.x_opt, p, kf.key).x);

  REQUIRE(run_cli("verify --problem " + prob.string() + " --key " + key.string())
              .code == 0);
}

TEST_CASE("seeded commands are byte-deterministic") {
  const auto a = wpath("det_a.json");
  const auto b = wpath("det_b.json");

  REQUIRE(run_cli("gen --m 2 --n 4 --seed 11 -o " + a.string()).code == 0);
  REQUIRE(run_cli("gen --m 2 --n 4 --seed 11 -o " + b.string()).code == 0);
  REQUIRE(slurp(a) == slurp(b));

  REQUIRE(run_cli("keygen --problem " + a.string() + " --seed 3 -o " +
                  wpath("det_k1.json").string())
              .code == 0);
  REQUIRE(run_cli("keygen --problem " + b.string() + " --seed 3 -o " +
                  wpath("det_k2.json").string())
              .code == 0);
  REQUIRE(slurp(wpath("det_k1.json")) == slurp(wpath("det_k2.json")));

  REQUIRE(run_cli("audit --m 2 --n 3 --trials 20 --seed 5 -o " +
                  wpath("det_r1.json").string())
              .code == 0);
  REQUIRE(run_cli("audit --m 2 --n 3 --trials 20 --seed 5 -o " +
                  wpath("det_r2.json").string())
              .code == 0);
  REQUIRE(slurp(wpath("det_r1.json")) == slurp(wpath("det_r2.json")));
}

TEST_CASE("gen honors --b-mode identity") {
  const auto prob = wpath("ident.json");
  REQUIRE(run_cli("gen --m 1 --n 2 --seed 7 --b-mode identity -o " + prob.string())
              .code == 0);
  REQUIRE(parse_peculiar(slurp(prob)).B == RatMatrix::identity(2));
}

TEST_CASE("usage and guard failures exit 1") {
  auto r = run_cli("gen --m 4 --n 2 --seed 1 -o " + wpath("no.json").string());
  REQUIRE(r.code == 1);
  REQUIRE(r.out.find("m < n") != std::string::npos);

  REQUIRE(run_cli("audit --m 2 --n 4 --trials 0 --seed 1").code == 1);
  REQUIRE(run_cli("nonsense").code == 1);
  REQUIRE(run_cli("gen --m 2 --n 4").code == 1); // missing -o

  // free variables cannot go through --form nonneg
  GeneralLP lp;
  lp.c = RatVector{1, 0};
  lp.aeq = RatMatrix{{1, 1}};
  lp.beq = RatVector{2};
  lp.gineq = RatMatrix(0, 2);
  lp.sign = {VarSign::Free, VarSign::Free};
  spit(wpath("free.json"), problem_to_string(lp));
  r = run_cli("solve " + wpath("free.json").string() + " --form nonneg");
  REQUIRE(r.code == 1);
  REQUIRE(r.out.find("free variable") != std::string::npos);
  REQUIRE(run_cli("solve " + wpath("free.json").string() + " --form general").code ==
          0);

  spit(wpath("garbage.json"), "not json at all\n");
  REQUIRE(run_cli("solve " + wpath("garbage.json").string() + " --form nonneg")
              .code == 1);
}

TEST_CASE("non-optimal verdicts are data, not errors") {
  GeneralLP lp;
  lp.c = RatVector{1, 1};
  lp.aeq = RatMatrix{{1, 1}};
  lp.beq = RatVector{-1};
  lp.gineq = RatMatrix(0, 2);
  lp.sign = {VarSign::Nonnegative, VarSign::Nonnegative};
  spit(wpath("infeasible.json"), problem_to_string(lp));
  auto r = run_cli("solve " + wpath("infeasible.json").string() + " --form nonneg");
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("Infeasible") != std::string::npos);
}

TEST_CASE("validation failures exit 2, exhaustion exits 3") {
  const auto p1 = wpath("v1.json");
  const auto p2 = wpath("v2.json");
  const auto k1 = wpath("vk1.json");
  REQUIRE(run_cli("gen --m 2 --n 4 --seed 1 -o " + p1.string()).code == 0);
  REQUIRE(run_cli("gen --m 2 --n 4 --seed 2 -o " + p2.string()).code == 0);
  REQUIRE(run_cli("keygen --problem " + p1.string() + " --seed 1 -o " + k1.string())
              .code == 0);
  // key bound to p1 cannot be used with p2
  REQUIRE(run_cli("encrypt --problem " + p2.string() + " --key " + k1.string() +
                  " -o " + wpath("vx.json").string())
              .code == 2);

  // all-zero problem: b + A r != 0 is unreachable
  PeculiarProblem zero{RatMatrix{{0, 0}}, RatVector{0}, RatMatrix::identity(2),
                       RatVector{1, 0}};
  spit(wpath("zero.json"), problem_to_string(zero));
  REQUIRE(run_cli("keygen --problem " + wpath("zero.json").string() +
                  " --seed 1 -o " + wpath("zk.json").string())
              .code == 3);
}

TEST_CASE("builtin counterexample replayed through the file layer") {
  AuditTrial trial = builtin_counterexample();
  const auto prob = wpath("ce_prob.json");
  const auto key = wpath("ce_key.json");
  const auto masked = wpath("ce_masked.json");
  const auto ysol = wpath("ce_y.json");
  spit(prob, problem_to_string(trial.problem));
  spit(key, key_to_string(KeyFile{trial.key, 0, problem_fingerprint(trial.problem)}));
  spit(masked, problem_to_string(encrypt(trial.problem, trial.key)));

  auto solve = run_cli("solve " + masked.string() + " --form nonneg -o " +
                       ysol.string());
  REQUIRE(solve.code == 0);
  REQUIRE(solve.out.find("Optimal value 0 at (0, 1)") != std::string::npos);

  auto dec = run_cli("decrypt --problem " + prob.string() + " --key " +
                     key.string() + " --solution " + ysol.string());
  REQUIRE(dec.code == 0);
  REQUIRE(dec.out.find("recovered x = (1, 1)") != std::string::npos);
  REQUIRE(dec.out.find("value = 1") != std::string::npos);
}

TEST_CASE("counterexample command reports the built-in witness") {
  const auto rep = wpath("ce.json");
  auto r = run_cli("counterexample -o " + rep.string());
  REQUIRE(r.code == 0);
  REQUIRE(r.out.find("SUBOPTIMAL") != std::string::npos);
  REQUIRE(r.out.find("true optimum with x >= 0: value 0") != std::string::npos);
  REQUIRE(r.out.find("objective 1") != std::string::npos);

  auto report = parse_report(slurp(rep));
  REQUIRE(report.trials_requested == 1);
  REQUIRE(report.count_of(TrialTag::Suboptimal) == 1);
  REQUIRE(run_cli("verify --report " + rep.string()).code == 0);

  // double-run determinism of the written file
  const auto rep2 = wpath("ce2.json");
  REQUIRE(run_cli("counterexample -o " + rep2.string()).code == 0);
  REQUIRE(slurp(rep) == slurp(rep2));
}

TEST_CASE("verify rejects corrupted reports") {
  const auto rep = wpath("audit_rep.json");
  REQUIRE(run_cli("audit --m 2 --n 4 --trials 30 --seed 1 -o " + rep.string())
              .code == 0);
  REQUIRE(run_cli("verify --report " + rep.string()).code == 0);

  std::string text = slurp(rep);
  auto pos = text.find("\"SUBOPTIMAL\": ");
  REQUIRE(pos != std::string::npos);
  text.insert(pos + 14, "9");
  spit(wpath("audit_bad.json"), text);
  REQUIRE(run_cli("verify --report " + wpath("audit_bad.json").string()).code == 2);
}
