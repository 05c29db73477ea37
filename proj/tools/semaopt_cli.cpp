#include <cfenv>
#include <cfloat>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "semaopt/harness/config.hpp"
#include "semaopt/harness/registry.hpp"
#include "semaopt/harness/runner.hpp"
#include "semaopt/harness/verify.hpp"
#include "semaopt/trajectory.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitVerification = 4;

void require_strict_fp() {
#if !defined(SEMAOPT_STRICT_FP) || FLT_EVAL_METHOD != 0
  throw semaopt::ConfigError("--strict-fp: this build does not use strict IEEE-754 double arithmetic");
#endif
  if (std::fesetround(FE_TONEAREST) != 0)
    throw semaopt::ConfigError("--strict-fp: cannot select round-to-nearest");
}

int cmd_run(const std::string& path, int seeds, const std::string& out, unsigned jobs) {
  semaopt::RunSpec spec = semaopt::load_run_spec(path);
  if (seeds > 0) {
    spec.seeds.clear();
    for (int i = 0; i < seeds; ++i) spec.seeds.push_back(static_cast<std::uint64_t>(i));
  }
  const std::uint64_t base = semaopt::seed_base_from_env();
  for (std::uint64_t& s : spec.seeds) s += base;
  if (!out.empty()) spec.output = out;
  const semaopt::RunSummary summary = semaopt::run_spec(spec, jobs);
  std::cout << semaopt::summary_csv(summary);
  if (summary.mean.diverged) {
    for (const semaopt::SeedSummary& s : summary.seeds)
      if (s.diverged)
        std::cerr << "seed " << s.seed << " diverged at step " << s.diverged_step << "\n";
    return kExitDivergence;
  }
  return 0;
}

int cmd_verify(const std::string& suite, int seeds) {
  semaopt::VerifyOptions opts;
  if (seeds > 0) opts.seeds = static_cast<std::size_t>(seeds);
  opts.seed_base = semaopt::seed_base_from_env();
  const semaopt::VerifyReport report = semaopt::run_verify_suite(suite, opts);
  for (const semaopt::VerifyCheck& c : report.checks) std::cout << c.describe() << "\n";
  std::cout << (report.passed() ? "PASS " : "FAIL ") << report.suite << "\n";
  return report.passed() ? 0 : kExitVerification;
}

int cmd_problems_list() {
  for (const semaopt::ProblemInfo& p : semaopt::problem_list())
    std::cout << semaopt::to_string(p.kind) << "\t" << semaopt::to_string(p.solver) << "\t"
              << p.summary << "\n";
  return 0;
}

int cmd_fixture_dump(const std::string& name, std::uint64_t seed, bool seed_set,
                     const std::string& out) {
  semaopt::ProblemSpec spec;
  spec.kind = semaopt::parse_problem_kind(name);
  if (seed_set) spec.seed = seed;
  const nlohmann::json j = semaopt::instance_to_fixture(semaopt::build_problem(spec));
  if (out.empty())
    std::cout << j.dump(2) << "\n";
  else
    semaopt::write_json_file(out, j);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moving-average adaptive stochastic optimization toolkit"};
  app.require_subcommand(1);
  // Global flags may follow the subcommand.
  app.fallthrough();
  int seeds = 0;
  std::string out;
  unsigned jobs = 1;
  bool strict_fp = false;
  app.add_option("--seeds", seeds, "Number of seeds (run: seeds 0..N-1; verify: seeds per check)")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Output directory (run) or file (fixture dump)");
  app.add_option("--jobs", jobs, "Worker threads for multi-seed runs")->check(CLI::PositiveNumber);
  app.add_flag("--strict-fp", strict_fp, "Require strict IEEE-754 double arithmetic");

  std::string spec_path;
  CLI::App* run = app.add_subcommand("run", "Run an experiment spec");
  run->add_option("spec", spec_path, "Spec file (JSON or flat key = value)")->required();

  std::string suite;
  CLI::App* verify = app.add_subcommand("verify", "Run a verification suite");
  verify->add_option("suite", suite, "Suite name")->required();

  CLI::App* problems = app.add_subcommand("problems", "Problem registry");
  problems->require_subcommand(1);
  CLI::App* list = problems->add_subcommand("list", "List the available problems");

  CLI::App* fixture = app.add_subcommand("fixture", "Problem fixtures");
  fixture->require_subcommand(1);
  std::string problem_name;
  std::uint64_t fixture_seed = 0;
  CLI::App* dump = fixture->add_subcommand("dump", "Serialize a problem instance as JSON");
  dump->add_option("problem", problem_name, "Problem name")->required();
  CLI::Option* seed_opt = dump->add_option("--seed", fixture_seed, "Instance seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (strict_fp) require_strict_fp();
    if (*run) return cmd_run(spec_path, seeds, out, jobs);
    if (*verify) return cmd_verify(suite, seeds);
    if (*list) return cmd_problems_list();
    if (*dump) return cmd_fixture_dump(problem_name, fixture_seed, seed_opt->count() > 0, out);
  } catch (const semaopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const semaopt::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const semaopt::VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return kExitVerification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
