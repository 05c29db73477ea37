// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semaopt/harness/config.hpp"
#include "semaopt/harness/csv.hpp"
#include "semaopt/harness/experiments.hpp"
#include "semaopt/harness/verify.hpp"
#include "semaopt/problems/fixture.hpp"
#include "semaopt/scalers.hpp"

using namespace semaopt;

namespace {

// Pinned tolerances.
constexpr double kEps = 0.2;
constexpr double kThm3SlopeLo = -0.65;
constexpr double kThm3SlopeHi = -0.35;
constexpr double kStageGapRatio = 0.6;
constexpr int kStages = 5;
constexpr double kRecursionRate = 0.05;
constexpr double kPairFactor = 5.0;
constexpr double kKappaMax = 4.0;
constexpr double kNeumannBiasFactor = 1.1;
constexpr double kNeumannSe = 3.0;
constexpr double kRoundoff = 1e-12;
constexpr std::size_t kNeumannDraws = 100000;
constexpr double kBilevelDeltaFactor = 5.0;
constexpr double kFinalWithinEps = 0.9;
constexpr double kAucTarget = 0.95;
constexpr double kLogisticAuc = 0.99;
constexpr std::size_t kAucCalls = 100000;
constexpr std::size_t kAucSeeds = 10;
constexpr double kDriftSe = 3.0;
constexpr std::size_t kDriftSeeds = 200;
constexpr std::size_t kDriftSteps = 10000;
constexpr double kShbTol = 1e-10;
constexpr double kIdentityTol = 1e-12;
constexpr double kGradcheckTol = 1e-5;

struct Options {
  std::size_t seeds = 20;
  std::uint64_t seed_base = 0;
  std::string fixture;
};

using Checks = std::vector<VerifyCheck>;

Checks criterion_thm2(const Options& o) {
  Checks c;
  const double e2 = kEps * kEps;
  for (ScalerTag tag : kAllScalerTags) {
    const Thm2Outcome out = run_thm2(tag, SeedRange{o.seeds, o.seed_base}, kEps);
    const std::string name(to_string(tag));
    c.push_back(check_at_most(name + " mean avg grad norm^2", out.mean_avg_grad, e2));
    c.push_back(check_at_most(name + " mean avg tracking error", out.mean_avg_delta, 2 * e2));
    c.push_back(check_at_most(name + " scale bound violations",
                              static_cast<double>(out.bound_violations), 0));
  }
  return c;
}

Checks criterion_thm3(const Options& o) {
  const Thm3Outcome out = run_thm3(SeedRange{o.seeds, o.seed_base}, 1000000, 1e3);
  return {check_within("log-log slope", out.fit.slope, kThm3SlopeLo, kThm3SlopeHi)};
}

Checks criterion_thm4(const Options& o) {
  const Thm4Outcome out = run_thm4(SeedRange{o.seeds, o.seed_base}, 32.0);
  Checks c{check_within("stages", static_cast<double>(out.stages.size()), kStages, kStages)};
  for (std::size_t k = 0; k < out.stages.size(); ++k)
    c.push_back(check_at_most("stage " + std::to_string(k + 1) + " gap / eps_k",
                              out.stages[k].mean_gap / out.stages[k].eps, kStageGapRatio));
  return c;
}

Checks criterion_lemma1(const Options& o) {
  const RecursionOutcome out = run_lemma1(200, 500, 0.1, 0.01, o.seed_base);
  return {check_at_most("violation rate", out.report.violation_rate, kRecursionRate),
          check_within("replicates", static_cast<double>(out.replicates), 200, 200)};
}

Checks criterion_thm5(const Options& o) {
  Checks c;
  const double e2 = kEps * kEps;
  c.push_back(check_at_most("strongly concave kappa", saddle_bench(false).problem.kappa(),
                            kKappaMax));
  for (bool dual_pl : {false, true}) {
    for (bool pdsm : {true, false}) {
      const Thm5Outcome out = run_thm5(dual_pl, pdsm, SeedRange{o.seeds, o.seed_base}, kEps);
      const std::string name = std::string(dual_pl ? "dual-pl" : "strongly concave") + " " +
                               (pdsm ? "pdsm" : "pdada(adam)");
      c.push_back(check_at_most(name + " mean avg grad norm^2", out.mean_avg_grad, e2));
      c.push_back(check_at_most(name + " mean avg pair error", out.mean_avg_pair,
                                kPairFactor * e2));
      c.push_back(check_at_most(name + " scale bound violations",
                                static_cast<double>(out.bound_violations), 0));
    }
  }
  return c;
}

Checks criterion_lemma10(const Options& o) {
  Checks c;
  for (int k : {1, 5, 20}) {
    const NeumannOutcome out = run_lemma10(k, kNeumannDraws, o.seed_base);
    const std::string name = "k=" + std::to_string(k);
    c.push_back(check_at_most(name + " bias", out.report.measured,
                              kNeumannBiasFactor * out.report.bound));
    c.push_back(check_at_most(name + " |monte carlo - enumeration|",
                              std::abs(out.report.measured - out.report.exact),
                              kNeumannSe * out.report.standard_error + kRoundoff));
  }
  return c;
}

Checks criterion_bilevel(const Options& o) {
  Checks c;
  const double e2 = kEps * kEps;
  for (bool smb : {true, false}) {
    const SeedRange seeds{o.seeds, o.seed_base};
    const BilevelOutcome out = smb ? run_smb(seeds, kEps) : run_sbma(seeds, kEps);
    const std::string name = smb ? "smb" : "sbma";
    c.push_back(check_at_most(name + " mean avg grad norm^2", out.mean_avg_grad, e2));
    c.push_back(check_at_most(name + " mean avg tracking error", out.mean_avg_delta,
                              kBilevelDeltaFactor * e2));
    c.push_back(check_at_least(name + " fraction final within eps", out.final_within_eps,
                               kFinalWithinEps));
  }
  return c;
}

Checks criterion_auc(const Options& o) {
  const AucOutcome out = run_auc(SeedRange{kAucSeeds, o.seed_base}, kAucCalls);
  Checks c{check_at_least("logistic fit auc", out.logistic_auc, kLogisticAuc),
           check_at_most("oracle calls", static_cast<double>(out.oracle_calls),
                         static_cast<double>(kAucCalls)),
           check_within("seeds", static_cast<double>(out.seed_auc.size()), kAucSeeds, kAucSeeds)};
  for (std::size_t i = 0; i < out.seed_auc.size(); ++i)
    c.push_back(check_at_least("seed " + std::to_string(i) + " auc", out.seed_auc[i], kAucTarget));
  return c;
}

Checks criterion_reddi(const Options& o) {
  require_config(!o.fixture.empty(), "criterion 9 needs --fixture");
  const ReddiFixture f = reddi_fixture_from_json(read_json_file(o.fixture));
  const ReddiOutcome out = run_reddi(f, kDriftSeeds, kDriftSteps, o.seed_base);
  return {
      check_at_least("small-momentum exact drift lower end", out.small_exact.lower, 0),
      check_at_most("large-momentum exact drift upper end", out.large_exact.upper, 0),
      check_at_least("small-momentum empirical drift / SE",
                     out.small_empirical.mean / out.small_empirical.standard_error, kDriftSe),
      check_at_most("large-momentum empirical drift / SE",
                    out.large_empirical.mean / out.large_empirical.standard_error, -kDriftSe),
      check_at_least("large beta1", f.beta1_large, 0.99),
  };
}

Checks criterion_identities(const Options& o) {
  Checks c;
  const IdentityOutcome two = shb_two_form_identity(o.seed_base);
  c.push_back(check_at_most(two.name, two.deviation, kShbTol));
  const IdentityOutcome pd = pdsm_pdada_shb_identity(o.seed_base);
  c.push_back(check_at_most(pd.name, pd.deviation, kIdentityTol));
  for (ScalerTag tag : kAllScalerTags) {
    const IdentityOutcome one = asa_gamma_one_sgd_identity(tag, o.seed_base);
    c.push_back(check_at_most(one.name, one.deviation, kIdentityTol));
  }
  for (const GradcheckOutcome& g : gradcheck_all(o.seed_base))
    c.push_back(check_at_most("gradcheck " + g.name, g.max_rel_error, kGradcheckTol));
  return c;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Checks(const Options&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semaopt acceptance criteria"};
  Options o;
  std::vector<int> only;
  std::string write_fixture;
  app.add_option("--fixture", o.fixture, "Pinned drift fixture (JSON)");
  app.add_option("--seeds", o.seeds, "Seeds per experiment")->check(CLI::PositiveNumber);
  app.add_option("--only", only, "Run only these criteria")->check(CLI::Range(1, 10));
  app.add_option("--write-fixture", write_fixture,
                 "Run the drift grid search, write the fixture and exit");
  CLI11_PARSE(app, argc, argv);

  try {
    o.seed_base = seed_base_from_env();
    if (!write_fixture.empty()) {
      write_json_file(write_fixture, reddi_fixture_to_json(search_reddi_fixture()));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  const std::vector<Criterion> criteria = {
      {1, "thm2", criterion_thm2},         {2, "thm3", criterion_thm3},
      {3, "thm4", criterion_thm4},         {4, "lemma1", criterion_lemma1},
      {5, "thm5", criterion_thm5},         {6, "lemma10", criterion_lemma10},
      {7, "thm6-7", criterion_bilevel},    {8, "auc", criterion_auc},
      {9, "reddi-drift", criterion_reddi}, {10, "identities", criterion_identities}};
  const std::set<int> selected(only.begin(), only.end());

  bool all = true;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    bool passed = true;
    std::string error;
    try {
      const Checks checks = c.run(o);
      for (const VerifyCheck& k : checks) {
        std::cout << "  [" << c.id << "] " << k.describe() << "\n";
        passed = passed && k.passed;
      }
    } catch (const std::exception& e) {
      passed = false;
      error = e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (passed ? "PASS" : "FAIL") << " " << c.id << " " << c.name;
    if (!error.empty()) std::cout << " (error: " << error << ")";
    std::cout << " [" << format_double(std::round(secs * 10) / 10) << " s]" << std::endl;
    all = all && passed;
  }
  return all ? 0 : 1;
}
