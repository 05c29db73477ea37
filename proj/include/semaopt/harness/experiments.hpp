#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "semaopt/bilevel.hpp"
#include "semaopt/harness/rate_fit.hpp"
#include "semaopt/minimize.hpp"
#include "semaopt/minmax.hpp"
#include "semaopt/problems/auc.hpp"
#include "semaopt/problems/bilevel_quadratic.hpp"
#include "semaopt/problems/pl_least_squares.hpp"
#include "semaopt/problems/quadratic.hpp"
#include "semaopt/problems/reddi_drift.hpp"
#include "semaopt/problems/saddle.hpp"

#include <nlohmann/json.hpp>

namespace semaopt {

/// Pinned benchmark: quadratic(d=10, cond=10), Gaussian noise sigma=1 per
/// coordinate truncated at 4 sigma, x0 with F(x0) = 0.25.
struct QuadraticBench {
  QuadraticProblem problem;
  GradOracle oracle;
  Vector x0;
  double delta0 = 0.0;  ///< 100-draw estimate of E||O(x0) - grad F(x0)||^2
};
QuadraticBench quadratic_bench();

/// Scaler, G0 and scale bounds used on the quadratic benchmark.
struct ScalerSetup {
  ScalerKind kind;
  double g0 = 0.0;
  ScaleBounds bounds;
  double g_bound = 0.0;  ///< the G behind the bounds
  std::optional<double> adamplus_bound;
};
ScalerSetup quadratic_scaler_setup(ScalerTag tag);

struct SeedRange {
  std::size_t count = 20;
  std::uint64_t base = 0;
};

struct Thm2Outcome {
  double eps = 0.0;
  Schedule schedule;
  ScalerSetup setup;
  double mean_avg_grad = 0.0;
  double mean_avg_delta = 0.0;
  std::size_t bound_violations = 0;
};
Thm2Outcome run_thm2(ScalerTag tag, SeedRange seeds, double eps = 0.2);

struct Thm3Outcome {
  std::vector<double> t;
  std::vector<double> mean_avg_grad;
  RateFit fit;
  Schedule schedule;
};
Thm3Outcome run_thm3(SeedRange seeds, std::size_t T = 1000000, double t_min = 1e3);

struct Thm4Stage {
  double eps = 0.0;
  std::size_t T = 0;
  double mean_gap = 0.0;  ///< seed mean of F(x_{k+1}) - F*
};
struct Thm4Outcome {
  double eps0 = 0.0;
  double eps = 0.0;
  std::vector<Thm4Stage> stages;
};
/// pl_least_squares(d=10, r=6), sigma=0.3 per coordinate, F(x0) = 1, SHB.
Thm4Outcome run_thm4(SeedRange seeds, double ratio = 32.0);

struct RecursionOutcome {
  RecursionReport report;
  std::size_t replicates = 0;
};
/// Moving-average error recursion on the quadratic benchmark with the given gamma and eta.
RecursionOutcome run_lemma1(std::size_t replicates, std::size_t steps, double gamma, double eta,
                            std::uint64_t seed_base = 0);
/// Dual recursion with x frozen: contraction 1 - eta_y lambda/2 (strongly
/// concave) or 1 - eta_y lambda/4 (dual-side PL).
RecursionOutcome run_lemma7(bool dual_pl, std::size_t replicates, std::size_t steps,
                            std::uint64_t seed_base = 0);

struct NeumannOutcome {
  NeumannBiasReport report;
  double lambda = 0.0;
  double c_gyy = 0.0;
  int k = 0;
};
/// Diagonal H with spectrum {0.1, 2}.
NeumannOutcome run_lemma10(int k, std::size_t draws, std::uint64_t seed = 0);

/// Pinned saddle benchmarks with sigma^2 = 0.01 and y0 = 0.
struct SaddleBench {
  SaddleProblem problem;
  MinMaxModel model;
  Vector x0;
  Vector y0;
  double sigma2 = 0.0;
};
SaddleBench saddle_bench(bool dual_pl);

struct Thm5Outcome {
  double eps = 0.0;
  MinMaxConfig config;
  MinMaxMeta meta;
  ScaleBounds bounds;
  double mean_avg_grad = 0.0;
  double mean_avg_pair = 0.0;  ///< mean of avg(Delta_x + L_f^2 delta_y)
  std::size_t bound_violations = 0;
};
/// PDSM when `pdsm`, otherwise PDAda with the Adam scaler.
Thm5Outcome run_thm5(bool dual_pl, bool pdsm, SeedRange seeds, double eps = 0.2);

struct BilevelBench {
  BilevelQuadraticProblem problem;
  BilevelModel model;
  Vector x0;
  Vector y0;
};
/// bilevel_quadratic(d=5, d'=5, lambda=1).
BilevelBench bilevel_bench();

struct BilevelOutcome {
  double eps = 0.0;
  std::size_t T = 0;
  int k = 0;
  double gamma = 0.0;
  double eta_x = 0.0;
  double eta_y = 0.0;
  double mean_avg_grad = 0.0;
  double mean_avg_delta = 0.0;
  double final_within_eps = 0.0;  ///< fraction of seeds with ||z - grad F|| <= eps at the end
};
BilevelOutcome run_smb(SeedRange seeds, double eps = 0.2);
BilevelOutcome run_sbma(SeedRange seeds, double eps = 0.2);

struct AucOutcome {
  double logistic_auc = 0.0;
  double population_auc = 0.0;
  std::vector<double> seed_auc;
  std::size_t oracle_calls = 0;
};
/// PDSM on auc_minmax(200, 200, d=5, separation=3).
AucOutcome run_auc(SeedRange seeds, std::size_t oracle_calls = 100000);

struct ReddiFixture {
  double c = 0.0;
  double p = 0.0;
  double beta2 = 0.0;
  double beta1_small = 0.0;
  double beta1_large = 0.0;
  double eta = 0.0;
  int horizon = 0;
};
/// Grid search over (C, p, beta2) and returns the first certified point.
ReddiFixture search_reddi_fixture();
nlohmann::json reddi_fixture_to_json(const ReddiFixture& f);
ReddiFixture reddi_fixture_from_json(const nlohmann::json& j);

struct ReddiOutcome {
  DriftInterval small_exact;
  DriftInterval large_exact;
  DriftEstimate small_empirical;
  DriftEstimate large_empirical;
};
ReddiOutcome run_reddi(const ReddiFixture& f, std::size_t seeds = 200, std::size_t steps = 10000,
                       std::uint64_t seed_base = 0);

struct IdentityOutcome {
  std::string name;
  double deviation = 0.0;
};
IdentityOutcome shb_two_form_identity(std::uint64_t seed = 0);
IdentityOutcome pdsm_pdada_shb_identity(std::uint64_t seed = 0);
IdentityOutcome asa_gamma_one_sgd_identity(ScalerTag tag, std::uint64_t seed = 0);

struct GradcheckOutcome {
  std::string name;
  double max_rel_error = 0.0;
  std::size_t points = 0;
};
/// Central differences with step 1e-5 at 10 seeded points per handle.
std::vector<GradcheckOutcome> gradcheck_all(std::uint64_t seed = 0);

}  // namespace semaopt
