#include "semaopt/harness/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "semaopt/harness/csv.hpp"
#include "semaopt/harness/experiments.hpp"
#include "semaopt/scalers.hpp"

namespace semaopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void add_thm2(VerifyReport& r, const VerifyOptions& o) {
  for (ScalerTag tag : kAllScalerTags) {
    const Thm2Outcome out = run_thm2(tag, SeedRange{o.seeds, o.seed_base});
    const double e2 = out.eps * out.eps;
    const std::string name(to_string(tag));
    r.checks.push_back(check_at_most(name + " avg grad norm^2", out.mean_avg_grad, e2));
    r.checks.push_back(check_at_most(name + " avg tracking error", out.mean_avg_delta, 2.0 * e2));
    r.checks.push_back(check_at_most(name + " scale bound violations",
                                     static_cast<double>(out.bound_violations), 0.0));
  }
}

void add_thm5(VerifyReport& r, const VerifyOptions& o) {
  for (bool dual_pl : {false, true}) {
    for (bool pdsm : {true, false}) {
      const Thm5Outcome out = run_thm5(dual_pl, pdsm, SeedRange{o.seeds, o.seed_base});
      const double e2 = out.eps * out.eps;
      const std::string name = std::string(dual_pl ? "dual-pl" : "strongly concave") + " " +
                               (pdsm ? "pdsm" : "pdada(adam)");
      r.checks.push_back(check_at_most(name + " avg grad norm^2", out.mean_avg_grad, e2));
      r.checks.push_back(check_at_most(name + " avg pair error", out.mean_avg_pair, 5.0 * e2));
      r.checks.push_back(check_at_most(name + " scale bound violations",
                                       static_cast<double>(out.bound_violations), 0.0));
    }
  }
}

void add_thm6(VerifyReport& r, const VerifyOptions& o) {
  for (bool smb : {true, false}) {
    const SeedRange seeds{o.seeds, o.seed_base};
    const BilevelOutcome out = smb ? run_smb(seeds) : run_sbma(seeds);
    const double e2 = out.eps * out.eps;
    const std::string name = smb ? "smb" : "sbma";
    r.checks.push_back(check_at_most(name + " avg grad norm^2", out.mean_avg_grad, e2));
    r.checks.push_back(check_at_most(name + " avg tracking error", out.mean_avg_delta, 5.0 * e2));
    r.checks.push_back(
        check_at_least(name + " final estimate within eps", out.final_within_eps, 0.9));
  }
}

void add_scaler_bounds(VerifyReport& r, const VerifyOptions& o) {
  const Index dim = 10;
  const double g_bound = 5.0;
  for (ScalerTag tag : kAllScalerTags) {
    ScalerKind kind;
    kind.tag = tag;
    if (tag == ScalerTag::AdaBound) {
      kind.clip_lower = 0.5;
      kind.clip_upper = 2.0;
    }
    const double g0 = tag == ScalerTag::AdaBound ? 0.0 : 1.0;
    const ScaleBounds b = effective_bounds(kind, g_bound, g0);
    ScalerState state = make_scaler_state(kind, dim, g0);
    Rng rng(o.seed_base, 0x73626e64);
    // Samples with ||g||_inf <= G, and ||g||_2 <= G for Adam+.
    const double radius = tag == ScalerTag::AdamPlus ? g_bound / std::sqrt(double(dim)) : g_bound;
    Vector v = Vector::Zero(dim);
    std::size_t violations = 0;
    for (int t = 0; t < 10000; ++t) {
      Vector g(dim);
      for (Index i = 0; i < dim; ++i) g[i] = radius * (2.0 * rng.uniform() - 1.0);
      v = 0.9 * v + 0.1 * g;
      scaler_update(state, kind, g, v);
      const Vector s = step_scale(state);
      if (s.minCoeff() < b.lower * (1.0 - 1e-12) || s.maxCoeff() > b.upper * (1.0 + 1e-12))
        ++violations;
    }
    r.checks.push_back(check_at_most(std::string(to_string(tag)) + " scale bound violations",
                                     static_cast<double>(violations), 0.0));
  }
}

}  // namespace

double VerifyCheck::margin() const {
  return std::min(value - lower, upper - value);
}

std::string VerifyCheck::describe() const {
  std::ostringstream s;
  s << (passed ? "PASS " : "FAIL ") << name << ": " << format_double(value);
  if (std::isfinite(lower) && std::isfinite(upper))
    s << " in [" << format_double(lower) << ", " << format_double(upper) << "]";
  else if (std::isfinite(upper))
    s << " <= " << format_double(upper);
  else
    s << " >= " << format_double(lower);
  s << " (margin " << format_double(margin()) << ")";
  return s.str();
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const VerifyCheck& c) { return c.passed; });
}

VerifyCheck check_at_most(std::string name, double value, double upper) {
  return VerifyCheck{std::move(name), value, -kInf, upper, value <= upper};
}

VerifyCheck check_at_least(std::string name, double value, double lower) {
  return VerifyCheck{std::move(name), value, lower, kInf, value >= lower};
}

VerifyCheck check_within(std::string name, double value, double lower, double upper) {
  return VerifyCheck{std::move(name), value, lower, upper, value >= lower && value <= upper};
}

const std::vector<std::string_view>& verify_suites() {
  static const std::vector<std::string_view> suites = {
      "lemma1", "lemma7",     "lemma10",       "thm2",      "thm3",       "thm4",
      "thm5",   "thm6",       "shb-equiv",     "scaler-bounds", "gradcheck", "reddi-drift"};
  return suites;
}

VerifyReport run_verify_suite(std::string_view suite, const VerifyOptions& o) {
  require_config(o.seeds >= 1, "verify needs at least one seed");
  VerifyReport r;
  r.suite = std::string(suite);
  if (suite == "lemma1") {
    const RecursionOutcome out = run_lemma1(200, 500, 0.1, 0.01, o.seed_base);
    r.checks.push_back(check_at_most("violation rate", out.report.violation_rate, 0.05));
  } else if (suite == "lemma7") {
    for (bool dual_pl : {false, true}) {
      const RecursionOutcome out = run_lemma7(dual_pl, 200, 500, o.seed_base);
      r.checks.push_back(check_at_most(std::string(dual_pl ? "dual-pl" : "strongly concave") +
                                           " violation rate",
                                       out.report.violation_rate, 0.05));
    }
  } else if (suite == "lemma10") {
    for (int k : {1, 5, 20}) {
      const NeumannOutcome out = run_lemma10(k, 100000, o.seed_base);
      const std::string name = "k=" + std::to_string(k);
      r.checks.push_back(check_at_most(name + " bias", out.report.measured, 1.1 * out.report.bound));
      r.checks.push_back(check_at_most(name + " |monte carlo - enumeration|",
                                       std::abs(out.report.measured - out.report.exact),
                                       3.0 * out.report.standard_error + 1e-12));
    }
  } else if (suite == "thm2") {
    add_thm2(r, o);
  } else if (suite == "thm3") {
    const Thm3Outcome out = run_thm3(SeedRange{o.seeds, o.seed_base});
    r.checks.push_back(check_within("rate slope", out.fit.slope, -0.65, -0.35));
  } else if (suite == "thm4") {
    const Thm4Outcome out = run_thm4(SeedRange{o.seeds, o.seed_base});
    r.checks.push_back(check_within("stages", static_cast<double>(out.stages.size()), 5.0, 5.0));
    for (std::size_t k = 0; k < out.stages.size(); ++k)
      r.checks.push_back(check_at_most("stage " + std::to_string(k + 1) + " gap / eps_k",
                                       out.stages[k].mean_gap / out.stages[k].eps, 0.6));
  } else if (suite == "thm5") {
    add_thm5(r, o);
  } else if (suite == "thm6") {
    add_thm6(r, o);
  } else if (suite == "shb-equiv") {
    const IdentityOutcome two = shb_two_form_identity(o.seed_base);
    r.checks.push_back(check_at_most(two.name, two.deviation, 1e-10));
    const IdentityOutcome pd = pdsm_pdada_shb_identity(o.seed_base);
    r.checks.push_back(check_at_most(pd.name, pd.deviation, 1e-12));
    for (ScalerTag tag : kAllScalerTags) {
      const IdentityOutcome one = asa_gamma_one_sgd_identity(tag, o.seed_base);
      r.checks.push_back(check_at_most(one.name, one.deviation, 1e-12));
    }
  } else if (suite == "scaler-bounds") {
    add_scaler_bounds(r, o);
  } else if (suite == "gradcheck") {
    for (const GradcheckOutcome& g : gradcheck_all(o.seed_base))
      r.checks.push_back(check_at_most(g.name + " rel. error", g.max_rel_error, 1e-5));
  } else if (suite == "reddi-drift") {
    const ReddiFixture f = search_reddi_fixture();
    const ReddiOutcome out = run_reddi(f, 200, 10000, o.seed_base);
    r.checks.push_back(check_at_least("small-momentum drift lower bound", out.small_exact.lower, 0.0));
    r.checks.push_back(check_at_most("large-momentum drift upper bound", out.large_exact.upper, 0.0));
    r.checks.push_back(check_at_least("small-momentum empirical drift / SE",
                                      out.small_empirical.mean / out.small_empirical.standard_error,
                                      3.0));
    r.checks.push_back(check_at_most("large-momentum empirical drift / SE",
                                     out.large_empirical.mean / out.large_empirical.standard_error,
                                     -3.0));
  } else {
    throw ConfigError("unknown verify suite '" + std::string(suite) + "'");
  }
  return r;
}

}  // namespace semaopt
