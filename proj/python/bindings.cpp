#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "semaopt/harness/config.hpp"
#include "semaopt/harness/rate_fit.hpp"
#include "semaopt/harness/registry.hpp"
#include "semaopt/harness/runner.hpp"
#include "semaopt/harness/verify.hpp"
#include "semaopt/problems/reddi_drift.hpp"
#include "semaopt/scalers.hpp"
#include "semaopt/sema.hpp"

namespace py = pybind11;
using namespace semaopt;

namespace {

py::dict seed_summary_dict(const SeedSummary& s) {
  py::dict d;
  d["seed"] = s.seed;
  d["steps"] = s.steps;
  d["final_grad_norm_sq"] = s.final_grad_norm_sq;
  d["avg_grad_norm_sq"] = s.avg_grad_norm_sq;
  d["avg_delta"] = s.avg_delta;
  d["avg_delta_y"] = s.avg_delta_y;
  d["slope"] = s.slope;
  d["slope_ci"] = py::make_tuple(s.slope_ci_lower, s.slope_ci_upper);
  d["diverged"] = s.diverged;
  return d;
}

py::dict trajectory_dict(const Trajectory& tr) {
  const auto& recs = tr.records();
  const Index n = static_cast<Index>(recs.size());
  Vector t(n), g(n), delta(n), delta_y(n), obj(n), avg_g(n);
  for (Index i = 0; i < n; ++i) {
    const TrajectoryRecord& r = recs[static_cast<std::size_t>(i)];
    t[i] = static_cast<double>(r.t);
    g[i] = r.grad_norm_sq;
    delta[i] = r.delta;
    delta_y[i] = r.delta_y;
    obj[i] = r.objective;
    avg_g[i] = r.avg_grad_norm_sq;
  }
  py::dict d;
  d["t"] = t;
  d["grad_norm_sq"] = g;
  d["delta"] = delta;
  d["delta_y"] = delta_y;
  d["objective"] = obj;
  d["avg_grad_norm_sq"] = avg_g;
  return d;
}

template <typename F>
auto translate(F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    throw py::value_error(e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Moving-average adaptive stochastic optimization";

  m.def("problems", [] {
    py::list out;
    for (const ProblemInfo& p : problem_list()) {
      py::dict d;
      d["name"] = std::string(to_string(p.kind));
      d["solver"] = to_string(p.solver);
      d["summary"] = std::string(p.summary);
      out.append(d);
    }
    return out;
  });

  m.def(
      "fixture_json",
      [](const std::string& name, std::uint64_t seed) {
        return translate([&] {
          ProblemSpec spec;
          spec.kind = parse_problem_kind(name);
          spec.seed = seed;
          return instance_to_fixture(build_problem(spec)).dump();
        });
      },
      py::arg("problem"), py::arg("seed") = 1);

  m.def(
      "run_json",
      [](const std::string& spec_json, unsigned jobs, bool write_files) {
        return translate([&] {
          const nlohmann::json j = nlohmann::json::parse(spec_json);
          const RunSpec spec = run_spec_from_json(j);
          RunSummary summary;
          {
            py::gil_scoped_release release;
            summary = run_spec(spec, jobs, write_files);
          }
          py::dict d;
          py::list seeds;
          for (const SeedSummary& s : summary.seeds) seeds.append(seed_summary_dict(s));
          d["seeds"] = seeds;
          d["mean"] = seed_summary_dict(summary.mean);
          d["total_steps"] = summary.schedule.total_steps;
          return d;
        });
      },
      py::arg("spec_json"), py::arg("jobs") = 1, py::arg("write_files") = false);

  m.def(
      "trajectory_json",
      [](const std::string& spec_json, std::uint64_t seed) {
        return translate([&] {
          const RunSpec spec = run_spec_from_json(nlohmann::json::parse(spec_json));
          const PreparedProblem problem = prepare_problem(spec.problem);
          const ResolvedSchedule sched = resolve_schedule(spec, problem);
          SeedRun run;
          {
            py::gil_scoped_release release;
            run = run_seed(spec, problem, sched, seed);
          }
          py::dict d = trajectory_dict(run.trajectory);
          d["summary"] = seed_summary_dict(run.summary);
          return d;
        });
      },
      py::arg("spec_json"), py::arg("seed") = 0);

  m.def("verify_suites", [] {
    std::vector<std::string> out;
    for (std::string_view s : verify_suites()) out.emplace_back(s);
    return out;
  });

  m.def(
      "verify",
      [](const std::string& suite, std::size_t seeds, std::uint64_t seed_base) {
        return translate([&] {
          VerifyReport report;
          {
            py::gil_scoped_release release;
            report = run_verify_suite(suite, VerifyOptions{seeds, seed_base});
          }
          py::list checks;
          for (const VerifyCheck& c : report.checks) {
            py::dict d;
            d["name"] = c.name;
            d["value"] = c.value;
            d["lower"] = c.lower;
            d["upper"] = c.upper;
            d["passed"] = c.passed;
            checks.append(d);
          }
          py::dict d;
          d["suite"] = report.suite;
          d["passed"] = report.passed();
          d["checks"] = checks;
          return d;
        });
      },
      py::arg("suite"), py::arg("seeds") = 20, py::arg("seed_base") = 0);

  m.def(
      "fit_rate",
      [](const std::vector<double>& t, const std::vector<double>& values, double t_min,
         double t_max, int resamples, std::uint64_t seed) {
        return translate([&] {
          const RateFit f = semaopt::fit_rate(t, values, t_min, t_max, resamples, seed);
          py::dict d;
          d["slope"] = f.slope;
          d["intercept"] = f.intercept;
          d["ci"] = py::make_tuple(f.ci_lower, f.ci_upper);
          d["points"] = f.points;
          return d;
        });
      },
      py::arg("t"), py::arg("values"), py::arg("t_min"), py::arg("t_max"),
      py::arg("resamples") = 200, py::arg("seed") = 0x726174);

  m.def(
      "effective_bounds",
      [](const std::string& tag, double g_bound, double g0, double clip_lower, double clip_upper) {
        return translate([&] {
          ScalerKind kind;
          kind.tag = parse_scaler_tag(tag);
          kind.clip_lower = clip_lower;
          kind.clip_upper = clip_upper;
          const ScaleBounds b = semaopt::effective_bounds(kind, g_bound, g0);
          return py::make_tuple(b.lower, b.upper);
        });
      },
      py::arg("scaler"), py::arg("g_bound") = 1.0, py::arg("g0") = 0.0,
      py::arg("clip_lower") = 0.0, py::arg("clip_upper") = 0.0);

  m.def(
      "scaler_steps",
      [](const std::string& tag, const Matrix& samples, double beta2, double g0, double gamma,
         double clip_lower, double clip_upper) {
        return translate([&] {
          ScalerKind kind;
          kind.tag = parse_scaler_tag(tag);
          kind.beta2 = beta2;
          kind.clip_lower = clip_lower;
          kind.clip_upper = clip_upper;
          ScalerState state = make_scaler_state(kind, samples.cols(), g0);
          Matrix scales(samples.rows(), samples.cols());
          Vector v = Vector::Zero(samples.cols());
          for (Index t = 0; t < samples.rows(); ++t) {
            const Vector g = samples.row(t).transpose();
            v = (1.0 - gamma) * v + gamma * g;
            scaler_update(state, kind, g, v);
            scales.row(t) = step_scale(state).transpose();
          }
          return scales;
        });
      },
      py::arg("scaler"), py::arg("samples"), py::arg("beta2") = 0.999, py::arg("g0") = 0.0,
      py::arg("gamma") = 0.1, py::arg("clip_lower") = 0.0, py::arg("clip_upper") = 0.0,
      "Step scale after each row of `samples` is fed to the second-moment rule.");

  m.def(
      "reddi_drift",
      [](double c, double p, double beta1, double beta2, double eta, double g0, int horizon) {
        return translate([&] {
          const DriftInterval d = make_reddi_drift(c, p).drift(beta1, beta2, eta, g0, horizon);
          return py::make_tuple(d.lower, d.upper);
        });
      },
      py::arg("c"), py::arg("p"), py::arg("beta1"), py::arg("beta2"), py::arg("eta"),
      py::arg("g0") = 0.0, py::arg("horizon") = 20);

  m.def(
      "neumann_bias",
      [](const Matrix& hess, int k, double c_gyy, double lambda, std::size_t draws,
         std::uint64_t seed) {
        return translate([&] {
          NeumannConfig cfg;
          cfg.k = k;
          cfg.c_gyy = c_gyy;
          cfg.lambda = lambda;
          Rng rng(seed);
          const NeumannBiasReport r = neumann_bias_check(hess, cfg, draws, rng);
          py::dict d;
          d["measured"] = r.measured;
          d["exact"] = r.exact;
          d["bound"] = r.bound;
          d["standard_error"] = r.standard_error;
          return d;
        });
      },
      py::arg("hess"), py::arg("k"), py::arg("c_gyy"), py::arg("lambda_"), py::arg("draws"),
      py::arg("seed") = 0);
}
