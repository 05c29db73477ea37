#include "semaopt/harness/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <mutex>
#include <thread>

#include "semaopt/harness/csv.hpp"
#include "semaopt/harness/rate_fit.hpp"

namespace semaopt {

namespace {

constexpr std::uint64_t kRunStream = 0x72756e;

ScaleBounds scale_bounds(const SolverSpec& s) {
  if (s.scaler.tag == ScalerTag::SHB || s.scaler.tag == ScalerTag::AdaBound)
    return effective_bounds(s.scaler, 1.0, s.g0);
  if (!s.g_bound)
    throw ConfigError("solver.g_bound is required for the theorem schedule of scaler '" +
                      std::string(to_string(s.scaler.tag)) + "'");
  return effective_bounds(s.scaler, *s.g_bound, s.g0);
}

MinimizeMeta minimize_meta(const RunSpec& spec, const PreparedProblem& p) {
  require_config(p.l_f > 0.0, "problem '" + std::string(to_string(spec.problem.kind)) +
                                  "' has no theorem schedule; use schedule.kind = explicit");
  MinimizeMeta meta;
  meta.sigma2 = p.oracle->variance().sigma2;
  meta.c = p.oracle->variance().c;
  meta.l_f = p.l_f;
  meta.delta_f = p.objective(p.x0) - p.f_star;
  Rng draws(spec.problem.start_seed, 0x643030);
  meta.delta_0 = estimate_delta0(*p.oracle, p.x0, 100, draws);
  return meta;
}

void check_consistency(const Trajectory& tr) {
  if (tr.records().size() != tr.steps()) return;
  double sg = 0.0, sd = 0.0, sy = 0.0;
  std::size_t ng = 0, nd = 0, ny = 0;
  for (const TrajectoryRecord& r : tr.records()) {
    if (!std::isnan(r.grad_norm_sq)) sg += r.grad_norm_sq, ++ng;
    if (!std::isnan(r.delta)) sd += r.delta, ++nd;
    if (!std::isnan(r.delta_y)) sy += r.delta_y, ++ny;
  }
  auto close = [](double sum, std::size_t n, double streaming) {
    if (n == 0) return std::isnan(streaming);
    const double recomputed = sum / static_cast<double>(n);
    return std::abs(recomputed - streaming) <= 1e-9 * std::max(1.0, std::abs(streaming));
  };
  if (!close(sg, ng, tr.avg_grad_norm_sq()) || !close(sd, nd, tr.avg_delta()) ||
      !close(sy, ny, tr.avg_delta_y()))
    throw InternalError("summary averages disagree with the raw trajectory");
}

void summarize(SeedSummary& s, const Trajectory& tr, const RunSpec& spec) {
  s.steps = tr.steps();
  s.avg_grad_norm_sq = tr.avg_grad_norm_sq();
  s.avg_delta = tr.avg_delta();
  s.avg_delta_y = tr.avg_delta_y();
  if (!tr.records().empty()) s.final_grad_norm_sq = tr.records().back().grad_norm_sq;
  std::vector<double> t;
  std::vector<double> v;
  for (const TrajectoryRecord& r : tr.records()) {
    if (!(r.avg_grad_norm_sq > 0.0)) continue;
    t.push_back(static_cast<double>(r.t + 1));
    v.push_back(r.avg_grad_norm_sq);
  }
  const double t_max = spec.fit_t_max > 0.0 ? spec.fit_t_max : static_cast<double>(tr.steps());
  std::size_t in_range = 0;
  for (double x : t)
    if (x >= spec.fit_t_min && x <= t_max) ++in_range;
  if (in_range >= 10) {
    const RateFit fit = fit_rate(t, v, spec.fit_t_min, t_max);
    s.slope = fit.slope;
    s.slope_ci_lower = fit.ci_lower;
    s.slope_ci_upper = fit.ci_upper;
  }
}

std::vector<std::string> summary_row(const std::string& label, const SeedSummary& s) {
  return {label,
          std::to_string(s.steps),
          format_double(s.final_grad_norm_sq),
          format_double(s.avg_grad_norm_sq),
          format_double(s.avg_delta),
          format_double(s.avg_delta_y),
          format_double(s.slope),
          format_double(s.slope_ci_lower),
          format_double(s.slope_ci_upper),
          s.diverged ? "1" : "0"};
}

double mean_of(const std::vector<SeedSummary>& seeds, double SeedSummary::*field) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const SeedSummary& s : seeds) {
    if (std::isnan(s.*field)) continue;
    sum += s.*field;
    ++n;
  }
  return n == 0 ? kNotAvailable : sum / static_cast<double>(n);
}

}  // namespace

ResolvedSchedule resolve_schedule(const RunSpec& spec, const PreparedProblem& p) {
  ResolvedSchedule out;
  const ScheduleSpec& sc = spec.schedule;
  const SolverSpec& sv = spec.solver;
  const bool theorem = sc.kind == "theorem";
  switch (p.type) {
    case SolverType::Minimize: {
      if (sv.mode == "stagewise") {
        require_config(theorem, "the stagewise solver takes the theorem schedule");
        require_config(p.mu.has_value(), "stagewise runs need a PL problem");
        const MinimizeMeta meta = minimize_meta(spec, p);
        const double eps0 = std::max(*meta.delta_f, *meta.delta_0);
        const double eps = sc.ratio > 0.0 ? eps0 / sc.ratio : sc.eps;
        out.minimize = make_schedule_stagewise(*p.mu, eps, meta, scale_bounds(sv));
      } else if (theorem) {
        out.minimize = make_schedule_constant(sc.eps, minimize_meta(spec, p), scale_bounds(sv));
      } else if (sc.kind == "decreasing") {
        out.minimize = make_schedule_decreasing(minimize_meta(spec, p), scale_bounds(sv), sc.T);
      } else {
        out.minimize = make_schedule_explicit(sc.gamma, sc.eta, sc.T);
      }
      out.total_steps = out.minimize.total_steps();
      break;
    }
    case SolverType::MinMax: {
      if (theorem) {
        require_config(p.minmax_meta.has_value(),
                       "problem '" + std::string(to_string(spec.problem.kind)) +
                           "' has no theorem schedule; use schedule.kind = explicit");
        const ScaleBounds bounds =
            sv.mode == "pdsm" ? ScaleBounds{1.0, 1.0} : scale_bounds(sv);
        out.minmax = make_minmax_schedule(sc.eps, *p.minmax_meta, bounds);
      } else {
        out.minmax.gamma = sc.gamma;
        out.minmax.eta_x = sc.eta;
        out.minmax.eta_y = sc.eta_y;
        out.minmax.T = sc.T;
      }
      out.minmax.pdsm = sv.mode == "pdsm";
      out.minmax.scaler = sv.scaler;
      out.minmax.g0 = out.minmax.pdsm ? 0.0 : sv.g0;
      out.minmax.dense_limit = spec.dense_limit;
      out.minmax.validate();
      out.total_steps = out.minmax.T + 1;
      break;
    }
    case SolverType::Bilevel: {
      const BilevelModel& model = *p.bilevel;
      const BilevelConstants& c = model.oracle.constants;
      const double delta_f = p.objective(p.x0) - p.f_star;
      Rng draws(spec.problem.start_seed, 0x643030);
      if (sv.mode == "smb") {
        if (theorem) {
          SmbConfig probe;
          probe.k = std::max(1, static_cast<int>(std::ceil(smb_k_bound(c, sc.eps))));
          const double dz0 = estimate_delta_z0(model, probe, p.x0, p.y0, 1000, draws);
          out.smb = make_smb_schedule(sc.eps, c, delta_f, dz0).cfg;
        } else {
          out.smb.gamma = sc.gamma;
          out.smb.eta_x = sc.eta;
          out.smb.eta_y = sc.eta_y;
          out.smb.T = sc.T;
          out.smb.k = sc.k;
        }
        out.smb.exact_inverse = sv.exact_inverse;
        out.smb.exact_lower = sv.exact_lower;
        out.smb.dense_limit = spec.dense_limit;
        out.total_steps = out.smb.T + 1;
      } else {
        if (theorem) {
          SbmaInit init = estimate_sbma_init(model, p.x0, p.y0, 1, 1000, draws);
          init.delta_f = delta_f;
          SbmaSchedule s = make_sbma_schedule(sc.eps, c, init);
          init = estimate_sbma_init(model, p.x0, p.y0, s.cfg.k, 1000, draws);
          init.delta_f = delta_f;
          out.sbma = make_sbma_schedule(sc.eps, c, init).cfg;
        } else {
          out.sbma.gamma = sc.gamma;
          out.sbma.eta_x = sc.eta;
          out.sbma.eta_y = sc.eta_y;
          out.sbma.T = sc.T;
          out.sbma.k = sc.k;
          out.sbma.l_gy = c.l_gy;
          out.sbma.lambda = c.lambda;
          out.sbma.c_fy = c.c_fy;
          out.sbma.c_gxy = c.c_gxy;
        }
        out.sbma.exact_lower = sv.exact_lower;
        out.sbma.dense_limit = spec.dense_limit;
        out.total_steps = out.sbma.T + 1;
      }
      break;
    }
  }
  return out;
}

SeedRun run_seed(const RunSpec& spec, const PreparedProblem& p, const ResolvedSchedule& sched,
                 std::uint64_t seed) {
  SeedRun out;
  out.summary.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  Rng rng(seed, kRunStream);
  try {
    switch (p.type) {
      case SolverType::Minimize:
        if (spec.solver.mode == "stagewise") {
          out.trajectory = stagewise_run(*p.oracle, p.x0, spec.solver.scaler, spec.solver.g0,
                                         sched.minimize, rng, p.objective, spec.solver.carry_u)
                               .trajectory;
        } else {
          AsaOptions opts;
          opts.objective = p.objective;
          opts.dense_limit = spec.dense_limit;
          out.trajectory = asa_run(*p.oracle, p.x0, spec.solver.scaler, spec.solver.g0,
                                   sched.minimize, rng, opts)
                               .trajectory;
        }
        break;
      case SolverType::MinMax:
        out.trajectory = pd_run(*p.minmax, sched.minmax, p.x0, p.y0, rng).trajectory;
        break;
      case SolverType::Bilevel:
        out.trajectory = spec.solver.mode == "smb"
                             ? smb_run(*p.bilevel, sched.smb, p.x0, p.y0, rng).trajectory
                             : sbma_run(*p.bilevel, sched.sbma, p.x0, p.y0, rng).trajectory;
        break;
    }
  } catch (const DivergenceError& e) {
    out.trajectory = e.trajectory();
    out.summary.diverged = true;
    out.summary.diverged_step = e.step();
  }
  check_consistency(out.trajectory);
  summarize(out.summary, out.trajectory, spec);
  out.summary.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::string summary_csv(const RunSummary& summary) {
  std::vector<std::vector<std::string>> rows;
  for (const SeedSummary& s : summary.seeds) rows.push_back(summary_row(std::to_string(s.seed), s));
  rows.push_back(summary_row("mean", summary.mean));
  return csv_table({"seed", "steps", "final_grad_norm_sq", "avg_grad_norm_sq", "avg_delta_t",
                    "avg_delta_y_t", "rate_slope", "rate_ci_lower", "rate_ci_upper", "diverged"},
                   rows);
}

RunSummary run_spec(const RunSpec& spec, unsigned jobs, bool write_files) {
  require_config(!spec.seeds.empty(), "seeds must be nonempty");
  const PreparedProblem problem = prepare_problem(spec.problem);
  RunSummary out;
  out.schedule = resolve_schedule(spec, problem);

  std::vector<std::uint64_t> seeds = spec.seeds;
  std::sort(seeds.begin(), seeds.end());
  seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());

  if (write_files) {
    std::error_code ec;
    std::filesystem::create_directories(spec.output, ec);
    if (ec) throw ConfigError("cannot create output directory '" + spec.output + "'");
  }

  std::vector<SeedSummary> results(seeds.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds.size()) return;
      try {
        const SeedRun run = run_seed(spec, problem, out.schedule, seeds[i]);
        results[i] = run.summary;
        if (write_files)
          write_text_file(spec.output + "/seed_" + std::to_string(seeds[i]) + ".csv",
                          trajectory_csv(run.trajectory));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(seeds.size());
      }
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(seeds.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  out.seeds = std::move(results);
  SeedSummary& m = out.mean;
  m.steps = out.schedule.total_steps;
  m.final_grad_norm_sq = mean_of(out.seeds, &SeedSummary::final_grad_norm_sq);
  m.avg_grad_norm_sq = mean_of(out.seeds, &SeedSummary::avg_grad_norm_sq);
  m.avg_delta = mean_of(out.seeds, &SeedSummary::avg_delta);
  m.avg_delta_y = mean_of(out.seeds, &SeedSummary::avg_delta_y);
  m.slope = mean_of(out.seeds, &SeedSummary::slope);
  m.slope_ci_lower = mean_of(out.seeds, &SeedSummary::slope_ci_lower);
  m.slope_ci_upper = mean_of(out.seeds, &SeedSummary::slope_ci_upper);
  for (const SeedSummary& s : out.seeds) {
    m.diverged = m.diverged || s.diverged;
    m.wall_seconds += s.wall_seconds;
  }

  if (write_files) {
    write_text_file(spec.output + "/summary.csv", summary_csv(out));
    write_text_file(spec.output + "/spec.json", run_spec_to_json(spec).dump(2) + "\n");
    std::vector<std::vector<std::string>> timing;
    for (const SeedSummary& s : out.seeds)
      timing.push_back({std::to_string(s.seed), format_double(s.wall_seconds)});
    write_text_file(spec.output + "/timing.csv", csv_table({"seed", "wall_seconds"}, timing));
  }
  return out;
}

}  // namespace semaopt
