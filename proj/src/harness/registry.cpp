#include "semaopt/harness/registry.hpp"

#include <cmath>

namespace semaopt {

namespace {

double sigma_or(const ProblemSpec& spec, double fallback) { return spec.sigma.value_or(fallback); }

template <typename P>
Vector start_point(const P& p, const ProblemSpec& spec, Index dim) {
  if (spec.start_gap < 0.0) return Vector::Zero(dim);
  Rng rng(spec.start_seed, 0x783030);
  return p.point_with_gap(spec.start_gap, rng);
}

}  // namespace

const std::vector<ProblemInfo>& problem_list() {
  static const std::vector<ProblemInfo> list = {
      {ProblemKind::Quadratic, SolverType::Minimize,
       "strongly convex quadratic, eigenvalues log-spaced in [1, cond]"},
      {ProblemKind::PLLeastSquares, SolverType::Minimize,
       "rank-deficient least squares, PL with mu = 0.5"},
      {ProblemKind::ReddiDrift, SolverType::Minimize,
       "one-dimensional online problem with rare large gradients"},
      {ProblemKind::SaddleQuadratic, SolverType::MinMax,
       "bilinear saddle, strongly concave in y"},
      {ProblemKind::DualPLSaddle, SolverType::MinMax,
       "bilinear saddle, PL but not strongly concave in y"},
      {ProblemKind::AucMinMax, SolverType::MinMax,
       "square-loss AUC maximization on two Gaussian classes"},
      {ProblemKind::BilevelQuadratic, SolverType::Bilevel,
       "quadratic upper level over a strongly convex quadratic lower level"},
  };
  return list;
}

ProblemInstance build_problem(const ProblemSpec& spec) {
  if (spec.fixture) {
    const nlohmann::json j = read_json_file(*spec.fixture);
    const ProblemKind kind = fixture_kind(j);
    if (kind != spec.kind)
      throw ConfigError("fixture '" + *spec.fixture + "' holds a " + std::string(to_string(kind)) +
                        " instance, not " + std::string(to_string(spec.kind)));
    switch (kind) {
      case ProblemKind::Quadratic: return quadratic_from_fixture(j);
      case ProblemKind::PLLeastSquares: return pl_least_squares_from_fixture(j);
      case ProblemKind::ReddiDrift: return reddi_drift_from_fixture(j);
      case ProblemKind::SaddleQuadratic:
      case ProblemKind::DualPLSaddle: return saddle_from_fixture(j);
      case ProblemKind::AucMinMax: return auc_from_fixture(j);
      case ProblemKind::BilevelQuadratic: return bilevel_quadratic_from_fixture(j);
    }
  }
  switch (spec.kind) {
    case ProblemKind::Quadratic: return make_quadratic(spec.dim, spec.cond, spec.seed);
    case ProblemKind::PLLeastSquares: return make_pl_least_squares(spec.dim, spec.rank, spec.seed);
    case ProblemKind::ReddiDrift: return make_reddi_drift(spec.c, spec.p);
    case ProblemKind::SaddleQuadratic:
      return make_saddle_quadratic(spec.dim, spec.dim_y, spec.lambda, spec.seed);
    case ProblemKind::DualPLSaddle:
      return make_dual_pl_saddle(spec.dim, spec.dim_y, spec.lambda, spec.seed);
    case ProblemKind::AucMinMax:
      return make_auc_minmax(spec.n_pos, spec.n_neg, spec.dim, spec.separation, spec.seed);
    case ProblemKind::BilevelQuadratic: {
      BilevelQuadraticOptions opts;
      if (spec.sigma) opts.sigma2 = *spec.sigma * *spec.sigma;
      return make_bilevel_quadratic(spec.dim, spec.dim_y, spec.lambda, spec.seed, opts);
    }
  }
  throw ConfigError("unknown problem");
}

nlohmann::json instance_to_fixture(const ProblemInstance& instance) {
  return std::visit([](const auto& p) { return to_fixture(p); }, instance);
}

PreparedProblem prepare_problem(const ProblemSpec& spec) {
  PreparedProblem out;
  out.instance = build_problem(spec);
  out.type = solver_type_for(spec.kind);
  if (spec.oracle == "coordinate" && spec.kind != ProblemKind::Quadratic)
    throw ConfigError("the coordinate oracle is available for the quadratic problem only");
  if (auto* q = std::get_if<QuadraticProblem>(&out.instance)) {
    out.oracle = spec.oracle == "coordinate" ? q->oracle_coordinate()
                                             : q->oracle_gaussian(sigma_or(spec, 1.0), spec.clip);
    out.objective = [p = *q](const Vector& x) { return p.value(x); };
    out.f_star = q->f_star();
    out.l_f = q->l_f();
    out.mu = q->mu();
    out.x0 = start_point(*q, spec, q->dim());
  } else if (auto* pl = std::get_if<PlLeastSquaresProblem>(&out.instance)) {
    out.oracle = pl->oracle_gaussian(sigma_or(spec, 0.3));
    out.objective = [p = *pl](const Vector& x) { return p.value(x); };
    out.f_star = pl->f_star();
    out.l_f = pl->l_f();
    out.mu = pl->mu();
    out.x0 = start_point(*pl, spec, pl->dim());
  } else if (auto* r = std::get_if<ReddiDriftProblem>(&out.instance)) {
    out.oracle = r->oracle();
    const double m = r->mean_grad();
    out.objective = [m](const Vector& x) { return m * x[0]; };
    out.x0 = Vector::Zero(1);
  } else if (auto* s = std::get_if<SaddleProblem>(&out.instance)) {
    const double sigma = sigma_or(spec, 0.1);
    out.minmax = s->model(sigma * sigma);
    out.x0 = start_point(*s, spec, s->dim_x());
    out.y0 = Vector::Zero(s->dim_y());
    out.minmax_meta = s->meta(sigma * sigma, out.x0, out.y0);
    out.objective = [p = *s](const Vector& x) { return p.F(x); };
    out.f_star = s->f_star;
    out.l_f = s->l_F;
  } else if (auto* a = std::get_if<AucProblem>(&out.instance)) {
    out.minmax = a->model();
    out.x0 = Vector::Zero(a->dim_x());
    out.y0 = Vector::Zero(1);
    out.objective = [p = *a](const Vector& x) { return p.F(x); };
  } else if (auto* b = std::get_if<BilevelQuadraticProblem>(&out.instance)) {
    out.bilevel = b->model();
    if (spec.start_gap < 0.0) {
      out.x0 = Vector::Zero(b->dim_x());
    } else {
      Rng rng(spec.start_seed, 0x783030);
      out.x0 = spec.start_gap * rng.unit_vector(b->dim_x());
    }
    out.y0 = Vector::Zero(b->dim_y());
    out.objective = [p = *b](const Vector& x) { return p.F(x); };
    out.f_star = b->f_star;
    out.l_f = b->l_F;
  }
  return out;
}

}  // namespace semaopt
