#include "semaopt/harness/rate_fit.hpp"

#include <algorithm>
#include <cmath>

#include "semaopt/rng.hpp"
#include "semaopt/types.hpp"

namespace semaopt {

namespace {

struct Line {
  double slope = 0.0;
  double intercept = 0.0;
};

Line ols(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw ConfigError("fit_rate: t values must not all coincide");
  const double slope = sxy / sxx;
  return Line{slope, my - slope * mx};
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double w = pos - static_cast<double>(lo);
  return (1.0 - w) * v[lo] + w * v[hi];
}

}  // namespace

RateFit fit_rate(const std::vector<double>& t, const std::vector<double>& values, double t_min,
                 double t_max, int resamples, std::uint64_t seed) {
  if (t.size() != values.size()) throw ConfigError("fit_rate: length mismatch");
  std::vector<double> lx;
  std::vector<double> ly;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_min || t[i] > t_max) continue;
    if (!(t[i] > 0.0) || !(values[i] > 0.0))
      throw ConfigError("fit_rate: nonpositive value in range");
    lx.push_back(std::log(t[i]));
    ly.push_back(std::log(values[i]));
  }
  if (lx.size() < 10) throw ConfigError("fit_rate: need at least 10 points in range");
  const Line fit = ols(lx, ly);
  std::vector<double> resid(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i) resid[i] = ly[i] - (fit.intercept + fit.slope * lx[i]);

  RateFit out;
  out.slope = fit.slope;
  out.intercept = fit.intercept;
  out.points = lx.size();
  if (resamples <= 0) {
    out.ci_lower = out.ci_upper = fit.slope;
    return out;
  }
  Rng rng(seed);
  std::vector<double> slopes;
  slopes.reserve(static_cast<std::size_t>(resamples));
  std::vector<double> yb(lx.size());
  for (int b = 0; b < resamples; ++b) {
    for (std::size_t i = 0; i < lx.size(); ++i)
      yb[i] = fit.intercept + fit.slope * lx[i] + resid[rng.uniform_index(resid.size())];
    slopes.push_back(ols(lx, yb).slope);
  }
  out.ci_lower = quantile(slopes, 0.025);
  out.ci_upper = quantile(slopes, 0.975);
  return out;
}

}  // namespace semaopt
