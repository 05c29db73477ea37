#include "semaopt/scalers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace semaopt {

std::string_view to_string(ScalerTag tag) {
  switch (tag) {
    case ScalerTag::SHB: return "shb";
    case ScalerTag::Adam: return "adam";
    case ScalerTag::AMSGrad: return "amsgrad";
    case ScalerTag::AdaFom: return "adafom";
    case ScalerTag::AdamPlus: return "adamplus";
    case ScalerTag::AdaBound: return "adabound";
  }
  return "?";
}

ScalerTag parse_scaler_tag(std::string_view name) {
  for (ScalerTag tag : kAllScalerTags)
    if (to_string(tag) == name) return tag;
  throw ConfigError("unknown scaler tag '" + std::string(name) + "'");
}

void ScalerKind::validate() const {
  if (tag == ScalerTag::AdaBound) {
    require_config(clip_lower > 0.0 && clip_lower <= clip_upper,
                   "adabound requires 0 < clip_lower <= clip_upper");
  }
  if (tag == ScalerTag::Adam || tag == ScalerTag::AMSGrad || tag == ScalerTag::AdaBound) {
    require_config(beta2 >= 0.0 && beta2 < 1.0, "beta2 must lie in [0, 1)");
  }
}

ScalerState make_scaler_state(const ScalerKind& kind, Index dim, double g0) {
  kind.validate();
  require_config(g0 >= 0.0, "G0 must be nonnegative");
  if (kind.tag == ScalerTag::AdamPlus) require_config(g0 > 0.0, "adamplus requires G0 > 0");
  ScalerState state;
  state.u = Vector::Zero(dim);
  state.u_aux = Vector::Zero(dim);
  state.g0 = kind.tag == ScalerTag::AdaBound ? 0.0 : g0;
  state.bias_correction = kind.bias_correction && kind.tag == ScalerTag::Adam;
  if (kind.tag == ScalerTag::SHB) state.u.setOnes();
  return state;
}

void scaler_update(ScalerState& state, const ScalerKind& kind, const Vector& g,
                   const Vector& v_next) {
  const Index dim = state.u.size();
  if (g.size() != dim) throw ConfigError("scaler_update: sample dimension mismatch");
  switch (kind.tag) {
    case ScalerTag::SHB:
      state.u.setOnes();
      break;
    case ScalerTag::Adam: {
      const double b = kind.beta2_at(state.t);
      state.u = b * state.u + (1.0 - b) * g.cwiseAbs2();
      state.beta2_power *= b;
      break;
    }
    case ScalerTag::AMSGrad: {
      const double b = kind.beta2_at(state.t);
      state.u_aux = b * state.u_aux + (1.0 - b) * g.cwiseAbs2();
      state.u = state.u.cwiseMax(state.u_aux);
      break;
    }
    case ScalerTag::AdaFom: {
      // Streaming mean of g_0^2 .. g_t^2.
      const double w = 1.0 / static_cast<double>(state.t + 1);
      state.u += w * (g.cwiseAbs2() - state.u);
      break;
    }
    case ScalerTag::AdamPlus: {
      if (v_next.size() != dim) throw ConfigError("scaler_update: v dimension mismatch");
      state.u.setConstant(v_next.norm());
      break;
    }
    case ScalerTag::AdaBound: {
      const double b = kind.beta2_at(state.t);
      state.u_aux = b * state.u_aux + (1.0 - b) * g.cwiseAbs2();
      const double lo = 1.0 / (kind.clip_upper * kind.clip_upper);
      const double hi = 1.0 / (kind.clip_lower * kind.clip_lower);
      state.u = state.u_aux.cwiseMax(lo).cwiseMin(hi);
      break;
    }
  }
  ++state.t;
}

Vector step_scale(const ScalerState& state) {
  Vector root = state.u.cwiseSqrt();
  if (state.bias_correction && state.beta2_power < 1.0)
    root /= std::sqrt(1.0 - state.beta2_power);
  Vector denom = root.array() + state.g0;
  for (Index i = 0; i < denom.size(); ++i)
    if (!(denom[i] > 0.0)) throw ConfigError("unbounded scale");
  return denom.cwiseInverse();
}

ScaleBounds effective_bounds(const ScalerKind& kind, double G, double g0) {
  switch (kind.tag) {
    case ScalerTag::SHB:
      return {1.0 / (1.0 + g0), 1.0 / (1.0 + g0)};
    case ScalerTag::AdaBound:
      kind.validate();
      return {kind.clip_lower, kind.clip_upper};
    case ScalerTag::Adam:
    case ScalerTag::AMSGrad:
    case ScalerTag::AdaFom:
      require_config(G > 0.0, "effective_bounds: G must be positive");
      require_config(g0 > 0.0, "effective_bounds: G0 must be positive for an upper bound 1/G0");
      return {1.0 / (G + g0), 1.0 / g0};
    case ScalerTag::AdamPlus:
      require_config(G > 0.0, "effective_bounds: G must be positive");
      require_config(g0 > 0.0, "effective_bounds: G0 must be positive for an upper bound 1/G0");
      return {1.0 / (std::sqrt(G) + g0), 1.0 / g0};
  }
  throw ConfigError("effective_bounds: unknown scaler");
}

}  // namespace semaopt
