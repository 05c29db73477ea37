#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

#include "semaopt/types.hpp"

namespace semaopt {

/// Second-moment rule defining the adaptive step scale s = 1/(sqrt(u) + G0).
enum class ScalerTag { SHB, Adam, AMSGrad, AdaFom, AdamPlus, AdaBound };

inline constexpr ScalerTag kAllScalerTags[] = {ScalerTag::SHB,    ScalerTag::Adam,
                                               ScalerTag::AMSGrad, ScalerTag::AdaFom,
                                               ScalerTag::AdamPlus, ScalerTag::AdaBound};

std::string_view to_string(ScalerTag tag);
/// Accepts "shb" | "adam" | "amsgrad" | "adafom" | "adamplus" | "adabound".
ScalerTag parse_scaler_tag(std::string_view name);

struct ScalerKind {
  ScalerTag tag = ScalerTag::SHB;
  /// Second-moment momentum beta'. Ignored by SHB, AdaFom and Adam+.
  double beta2 = 0.999;
  /// Optional per-step override of beta2, called with the iteration index t.
  std::function<double(std::size_t)> beta2_schedule;
  /// AdaBound clip bounds on the step scale, 0 < clip_lower <= clip_upper.
  double clip_lower = 0.0;
  double clip_upper = 0.0;
  /// Adam only: divide u by (1 - beta2^(t+1)). Off in the analyzed form.
  bool bias_correction = false;

  double beta2_at(std::size_t t) const { return beta2_schedule ? beta2_schedule(t) : beta2; }
  void validate() const;
};

struct ScalerState {
  Vector u;      ///< u_t, the accumulator used by the step scale
  Vector u_aux;  ///< u'_t, the raw moving average for AMSGrad and AdaBound
  std::size_t t = 0;
  double g0 = 0.0;
  bool bias_correction = false;
  double beta2_power = 1.0;
};

/// Zero-initialized state. Adam+ requires G0 > 0; AdaBound forces G0 = 0.
ScalerState make_scaler_state(const ScalerKind& kind, Index dim, double g0);

/// One application of the second-moment rule with the fresh oracle sample
/// `g` and the updated moving average `v_next` (used by Adam+ only).
void scaler_update(ScalerState& state, const ScalerKind& kind, const Vector& g,
                   const Vector& v_next);

/// s = 1/(sqrt(u) + G0) elementwise. Throws if a coordinate is unbounded.
Vector step_scale(const ScalerState& state);

struct ScaleBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Bounds [c_l, c_u] on every coordinate of the step scale when the oracle
/// satisfies ||O||_inf <= G (||O|| <= G for Adam+).
ScaleBounds effective_bounds(const ScalerKind& kind, double G, double g0);

}  // namespace semaopt
