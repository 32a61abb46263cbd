#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "plascor/load_history.hpp"
#include "plascor/material.hpp"

namespace plascor {

/// Newton / bisection controls for the implicit corrector step.
struct SolverSettings {
  double fy_tolerance_rel = 1e-9; // |f_y| <= fy_tolerance_rel * sigma_y
  int max_newton_iters = 50;
  double fd_step = 1e-8; // central-difference step scale
  bool bisection_fallback = true;

  double fy_tolerance(const MaterialParams& params) const {
    return fy_tolerance_rel * params.sigma_y;
  }
};

/// Scalar corrector state at one converged time sample, plus the
/// Chaudonneret origins carried between load reversals.
struct ScalarCorrectorState {
  double s = 0.0;   // deviatoric stress ratio
  double e = 0.0;   // deviatoric strain ratio
  double e_p = 0.0; // plastic strain ratio
  double p_hat = 0.0;
  double x = 0.0;   // kinematic ratio, MPa
  double s_o = 0.0, e_o = 0.0, e_p_o = 0.0, f_o = 0.0;
};

/// Trial stress ratio with plastic flow frozen.
/// Root sign follows the loading direction (f_next vs f_prev).
double trial_stress_ratio(double e_p_prev, double f_next, double f_prev,
                          const ScalarCorrectorState& origins);

/// One sample of the per-point corrected time series.
struct ScalarSample {
  double s = 0.0, e = 0.0, e_p = 0.0, p_hat = 0.0, x = 0.0;
  double f_y = 0.0;     // yield function at the converged state
  bool plastic = false; // did this step accumulate plasticity
};

struct CorrectedSeries {
  std::vector<ScalarSample> samples;
  std::vector<PointFailure> failures;

  bool ok() const { return failures.empty(); }
};

/// Advance one load increment f_prev -> f_next (backward Euler).
/// Returns nullopt on non-convergence; `state` is untouched then.
std::optional<ScalarCorrectorState> step(const ScalarCorrectorState& state,
                                         double f_prev, double f_next,
                                         double sigma_vm_sharp,
                                         const MaterialParams& params,
                                         const SolverSettings& settings);

/// Integrate the full load history for one point. Origins change at every
/// reversal sample. Per-step failures are recorded, not thrown.
CorrectedSeries integrate_point(double sigma_vm_sharp, const LoadHistory& load,
                                const MaterialParams& params,
                                const SolverSettings& settings = {});

/// J-hat(s, x) = |s - x / 2mu| * sigma_vm_sharp.
double equivalent_stress(double s, double x, double sigma_vm_sharp,
                         const MaterialParams& params);

} // namespace plascor
