#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plascor/corrector.hpp"
#include "plascor/load_history.hpp"
#include "plascor/material.hpp"

namespace plascor {

/// Per-point elastic solution at f = 1. Tensor data is optional;
/// the scalar corrector needs only the von Mises stress.
struct ElasticPointRecord {
  std::string id;
  double sigma_vm_sharp = 0.0;
  std::optional<SymTensor3> dev_sigma_sharp;
  std::optional<double> trace_sigma_sharp;

  bool has_tensor() const {
    return dev_sigma_sharp.has_value() && trace_sigma_sharp.has_value();
  }
  /// Checks deviatoric-ness and svm consistency (1e-6 relative).
  void validate() const;
};

/// sigma_hat(t) = s(t) * dev_sigma_sharp + f(t)/3 * trace_sigma_sharp * I.
std::vector<SymTensor3> reconstruct_stress(const CorrectedSeries& series,
                                           const ElasticPointRecord& record,
                                           const LoadHistory& load);

/// max - min of p_hat over the 1-based cycle_index-th cycle window.
double delta_p(const CorrectedSeries& series, const LoadHistory& load,
               std::size_t cycle_index);

/// Intrinsic dissipation over [t_start_index, t_end_index], rectangle rule
/// on the converged end-of-step values. MPa (== MJ/m^3).
double dissipation(const CorrectedSeries& series, double sigma_vm_sharp,
                   const MaterialParams& params, std::size_t t_start_index,
                   std::size_t t_end_index);

/// J(X-hat) recovered from the scalar kinematic ratio.
double back_stress_equivalent(double x, double sigma_vm_sharp,
                              const MaterialParams& params);

} // namespace plascor
