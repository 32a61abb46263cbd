#include "plascor/reconstruction.hpp"

#include <algorithm>
#include <cmath>

namespace plascor {

void ElasticPointRecord::validate() const {
  if (sigma_vm_sharp < 0.0)
    throw ParameterError("record " + id + ": sigma_vm_sharp must be >= 0");
  if (dev_sigma_sharp) {
    const double svm_tensor = von_mises(*dev_sigma_sharp);
    const double ref = std::max(sigma_vm_sharp, 1e-30);
    if (std::abs(svm_tensor - sigma_vm_sharp) > 1e-6 * ref)
      throw InputError("record " + id + ": svm column (" +
                       std::to_string(sigma_vm_sharp) +
                       ") inconsistent with deviatoric tensor (" +
                       std::to_string(svm_tensor) + ")");
  }
}

std::vector<SymTensor3> reconstruct_stress(const CorrectedSeries& series,
                                           const ElasticPointRecord& record,
                                           const LoadHistory& load) {
  if (!record.has_tensor())
    throw CapabilityError("record " + record.id +
                          " carries no tensor data; cannot reconstruct stress");
  if (series.samples.size() != load.size())
    throw InputError("series and load history lengths differ");
  std::vector<SymTensor3> out;
  out.reserve(series.samples.size());
  const SymTensor3 hydro = SymTensor3::identity() * (*record.trace_sigma_sharp / 3.0);
  for (std::size_t i = 0; i < series.samples.size(); ++i)
    out.push_back(*record.dev_sigma_sharp * series.samples[i].s +
                  hydro * load.values[i]);
  return out;
}

double delta_p(const CorrectedSeries& series, const LoadHistory& load,
               std::size_t cycle_index) {
  if (series.samples.size() != load.size())
    throw InputError("series and load history lengths differ");
  const auto [first, last] = cycle_window(load, cycle_index);
  double p_min = series.samples[first].p_hat;
  double p_max = p_min;
  for (std::size_t i = first; i <= last; ++i) {
    p_min = std::min(p_min, series.samples[i].p_hat);
    p_max = std::max(p_max, series.samples[i].p_hat);
  }
  return p_max - p_min;
}

double back_stress_equivalent(double x, double sigma_vm_sharp,
                              const MaterialParams& params) {
  return std::abs(x) * sigma_vm_sharp / (2.0 * params.mu);
}

double dissipation(const CorrectedSeries& series, double sigma_vm_sharp,
                   const MaterialParams& params, std::size_t t_start_index,
                   std::size_t t_end_index) {
  if (t_end_index >= series.samples.size() || t_start_index > t_end_index)
    throw InputError("dissipation: invalid index window");
  double phi = 0.0;
  for (std::size_t i = t_start_index + 1; i <= t_end_index; ++i) {
    const auto& cur = series.samples[i];
    const double d_p = cur.p_hat - series.samples[i - 1].p_hat;
    if (d_p == 0.0) continue;
    double term = cur.f_y + params.sigma_y;
    const double r = isotropic_hardening(cur.p_hat, params);
    if (r != 0.0) {
      if (params.Q == 0.0)
        throw ParameterError("dissipation: isotropic term undefined for Q = 0");
      term += r * r / (2.0 * params.Q);
    }
    const double jx = back_stress_equivalent(cur.x, sigma_vm_sharp, params);
    if (jx != 0.0) {
      if (params.C == 0.0)
        throw ParameterError("dissipation: kinematic term undefined for C = 0");
      term += params.D / (2.0 * params.C) * jx * jx;
    }
    phi += term * d_p;
  }
  return phi;
}

} // namespace plascor
