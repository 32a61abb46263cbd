#pragma once

#include <optional>
#include <vector>

#include "plascor/corrector.hpp"
#include "plascor/load_history.hpp"
#include "plascor/material.hpp"
#include "plascor/reconstruction.hpp"

namespace plascor {
namespace oracle {

/// Full tensor state of the verification-side corrector.
struct TensorCorrectorState {
  SymTensor3 sig_d, eps_d, eps_p, back_stress;
  double p_hat = 0.0;
};

/// Scalar projections of a tensor series onto the elastic direction,
/// for comparison against the scalar corrector.
struct TensorSample {
  TensorCorrectorState state;
  double s = 0.0, e = 0.0, e_p = 0.0, x = 0.0;
};

struct TensorSeries {
  std::vector<TensorSample> samples;
  std::vector<PointFailure> failures;
};

/// Tensor-variable corrector: constitutive relations and the Neuber
/// constraint evaluated through tensor contractions, the plastic increment
/// kept along the elastic deviatoric direction. Independent of the scalar
/// reduction; used to verify it.
TensorSeries integrate_tensorial(const ElasticPointRecord& record,
                                 const LoadHistory& load,
                                 const MaterialParams& params,
                                 const SolverSettings& settings = {});

/// Scalar corrector on a load history with `refinement` substeps per
/// segment, sampled back at the original indices.
CorrectedSeries integrate_fine(double sigma_vm_sharp, const LoadHistory& load,
                               const MaterialParams& params,
                               std::size_t refinement,
                               const SolverSettings& settings = {});

/// Uniaxial strain-driven Chaboche reference (backward-Euler return
/// mapping on the full model, no Neuber rule).
struct UniaxialSample {
  double stress = 0.0;      // axial stress
  double p = 0.0;           // cumulative plastic strain
  double back_stress = 0.0; // J(X)
};
std::vector<UniaxialSample> radial_return_uniaxial(
    const std::vector<double>& strain_history, const MaterialParams& params,
    const SolverSettings& settings = {});

/// Orthogonal projection of a reference deviatoric stress history onto the
/// elastic direction, and the relative projection error per sample.
/// xi_rel is NaN where the reference norm vanishes.
struct ProjectionErrorResult {
  std::vector<double> xi_rel;
  std::vector<SymTensor3> projected;
};
ProjectionErrorResult projection_error(
    const std::vector<SymTensor3>& reference_dev_stress,
    const SymTensor3& dev_sigma_sharp);

} // namespace oracle
} // namespace plascor
