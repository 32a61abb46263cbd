#pragma once

#include "plascor/material.hpp"
#include "plascor/reconstruction.hpp"

namespace plascor::testing {

/// Reference parameter set used throughout the suites.
inline MaterialParams reference_material() {
  return MaterialParams::make(200000.0, 0.3, 100.0, 40000.0, 400.0, 100.0, 10.0);
}

/// Uniaxial-deviator record with the requested equivalent stress.
inline ElasticPointRecord uniaxial_record(double svm, const std::string& id = "pt") {
  ElasticPointRecord rec;
  rec.id = id;
  rec.sigma_vm_sharp = svm;
  rec.dev_sigma_sharp = SymTensor3{2.0 / 3.0 * svm, -svm / 3.0, -svm / 3.0, 0, 0, 0};
  rec.trace_sigma_sharp = svm;
  return rec;
}

} // namespace plascor::testing
