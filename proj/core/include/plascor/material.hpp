#pragma once

#include <array>
#include <cmath>

#include "plascor/errors.hpp"

namespace plascor {

/// Lame pair (lambda, mu) from Young's modulus and Poisson ratio.
struct LamePair {
  double lambda;
  double mu;
};

LamePair lame_from_engineering(double youngs_modulus, double poisson_ratio);

/// Elastic constants plus Chaboche hardening parameters.
/// Stresses in MPa throughout.
struct MaterialParams {
  double youngs_modulus = 0.0;
  double poisson_ratio = 0.0;
  double sigma_y = 0.0; // initial yield stress
  double C = 0.0;       // kinematic hardening modulus
  double D = 0.0;       // kinematic recall coefficient
  double Q = 0.0;       // isotropic hardening saturation
  double b = 0.0;       // isotropic hardening rate
  double mu = 0.0;      // derived
  double lambda = 0.0;  // derived

  static MaterialParams make(double E, double nu, double sigma_y, double C,
                             double D, double Q, double b);
};

/// R(p) = Q (1 - exp(-b p)), monotone, bounded by Q.
double isotropic_hardening(double p, const MaterialParams& params);

/// Symmetric second-order tensor, each shear component stored once.
/// Double contraction counts off-diagonals twice.
struct SymTensor3 {
  double xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0;

  static SymTensor3 zero() { return {}; }
  static SymTensor3 identity() { return {1, 1, 1, 0, 0, 0}; }

  double trace() const { return xx + yy + zz; }

  SymTensor3 operator+(const SymTensor3& o) const {
    return {xx + o.xx, yy + o.yy, zz + o.zz, xy + o.xy, xz + o.xz, yz + o.yz};
  }
  SymTensor3 operator-(const SymTensor3& o) const {
    return {xx - o.xx, yy - o.yy, zz - o.zz, xy - o.xy, xz - o.xz, yz - o.yz};
  }
  SymTensor3 operator*(double c) const {
    return {xx * c, yy * c, zz * c, xy * c, xz * c, yz * c};
  }
  friend SymTensor3 operator*(double c, const SymTensor3& t) { return t * c; }
};

/// A : B with off-diagonal terms counted twice.
double ddot(const SymTensor3& a, const SymTensor3& b);

/// Frobenius norm sqrt(A : A).
double frobenius_norm(const SymTensor3& a);

/// T - tr(T)/3 I.
SymTensor3 deviatoric(const SymTensor3& t);

/// sqrt(3/2 dev : dev). Input must already be deviatoric
/// (trace below 1e-12 of the Frobenius norm).
double von_mises(const SymTensor3& dev);

} // namespace plascor
