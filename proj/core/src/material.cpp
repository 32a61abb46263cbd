#include "plascor/material.hpp"

#include <cmath>
#include <string>

namespace plascor {

LamePair lame_from_engineering(double E, double nu) {
  if (!(E > 0.0))
    throw ParameterError("Young's modulus must be positive, got " + std::to_string(E));
  if (!(nu > -1.0 && nu < 0.5))
    throw ParameterError("Poisson ratio must lie in (-1, 0.5), got " + std::to_string(nu));
  const double mu = E / (2.0 * (1.0 + nu));
  const double lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  return {lambda, mu};
}

MaterialParams MaterialParams::make(double E, double nu, double sigma_y, double C,
                                    double D, double Q, double b) {
  const LamePair lame = lame_from_engineering(E, nu);
  if (!(sigma_y > 0.0)) throw ParameterError("sigma_y must be positive");
  if (C < 0.0 || D < 0.0) throw ParameterError("kinematic hardening parameters must be >= 0");
  if (Q < 0.0 || b < 0.0) throw ParameterError("isotropic hardening parameters must be >= 0");
  MaterialParams p;
  p.youngs_modulus = E;
  p.poisson_ratio = nu;
  p.sigma_y = sigma_y;
  p.C = C;
  p.D = D;
  p.Q = Q;
  p.b = b;
  p.mu = lame.mu;
  p.lambda = lame.lambda;
  return p;
}

double isotropic_hardening(double p, const MaterialParams& params) {
  if (p < 0.0) throw ParameterError("cumulative plastic strain must be >= 0");
  return params.Q * (1.0 - std::exp(-params.b * p));
}

double ddot(const SymTensor3& a, const SymTensor3& b) {
  return a.xx * b.xx + a.yy * b.yy + a.zz * b.zz +
         2.0 * (a.xy * b.xy + a.xz * b.xz + a.yz * b.yz);
}

double frobenius_norm(const SymTensor3& a) { return std::sqrt(ddot(a, a)); }

SymTensor3 deviatoric(const SymTensor3& t) {
  const double m = t.trace() / 3.0;
  return {t.xx - m, t.yy - m, t.zz - m, t.xy, t.xz, t.yz};
}

double von_mises(const SymTensor3& dev) {
  const double norm = frobenius_norm(dev);
  if (std::abs(dev.trace()) > 1e-12 * std::max(norm, 1.0))
    throw ParameterError("von_mises expects a deviatoric tensor");
  return std::sqrt(1.5) * norm;
}

} // namespace plascor
