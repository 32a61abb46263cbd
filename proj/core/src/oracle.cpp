#include "plascor/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

namespace plascor {
namespace oracle {

namespace {

double j2_norm(const SymTensor3& t) { return std::sqrt(1.5 * ddot(t, t)); }

// Root of beta^2 - b*beta - F^2 = 0 on the loading branch.
double strain_amplitude(double b, double big_f, int dir) {
  const double r = std::sqrt(b * b + 4.0 * big_f * big_f);
  if (dir > 0) return b < 0.0 ? 2.0 * big_f * big_f / (r - b) : 0.5 * (b + r);
  return b > 0.0 ? -2.0 * big_f * big_f / (r + b) : 0.5 * (b - r);
}

struct TensorOrigins {
  SymTensor3 sig_d, eps_d, eps_p;
  double f = 0.0;
};

struct TensorCandidate {
  TensorCorrectorState st;
  double f_y = 0.0;
};

// Backward-Euler update for a plastic increment amplitude `a` along the
// elastic deviatoric direction; every quantity is evaluated through tensor
// contractions of Table-type relations, not the scalar reduction.
TensorCandidate evaluate(double a, const TensorCorrectorState& prev,
                         const TensorOrigins& origins, const SymTensor3& eps_dir,
                         double contraction, double big_f, int dir,
                         const MaterialParams& mp) {
  TensorCandidate c;
  c.st.eps_p = prev.eps_p + eps_dir * a;
  const SymTensor3 d_eps_p = eps_dir * a;
  const double d_p = std::sqrt((2.0 / 3.0) * ddot(d_eps_p, d_eps_p));
  c.st.p_hat = prev.p_hat + d_p;
  c.st.back_stress =
      (prev.back_stress + d_eps_p * ((2.0 / 3.0) * mp.C)) * (1.0 / (1.0 + mp.D * d_p));
  const double b = ddot(c.st.eps_p - origins.eps_p, eps_dir) / contraction;
  const double beta = strain_amplitude(b, big_f, dir);
  c.st.eps_d = origins.eps_d + eps_dir * beta;
  c.st.sig_d = (c.st.eps_d - c.st.eps_p) * (2.0 * mp.mu);
  c.f_y = j2_norm(c.st.sig_d - c.st.back_stress) - mp.sigma_y -
          isotropic_hardening(c.st.p_hat, mp);
  return c;
}

} // namespace

TensorSeries integrate_tensorial(const ElasticPointRecord& record,
                                 const LoadHistory& load,
                                 const MaterialParams& params,
                                 const SolverSettings& settings) {
  load.validate();
  if (!record.has_tensor())
    throw CapabilityError("tensorial oracle needs the full tensor record");
  record.validate();

  const SymTensor3 sig_dir = *record.dev_sigma_sharp;
  const SymTensor3 eps_dir = sig_dir * (1.0 / (2.0 * params.mu));
  const double contraction = ddot(eps_dir, eps_dir);
  const double svm = record.sigma_vm_sharp;
  const double sig_contraction = ddot(sig_dir, sig_dir);

  const auto reversal_list = detect_reversals(load);
  std::unordered_set<std::size_t> reversals(reversal_list.begin(), reversal_list.end());

  TensorSeries out;
  out.samples.resize(load.size());
  const double tol = settings.fy_tolerance(params);

  TensorCorrectorState st;
  TensorOrigins origins;

  auto project = [&](std::size_t i) {
    TensorSample& smp = out.samples[i];
    smp.state = st;
    if (svm < 1e-12 * params.sigma_y) {
      smp.s = smp.e = load.values[i];
      smp.e_p = smp.x = 0.0;
      return;
    }
    smp.s = ddot(st.sig_d, sig_dir) / sig_contraction;
    smp.e = ddot(st.eps_d, eps_dir) / contraction;
    smp.e_p = ddot(st.eps_p, eps_dir) / contraction;
    smp.x = ddot(st.back_stress, eps_dir) / contraction;
  };

  auto advance = [&](double f_prev, double f_next, std::size_t idx) -> bool {
    if (f_next == f_prev || svm < 1e-12 * params.sigma_y) return true;
    const int dir = f_next > f_prev ? 1 : -1;
    const double big_f = f_next - origins.f;

    TensorCandidate trial =
        evaluate(0.0, st, origins, eps_dir, contraction, big_f, dir, params);
    if (trial.f_y <= 0.0) {
      st = trial.st;
      return true;
    }

    auto g = [&](double a) {
      return evaluate(a, st, origins, eps_dir, contraction, big_f, dir, params);
    };
    double a = 0.0, f_y = trial.f_y;
    bool converged = false;
    for (int it = 0; it < settings.max_newton_iters; ++it) {
      const double h = std::max(settings.fd_step, settings.fd_step * std::abs(a));
      const double dfy = (g(a + h).f_y - g(a - h).f_y) / (2.0 * h);
      if (dfy == 0.0) break;
      const double a_new = a - f_y / dfy;
      if (a_new * dir < 0.0) break;
      a = a_new;
      f_y = g(a).f_y;
      if (std::abs(f_y) <= tol) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      double span = std::max(1e-8, std::abs(f_next - f_prev));
      double hi = 0.0;
      bool bracketed = false;
      for (int it = 0; it < 200; ++it) {
        hi = dir * span;
        if (g(hi).f_y < 0.0) {
          bracketed = true;
          break;
        }
        span *= 2.0;
      }
      if (!bracketed) {
        out.failures.push_back({record.id, idx, "tensorial oracle: no bracket"});
        return false;
      }
      double lo = 0.0;
      for (int it = 0; it < 200 && !converged; ++it) {
        const double m = 0.5 * (lo + hi);
        const double fm = g(m).f_y;
        if (std::abs(fm) <= tol) {
          a = m;
          converged = true;
        } else if (fm > 0.0)
          lo = m;
        else
          hi = m;
      }
      if (!converged) a = 0.5 * (lo + hi);
    }
    st = g(a).st;
    return true;
  };

  if (load.values[0] != 0.0) advance(0.0, load.values[0], 0);
  project(0);
  for (std::size_t i = 0; i + 1 < load.size(); ++i) {
    if (reversals.count(i)) {
      origins.sig_d = st.sig_d;
      origins.eps_d = st.eps_d;
      origins.eps_p = st.eps_p;
      origins.f = load.values[i];
    }
    if (!advance(load.values[i], load.values[i + 1], i + 1)) {
      for (std::size_t j = i + 1; j < load.size(); ++j) project(j);
      return out;
    }
    project(i + 1);
  }
  return out;
}

CorrectedSeries integrate_fine(double sigma_vm_sharp, const LoadHistory& load,
                               const MaterialParams& params,
                               std::size_t refinement,
                               const SolverSettings& settings) {
  const LoadHistory fine = resample(load, refinement);
  const CorrectedSeries full = integrate_point(sigma_vm_sharp, fine, params, settings);
  CorrectedSeries out;
  out.failures = full.failures;
  out.samples.reserve(load.size());
  for (std::size_t i = 0; i < load.size(); ++i)
    out.samples.push_back(full.samples[i * refinement]);
  return out;
}

std::vector<UniaxialSample> radial_return_uniaxial(
    const std::vector<double>& strain_history, const MaterialParams& params,
    const SolverSettings& settings) {
  std::vector<UniaxialSample> out;
  out.reserve(strain_history.size());
  const double E = params.youngs_modulus;
  const double tol = settings.fy_tolerance(params);

  double eps_p = 0.0, p = 0.0, chi = 0.0;
  for (std::size_t i = 0; i < strain_history.size(); ++i) {
    const double eps = strain_history[i];
    const double sig_trial = E * (eps - eps_p);
    const double fy_trial =
        std::abs(sig_trial - chi) - params.sigma_y - isotropic_hardening(p, params);
    double sig = sig_trial;
    if (fy_trial > 0.0) {
      const double sgn = sig_trial - chi > 0.0 ? 1.0 : -1.0;
      auto residual = [&](double d_p) {
        const double sig_n = E * (eps - eps_p - sgn * d_p);
        const double chi_n = (chi + params.C * sgn * d_p) / (1.0 + params.D * d_p);
        return std::abs(sig_n - chi_n) - params.sigma_y -
               isotropic_hardening(p + d_p, params);
      };
      double d_p = 0.0, f_y = fy_trial;
      bool converged = false;
      for (int it = 0; it < settings.max_newton_iters; ++it) {
        const double h = std::max(settings.fd_step, settings.fd_step * d_p);
        const double dfy = (residual(d_p + h) - residual(std::max(0.0, d_p - h))) /
                           (d_p - h >= 0.0 ? 2.0 * h : h);
        if (dfy == 0.0) break;
        const double d_new = d_p - f_y / dfy;
        if (d_new < 0.0) break;
        d_p = d_new;
        f_y = residual(d_p);
        if (std::abs(f_y) <= tol) {
          converged = true;
          break;
        }
      }
      if (!converged) {
        double lo = 0.0, hi = fy_trial / E;
        while (residual(hi) > 0.0) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
          const double m = 0.5 * (lo + hi);
          const double fm = residual(m);
          if (std::abs(fm) <= tol) {
            d_p = m;
            converged = true;
            break;
          }
          (fm > 0.0 ? lo : hi) = m;
        }
        if (!converged)
          throw InputError("radial_return_uniaxial: no convergence at step " +
                           std::to_string(i));
      }
      eps_p += sgn * d_p;
      chi = (chi + params.C * sgn * d_p) / (1.0 + params.D * d_p);
      p += d_p;
      sig = E * (eps - eps_p);
    }
    out.push_back({sig, p, std::abs(chi)});
  }
  return out;
}

ProjectionErrorResult projection_error(
    const std::vector<SymTensor3>& reference_dev_stress,
    const SymTensor3& dev_sigma_sharp) {
  const double denom = ddot(dev_sigma_sharp, dev_sigma_sharp);
  if (denom == 0.0)
    throw ParameterError("projection_error: elastic deviatoric direction is zero");
  ProjectionErrorResult out;
  out.xi_rel.reserve(reference_dev_stress.size());
  out.projected.reserve(reference_dev_stress.size());
  for (const SymTensor3& ref : reference_dev_stress) {
    const double coeff = ddot(dev_sigma_sharp, ref) / denom;
    const SymTensor3 proj = dev_sigma_sharp * coeff;
    out.projected.push_back(proj);
    const double ref_norm = frobenius_norm(ref);
    if (ref_norm == 0.0)
      out.xi_rel.push_back(std::numeric_limits<double>::quiet_NaN());
    else
      out.xi_rel.push_back(frobenius_norm(ref - proj) / ref_norm);
  }
  return out;
}

} // namespace oracle
} // namespace plascor
