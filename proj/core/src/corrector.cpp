#include "plascor/corrector.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

namespace plascor {

namespace {

// Root of ds^2 + delta*ds - F^2 = 0, branch chosen by loading direction.
// Cancellation-free for large |delta|.
double stress_ratio_increment(double delta, double big_f, int dir) {
  const double r = std::sqrt(delta * delta + 4.0 * big_f * big_f);
  if (dir > 0) return delta > 0.0 ? 2.0 * big_f * big_f / (r + delta) : 0.5 * (r - delta);
  return delta < 0.0 ? -2.0 * big_f * big_f / (r - delta) : -0.5 * (r + delta);
}

struct Candidate {
  double s, e_p, p_hat, x, f_y;
};

// Evaluate the backward-Euler update at a candidate e_p_next.
Candidate evaluate(double e_p_next, const ScalarCorrectorState& st, double big_f,
                   int dir, double svm, const MaterialParams& mp) {
  Candidate c;
  c.e_p = e_p_next;
  const double delta = e_p_next - st.e_p_o;
  c.s = st.s_o + stress_ratio_increment(delta, big_f, dir);
  const double d_ep = e_p_next - st.e_p;
  const double d_p = std::abs(d_ep) * svm / (3.0 * mp.mu);
  c.p_hat = st.p_hat + d_p;
  c.x = (st.x + (2.0 / 3.0) * mp.C * d_ep) / (1.0 + mp.D * d_p);
  c.f_y = std::abs(c.s - c.x / (2.0 * mp.mu)) * svm - mp.sigma_y -
          isotropic_hardening(c.p_hat, mp);
  return c;
}

ScalarCorrectorState commit(const ScalarCorrectorState& prev, const Candidate& c) {
  ScalarCorrectorState next = prev; // origins carried
  next.s = c.s;
  next.e_p = c.e_p;
  next.p_hat = c.p_hat;
  next.x = c.x;
  next.e = next.e_o + (c.s - next.s_o) + (c.e_p - next.e_p_o);
  return next;
}

} // namespace

double equivalent_stress(double s, double x, double sigma_vm_sharp,
                         const MaterialParams& params) {
  return std::abs(s - x / (2.0 * params.mu)) * sigma_vm_sharp;
}

double trial_stress_ratio(double e_p_prev, double f_next, double f_prev,
                          const ScalarCorrectorState& origins) {
  const int dir = f_next > f_prev ? 1 : -1;
  const double delta = e_p_prev - origins.e_p_o;
  const double big_f = f_next - origins.f_o;
  return origins.s_o + stress_ratio_increment(delta, big_f, dir);
}

std::optional<ScalarCorrectorState> step(const ScalarCorrectorState& state,
                                         double f_prev, double f_next,
                                         double sigma_vm_sharp,
                                         const MaterialParams& params,
                                         const SolverSettings& settings) {
  if (f_next == f_prev) return state; // rate-independent: plateau is a no-op

  if (sigma_vm_sharp < 1e-12 * params.sigma_y) {
    // stress-free point: elastic identity
    ScalarCorrectorState next = state;
    next.s = next.e = f_next;
    return next;
  }

  const int dir = f_next > f_prev ? 1 : -1;
  const double big_f = f_next - state.f_o;

  const Candidate trial = evaluate(state.e_p, state, big_f, dir, sigma_vm_sharp, params);
  const double tol = settings.fy_tolerance(params);
  if (trial.f_y <= 0.0) return commit(state, trial);

  // Plastic step: root of f_y(e_p) = 0, e_p moving in the loading direction.
  auto g = [&](double e_p) {
    return evaluate(e_p, state, big_f, dir, sigma_vm_sharp, params);
  };

  double e_p = state.e_p;
  double f_y = trial.f_y;
  bool converged = false;
  for (int it = 0; it < settings.max_newton_iters; ++it) {
    const double h = std::max(settings.fd_step, settings.fd_step * std::abs(e_p));
    const double dfy = (g(e_p + h).f_y - g(e_p - h).f_y) / (2.0 * h);
    if (dfy == 0.0) break;
    const double e_p_new = e_p - f_y / dfy;
    // plastic increment must not run against the loading direction
    if ((e_p_new - state.e_p) * dir < 0.0) break;
    e_p = e_p_new;
    f_y = g(e_p).f_y;
    if (std::abs(f_y) <= tol) {
      converged = true;
      break;
    }
  }

  if (!converged && settings.bisection_fallback) {
    // bracket grown geometrically in the loading direction; g is positive at
    // e_p_prev and eventually negative on the active branch
    double lo = state.e_p;
    double span = std::max(1e-8, std::abs(f_next - f_prev));
    double hi = lo;
    bool bracketed = false;
    for (int it = 0; it < 200; ++it) {
      hi = lo + dir * span;
      if (g(hi).f_y < 0.0) {
        bracketed = true;
        break;
      }
      span *= 2.0;
    }
    if (bracketed) {
      double a = state.e_p, b = hi;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = g(m).f_y;
        if (std::abs(fm) <= tol) {
          e_p = m;
          f_y = fm;
          converged = true;
          break;
        }
        if (fm > 0.0)
          a = m;
        else
          b = m;
      }
      if (!converged) {
        // interval collapsed to round-off; accept the midpoint
        e_p = 0.5 * (a + b);
        f_y = g(e_p).f_y;
        converged = std::abs(f_y) <= 1e3 * tol;
      }
    }
  }

  if (!converged) return std::nullopt;
  return commit(state, g(e_p));
}

CorrectedSeries integrate_point(double sigma_vm_sharp, const LoadHistory& load,
                                const MaterialParams& params,
                                const SolverSettings& settings) {
  load.validate();
  if (sigma_vm_sharp < 0.0)
    throw ParameterError("sigma_vm_sharp must be >= 0");

  const auto reversal_list = detect_reversals(load);
  std::unordered_set<std::size_t> reversals(reversal_list.begin(), reversal_list.end());

  CorrectedSeries out;
  out.samples.resize(load.size());

  ScalarCorrectorState st; // virgin state, origins at zero
  if (load.values[0] != 0.0) {
    if (auto first = step(st, 0.0, load.values[0], sigma_vm_sharp, params, settings))
      st = *first;
    else
      out.failures.push_back({"", 0, "no convergence entering initial load level"});
  }

  auto record = [&](std::size_t i, const ScalarCorrectorState& s, bool plastic) {
    out.samples[i] = {s.s,
                      s.e,
                      s.e_p,
                      s.p_hat,
                      s.x,
                      equivalent_stress(s.s, s.x, sigma_vm_sharp, params) -
                          params.sigma_y - isotropic_hardening(s.p_hat, params),
                      plastic};
  };
  record(0, st, st.p_hat > 0.0);

  bool dead = false;
  for (std::size_t i = 0; i + 1 < load.size(); ++i) {
    if (dead) {
      record(i + 1, st, false);
      continue;
    }
    if (reversals.count(i)) {
      st.s_o = st.s;
      st.e_o = st.e;
      st.e_p_o = st.e_p;
      st.f_o = load.values[i];
    }
    const double p_before = st.p_hat;
    auto next = step(st, load.values[i], load.values[i + 1], sigma_vm_sharp, params,
                     settings);
    if (!next) {
      out.failures.push_back({"", i + 1, "Newton and bisection failed"});
      dead = true; // hold the last converged state for the rest of the history
      record(i + 1, st, false);
      continue;
    }
    st = *next;
    record(i + 1, st, st.p_hat > p_before);
  }
  return out;
}

} // namespace plascor
