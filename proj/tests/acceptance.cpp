// Acceptance gate: one self-contained check per criterion, one pass/fail
// line each, nonzero exit when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "plascor/corrector.hpp"
#include "plascor/field.hpp"
#include "plascor/oracle.hpp"
#include "plascor/reconstruction.hpp"
#include "plascor/surrogate.hpp"

using namespace plascor;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, name,
              detail.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct GridRun {
  double svm;
  LoadHistory load;
  CorrectedSeries scalar;
  oracle::TensorSeries tensor;
};

std::vector<GridRun> run_grid(const MaterialParams& mp) {
  const std::vector<double> ratios = {0.5, 1.0, 1.5, 2.0, 4.0, 8.0, 12.0};
  const std::vector<LoadHistory> loads = {make_ramp(1.55, 200),
                                          make_triangle_cycles(1.0, 2, 50),
                                          make_triangle_cycles(1.0, 20, 25)};
  std::vector<GridRun> runs;
  for (double r : ratios)
    for (const auto& load : loads) {
      GridRun run;
      run.svm = r * mp.sigma_y;
      run.load = load;
      run.scalar = integrate_point(run.svm, load, mp);
      run.tensor = oracle::integrate_tensorial(testing::uniaxial_record(run.svm),
                                               load, mp);
      runs.push_back(std::move(run));
    }
  return runs;
}

void criterion_1(const MaterialParams& mp, const std::vector<GridRun>& runs,
                 double grid_seconds) {
  double worst = 0.0;
  bool clean = true;
  for (const auto& run : runs) {
    if (!run.scalar.ok() || !run.tensor.failures.empty()) clean = false;
    double scale_s = 0, scale_e = 0, scale_ep = 0, scale_p = 0;
    for (std::size_t i = 0; i < run.load.size(); ++i) {
      scale_s = std::max(scale_s, std::abs(run.tensor.samples[i].s));
      scale_e = std::max(scale_e, std::abs(run.tensor.samples[i].e));
      scale_ep = std::max(scale_ep, std::abs(run.tensor.samples[i].e_p));
      scale_p = std::max(scale_p, run.tensor.samples[i].state.p_hat);
    }
    for (std::size_t i = 0; i < run.load.size(); ++i) {
      const auto& a = run.scalar.samples[i];
      const auto& b = run.tensor.samples[i];
      if (scale_s > 0) worst = std::max(worst, std::abs(a.s - b.s) / scale_s);
      if (scale_e > 0) worst = std::max(worst, std::abs(a.e - b.e) / scale_e);
      if (scale_ep > 0) worst = std::max(worst, std::abs(a.e_p - b.e_p) / scale_ep);
      if (scale_p > 0)
        worst = std::max(worst, std::abs(a.p_hat - b.state.p_hat) / scale_p);
    }
  }
  const bool ok = clean && worst <= 1e-8 && grid_seconds < 10.0;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max rel diff %.3g, grid runtime %.2f s", worst,
                grid_seconds);
  report(1, "scalar vs tensor-variable equivalence on the stress grid", ok, buf);
}

void criterion_2(const MaterialParams& mp, const std::vector<GridRun>& runs) {
  const SolverSettings settings;
  const double tol = 1e-9 * mp.sigma_y;
  double worst_neuber = 0.0, worst_fy = -1e300;
  bool kt_ok = true;
  for (const auto& run : runs) {
    const auto reversals = detect_reversals(run.load);
    std::size_t next_rev = 0;
    ScalarCorrectorState st;
    double p_prev = 0.0;
    for (std::size_t i = 0; i + 1 < run.load.size(); ++i) {
      if (next_rev < reversals.size() && reversals[next_rev] == i) {
        st.s_o = st.s;
        st.e_o = st.e;
        st.e_p_o = st.e_p;
        st.f_o = run.load.values[i];
        ++next_rev;
      }
      const auto next = step(st, run.load.values[i], run.load.values[i + 1],
                             run.svm, mp, settings);
      if (!next) {
        kt_ok = false;
        break;
      }
      st = *next;
      const double f = run.load.values[i + 1];
      const double neuber =
          std::abs((st.s - st.s_o) * (st.e - st.e_o) - (f - st.f_o) * (f - st.f_o));
      worst_neuber = std::max(worst_neuber, neuber);
      const double f_y =
          equivalent_stress(st.s, st.x, run.svm, mp) - mp.sigma_y -
          isotropic_hardening(st.p_hat, mp);
      worst_fy = std::max(worst_fy, f_y);
      if (f_y < -tol && st.p_hat != p_prev) kt_ok = false;
      p_prev = st.p_hat;
    }
  }
  const bool ok = worst_neuber <= 1e-9 && worst_fy <= tol && kt_ok;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "max Neuber defect %.3g, max f_y %.3g",
                worst_neuber, worst_fy);
  report(2, "Neuber constraint and Kuhn-Tucker conditions", ok, buf);
}

void criterion_3(const MaterialParams& mp, const std::vector<GridRun>& runs) {
  double worst = 0.0;
  bool ok = true;
  for (const auto& run : runs) {
    double peak = 0.0;
    for (double f : run.load.values) peak = std::max(peak, std::abs(f));
    if (peak * run.svm >= mp.sigma_y) continue;
    for (std::size_t i = 0; i < run.load.size(); ++i) {
      const auto& smp = run.scalar.samples[i];
      if (smp.p_hat != 0.0) ok = false;
      worst = std::max({worst, std::abs(smp.s - run.load.values[i]),
                        std::abs(smp.e - run.load.values[i])});
    }
  }
  ok = ok && worst <= 1e-12;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max |s - f| and |e - f| %.3g", worst);
  report(3, "elastic points reduce to the identity", ok, buf);
}

void criterion_4(const MaterialParams& mp, const std::vector<GridRun>& runs) {
  const double cd = mp.C / mp.D;
  double worst_jx = 0.0, worst_r = 0.0;
  for (const auto& run : runs)
    for (const auto& smp : run.scalar.samples) {
      worst_jx = std::max(worst_jx, std::abs(smp.x) * run.svm / (2.0 * mp.mu));
      worst_r = std::max(worst_r, isotropic_hardening(smp.p_hat, mp));
    }

  std::vector<double> strain;
  for (int i = 0; i <= 4000; ++i) strain.push_back(0.04 * i / 4000.0);
  const auto uni = oracle::radial_return_uniaxial(strain, mp);
  double worst_sat = 0.0;
  bool reached = false;
  for (const auto& smp : uni)
    if (smp.p >= 0.02) {
      reached = true;
      worst_sat = std::max(worst_sat, std::abs(smp.back_stress - cd) / cd);
    }
  const bool ok = worst_jx <= cd * (1.0 + 1e-6) && worst_r < mp.Q && reached &&
                  worst_sat <= 0.01;
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "max J(X) %.6f of C/D=%.0f, uniaxial saturation gap %.3g",
                worst_jx, cd, worst_sat);
  report(4, "kinematic and isotropic hardening saturation bounds", ok, buf);
}

void criterion_5(const MaterialParams& mp) {
  const auto load = make_ramp(1.55, 100);
  const double svm = mp.sigma_y;
  const auto a = oracle::integrate_fine(svm, load, mp, 100);
  const auto b = oracle::integrate_fine(svm, load, mp, 1000);
  const double ea = a.samples.back().e_p;
  const double eb = b.samples.back().e_p;
  const double rel = std::abs(ea - eb) / std::abs(eb);
  report(5, "refinement convergence on the monotone ramp", rel < 1e-4,
         "relative shift " + format_double(rel));
}

void criterion_6(const MaterialParams& mp) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto load = make_ramp(1.0, 200);
  const auto qoi = QoiSelector::parse("ep_final");
  const auto set = build_training_set(mp, load, 150, 12.0, qoi);
  const auto model = train(set);

  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> dist(1e-6, 12.0 * mp.sigma_y);
  const std::size_t n = 10000;
  std::vector<double> probe(n);
  for (auto& v : probe) v = dist(rng);
  const auto pred = predict(model, probe);

  std::vector<double> errors(n, 0.0);
  bool sane = true;
  for (std::size_t i = 0; i < n; ++i) {
    const auto series = integrate_point(probe[i], load, mp);
    const double truth = series.samples.back().e_p;
    if (truth == 0.0) {
      if (pred.values[i] != 0.0) sane = false;
    } else {
      errors[i] = std::abs(pred.values[i] - truth) / truth;
    }
  }
  const double elapsed = seconds_since(t0);
  std::sort(errors.begin(), errors.end());
  const double max_err = errors.back();
  const double median = errors[n / 2];
  const bool ok = sane && max_err <= 0.02 && median <= 0.002 && elapsed <= 30.0;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "max rel err %.3g, median %.3g, end-to-end %.1f s", max_err, median,
                elapsed);
  report(6, "surrogate fidelity on 10k random stress levels", ok, buf);
}

void criterion_7(const MaterialParams& mp) {
  const fs::path dir =
      fs::temp_directory_path() /
      ("plascor_acceptance_" + std::to_string(std::random_device{}()));
  fs::create_directories(dir);

  const std::size_t n_points = 50000;
  std::string field = "id,svm\n";
  field.reserve(n_points * 16);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 8.0 * mp.sigma_y);
  for (std::size_t i = 0; i < n_points; ++i)
    field += "p" + std::to_string(i) + "," + format_double(dist(rng)) + "\n";
  const fs::path field_path = dir / "field.csv";
  std::ofstream(field_path) << field;

  const auto load = make_triangle_cycles(1.0, 20, 25); // 1001 samples
  std::string load_csv = "t,f\n";
  for (std::size_t i = 0; i < load.size(); ++i)
    load_csv += format_double(load.times[i]) + "," + format_double(load.values[i]) +
                "\n";
  const fs::path load_path = dir / "load.csv";
  std::ofstream(load_path) << load_csv;

  RunConfig cfg;
  cfg.field_path = field_path.string();
  cfg.load_path = load_path.string();
  cfg.material = mp;
  cfg.qois = {QoiSelector::parse("p_final")};

  cfg.workers = default_workers() > 1 ? default_workers() : 4;
  cfg.output_dir = (dir / "wn").string();
  const auto multi = run_correction(cfg);

  cfg.workers = 1;
  cfg.output_dir = (dir / "w1").string();
  const auto single = run_correction(cfg);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const bool identical =
      slurp(dir / "wn" / "qoi.csv") == slurp(dir / "w1" / "qoi.csv");
  const double rate =
      std::max(multi.point_steps_per_second, single.point_steps_per_second);
  const bool ok = rate >= 5e5 && identical && multi.failures.empty();
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%.3g point-steps/s on 50k x %zu, outputs %s", rate, multi.n_steps,
                identical ? "bitwise identical" : "DIFFER");
  report(7, "field-run throughput and worker determinism", ok, buf);
  fs::remove_all(dir);
}

void criterion_8() {
  const SymTensor3 dir{2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0, 0, 0, 0};
  const SymTensor3 unit_par = dir * (1.0 / frobenius_norm(dir));
  const SymTensor3 shear{0, 0, 0, 1, 0, 0};
  const SymTensor3 unit_orth = shear * (1.0 / frobenius_norm(shear));

  std::vector<SymTensor3> prop;
  for (double c : {-2.0, 0.3, 1.7}) prop.push_back(dir * c);
  const auto r_prop = oracle::projection_error(prop, dir);
  double worst_prop = 0.0;
  for (double x : r_prop.xi_rel) worst_prop = std::max(worst_prop, x);

  const SymTensor3 mix = unit_par * 0.8 + unit_orth * 0.6;
  const auto r_mix = oracle::projection_error({mix, SymTensor3::zero()}, dir);

  const bool ok = worst_prop <= 1e-12 &&
                  std::abs(r_mix.xi_rel[0] - 0.6) <= 1e-12 &&
                  std::isnan(r_mix.xi_rel[1]);
  char buf[128];
  std::snprintf(buf, sizeof(buf),
                "proportional max %.3g, 0.8/0.6 mix gives %.12f, sentinel %s",
                worst_prop, r_mix.xi_rel[0],
                std::isnan(r_mix.xi_rel[1]) ? "NaN" : "missing");
  report(8, "projection-error Pythagoras and zero-stress sentinel", ok, buf);
}

void criterion_9(const MaterialParams& mp, const std::vector<GridRun>& runs) {
  bool nonneg = true;
  for (const auto& run : runs)
    for (std::size_t a = 0; a < run.load.size(); a += 31)
      for (std::size_t b = a; b < run.load.size(); b += 47)
        if (dissipation(run.scalar, run.svm, mp, a, b) < 0.0) nonneg = false;

  const auto pp = MaterialParams::make(mp.youngs_modulus, mp.poisson_ratio,
                                       mp.sigma_y, 0.0, 0.0, 0.0, 0.0);
  const auto ramp = make_ramp(1.55, 400);
  const double svm_pp = 2.0 * pp.sigma_y;
  const auto series_pp = integrate_point(svm_pp, ramp, pp);
  const double phi_pp = dissipation(series_pp, svm_pp, pp, 0, ramp.size() - 1);
  const double expect_pp = pp.sigma_y * series_pp.samples.back().p_hat;
  const double rel_pp = std::abs(phi_pp - expect_pp) / expect_pp;

  const auto load = make_triangle_cycles(1.0, 20, 25);
  const double svm = 2.0 * mp.sigma_y;
  const auto series = integrate_point(svm, load, mp);
  const auto [first, last] = cycle_window(load, 20);
  const double phi = dissipation(series, svm, mp, first, last);
  const std::size_t r = 100;
  const auto fine = integrate_point(svm, resample(load, r), mp);
  const double phi_fine = dissipation(fine, svm, mp, first * r, last * r);
  const double rel_cycle = std::abs(phi - phi_fine) / phi_fine;

  const bool ok = nonneg && rel_pp <= 1e-9 && rel_cycle <= 0.01;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "perfect-plasticity gap %.3g, 20th-cycle vs fine %.3g%s", rel_pp,
                rel_cycle, nonneg ? "" : ", NEGATIVE WINDOW");
  report(9, "dissipation positivity and consistency", ok, buf);
}

} // namespace

int main() {
  const auto mp = testing::reference_material();

  const auto t0 = std::chrono::steady_clock::now();
  const auto runs = run_grid(mp);
  const double grid_seconds = seconds_since(t0);

  criterion_1(mp, runs, grid_seconds);
  criterion_2(mp, runs);
  criterion_3(mp, runs);
  criterion_4(mp, runs);
  criterion_5(mp);
  criterion_6(mp);
  criterion_7(mp);
  criterion_8();
  criterion_9(mp, runs);

  if (g_failures == 0)
    std::printf("all 9 criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
