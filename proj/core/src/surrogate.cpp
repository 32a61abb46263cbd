#include "plascor/surrogate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "plascor/reconstruction.hpp"

namespace plascor {

QoiSelector QoiSelector::parse(const std::string& text) {
  QoiSelector q;
  std::string head = text;
  std::size_t cycle = 1;
  if (auto pos = text.find(':'); pos != std::string::npos) {
    head = text.substr(0, pos);
    cycle = static_cast<std::size_t>(std::stoul(text.substr(pos + 1)));
  }
  q.cycle = cycle;
  if (head == "ep_final")
    q.kind = Kind::FinalEp;
  else if (head == "p_final")
    q.kind = Kind::FinalPHat;
  else if (head == "delta_p")
    q.kind = Kind::DeltaP;
  else if (head == "dissipation")
    q.kind = Kind::Dissipation;
  else
    throw InputError("unknown QoI selector '" + text +
                     "' (expected ep_final, p_final, delta_p:N, dissipation:N)");
  return q;
}

std::string QoiSelector::name() const {
  switch (kind) {
    case Kind::FinalEp: return "ep_final";
    case Kind::FinalPHat: return "p_final";
    case Kind::DeltaP: return "delta_p:" + std::to_string(cycle);
    case Kind::Dissipation: return "dissipation:" + std::to_string(cycle);
  }
  return "?";
}

double evaluate_qoi(const QoiSelector& qoi, const CorrectedSeries& series,
                    double sigma_vm_sharp, const LoadHistory& load,
                    const MaterialParams& params) {
  switch (qoi.kind) {
    case QoiSelector::Kind::FinalEp:
      return series.samples.back().e_p;
    case QoiSelector::Kind::FinalPHat:
      return series.samples.back().p_hat;
    case QoiSelector::Kind::DeltaP:
      return delta_p(series, load, qoi.cycle);
    case QoiSelector::Kind::Dissipation: {
      const auto [first, last] = cycle_window(load, qoi.cycle);
      return dissipation(series, sigma_vm_sharp, params, first, last);
    }
  }
  throw InputError("invalid QoI selector");
}

TrainingSet build_training_set(const MaterialParams& params, const LoadHistory& load,
                               std::size_t n_s, double s_plus,
                               const QoiSelector& qoi,
                               const SolverSettings& settings) {
  if (n_s < 2) throw InputError("surrogate training needs n_s >= 2");
  if (!(s_plus > 0.0)) throw InputError("s_plus must be positive");
  load.validate();

  const double lo = 1e-3 * params.sigma_y;
  const double hi = s_plus * params.sigma_y;
  const double log_lo = std::log(lo), log_hi = std::log(hi);

  auto qoi_at = [&](double svm) {
    const CorrectedSeries series = integrate_point(svm, load, params, settings);
    return evaluate_qoi(qoi, series, svm, load, params);
  };

  TrainingSet set;
  set.input_max = hi;
  set.inputs.reserve(n_s);
  set.targets.reserve(n_s);
  for (std::size_t i = 0; i < n_s; ++i) {
    const double a = static_cast<double>(i) / static_cast<double>(n_s - 1);
    const double svm = i + 1 == n_s ? hi : std::exp(log_lo + a * (log_hi - log_lo));
    set.inputs.push_back(svm);
    set.targets.push_back(qoi_at(svm));
  }

  // bracket the yield onset between the last zero and the first nonzero grid
  // point, then refine it by bisection on the direct corrector
  double zero_hi = 0.0, plastic_lo = 0.0;
  for (std::size_t i = 0; i < set.inputs.size(); ++i) {
    if (set.targets[i] == 0.0)
      zero_hi = std::max(zero_hi, set.inputs[i]);
    else if (plastic_lo == 0.0 || set.inputs[i] < plastic_lo)
      plastic_lo = set.inputs[i];
  }
  if (zero_hi > 0.0 && plastic_lo > zero_hi) {
    double a = zero_hi, b = plastic_lo;
    for (int it = 0; it < 80 && (b - a) > 1e-14 * b; ++it) {
      const double m = 0.5 * (a + b);
      (qoi_at(m) == 0.0 ? a : b) = m;
    }
    set.yield_onset = a;
    // resolve the steep branch just above the onset with a geometric
    // progression dense enough for the shifted-log input transform
    const double span = plastic_lo - set.yield_onset;
    for (double delta = 1e-8 * set.yield_onset; delta < span;
         delta *= std::pow(10.0, 0.25)) {
      const double svm = set.yield_onset + delta;
      if (svm > hi) break;
      const double target = qoi_at(svm);
      if (target > 0.0) {
        set.inputs.push_back(svm);
        set.targets.push_back(target);
      }
    }
  }
  return set;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd kernel_matrix(const std::vector<double>& u, const GpHyperparams& h) {
  const auto n = static_cast<Eigen::Index>(u.size());
  MatrixXd k(n, n);
  const double inv2l2 = 0.5 / (h.length_scale * h.length_scale);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double d = u[i] - u[j];
      const double v = h.signal_variance * std::exp(-d * d * inv2l2);
      k(i, j) = v;
      k(j, i) = v;
    }
  k.diagonal().array() += h.noise_variance;
  return k;
}

// Negative log marginal likelihood; infinity when not factorizable.
double nlml(const std::vector<double>& u, const VectorXd& v, const GpHyperparams& h) {
  const MatrixXd k = kernel_matrix(u, h);
  Eigen::LLT<MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const VectorXd alpha = llt.solve(v);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    log_det += std::log(llt.matrixL()(i, i));
  return 0.5 * v.dot(alpha) + log_det +
         0.5 * static_cast<double>(v.size()) * std::log(2.0 * M_PI);
}

struct FitResult {
  GpHyperparams hyper;
  Eigen::LLT<MatrixXd> llt;
  VectorXd alpha;
};

FitResult fit_gp(const std::vector<double>& u, const std::vector<double>& v_raw) {
  const auto n = static_cast<Eigen::Index>(u.size());
  VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = v_raw[i];

  const auto [umin_it, umax_it] = std::minmax_element(u.begin(), u.end());
  const double span = std::max(*umax_it - *umin_it, 1e-6);
  const double mean_v = v.mean();
  const double var_v = std::max((v.array() - mean_v).square().mean(), 1e-12);

  auto objective = [&](double log_l, double log_sf2, double jitter) {
    GpHyperparams h{std::exp(log_l), std::exp(log_sf2), jitter * std::exp(log_sf2)};
    if (h.length_scale < 1e-6 || h.length_scale > 1e6) return 1e300;
    const double val = nlml(u, v, h);
    return std::isfinite(val) ? val : 1e300;
  };

  // marginal-likelihood ascent: Nelder-Mead in (log l, log sf^2),
  // 5 deterministic restarts
  std::mt19937 rng(0x5eedu);
  std::normal_distribution<double> jump(0.0, 1.0);
  double best_log_l = std::log(span / 10.0), best_log_sf2 = std::log(var_v);
  double jitter = 1e-10;
  double best_val = std::numeric_limits<double>::infinity();

  for (int restart = 0; restart < 5; ++restart) {
    double x0 = std::log(span / 10.0), y0 = std::log(var_v);
    if (restart > 0) {
      x0 += jump(rng);
      y0 += jump(rng);
    }
    // simplex
    std::array<std::array<double, 2>, 3> pts = {{{x0, y0}, {x0 + 0.5, y0}, {x0, y0 + 0.5}}};
    std::array<double, 3> vals;
    for (int i = 0; i < 3; ++i) vals[i] = objective(pts[i][0], pts[i][1], jitter);
    for (int it = 0; it < 120; ++it) {
      std::array<int, 3> order = {0, 1, 2};
      std::sort(order.begin(), order.end(), [&](int a, int b) { return vals[a] < vals[b]; });
      const auto& pb = pts[order[0]];
      const auto& pm = pts[order[1]];
      auto& pw = pts[order[2]];
      const double cx = 0.5 * (pb[0] + pm[0]), cy = 0.5 * (pb[1] + pm[1]);
      const double rx = cx + (cx - pw[0]), ry = cy + (cy - pw[1]);
      const double fr = objective(rx, ry, jitter);
      if (fr < vals[order[0]]) {
        const double ex = cx + 2.0 * (cx - pw[0]), ey = cy + 2.0 * (cy - pw[1]);
        const double fe = objective(ex, ey, jitter);
        if (fe < fr) {
          pw = {ex, ey};
          vals[order[2]] = fe;
        } else {
          pw = {rx, ry};
          vals[order[2]] = fr;
        }
      } else if (fr < vals[order[1]]) {
        pw = {rx, ry};
        vals[order[2]] = fr;
      } else {
        const double ccx = cx + 0.5 * (pw[0] - cx), ccy = cy + 0.5 * (pw[1] - cy);
        const double fc = objective(ccx, ccy, jitter);
        if (fc < vals[order[2]]) {
          pw = {ccx, ccy};
          vals[order[2]] = fc;
        } else {
          for (int i : {order[1], order[2]}) {
            pts[i][0] = 0.5 * (pts[i][0] + pb[0]);
            pts[i][1] = 0.5 * (pts[i][1] + pb[1]);
            vals[i] = objective(pts[i][0], pts[i][1], jitter);
          }
        }
      }
    }
    const int best_i = static_cast<int>(
        std::min_element(vals.begin(), vals.end()) - vals.begin());
    if (vals[best_i] < best_val) {
      best_val = vals[best_i];
      best_log_l = pts[best_i][0];
      best_log_sf2 = pts[best_i][1];
    }
  }

  // final factorization, escalating the jitter if needed
  for (;;) {
    GpHyperparams h{std::exp(best_log_l), std::exp(best_log_sf2),
                    jitter * std::exp(best_log_sf2)};
    MatrixXd k = kernel_matrix(u, h);
    Eigen::LLT<MatrixXd> llt(k);
    if (llt.info() == Eigen::Success) {
      FitResult r;
      r.hyper = h;
      r.llt = std::move(llt);
      r.alpha = r.llt.solve(v);
      return r;
    }
    jitter *= 10.0;
    if (jitter > 1e-4)
      throw InputError("surrogate training: covariance not factorizable even at "
                       "maximum jitter");
  }
}

SurrogateModel finish_model(const std::vector<double>& u, const std::vector<double>& v,
                            double floor_value, double yield_onset, double input_min,
                            double input_max) {
  FitResult fit = fit_gp(u, v);
  SurrogateModel m;
  m.train_u = u;
  m.train_v = v;
  m.hyper = fit.hyper;
  m.floor_value = floor_value;
  m.yield_onset = yield_onset;
  m.input_min = input_min;
  m.input_max = input_max;
  const auto n = static_cast<Eigen::Index>(u.size());
  m.alpha.assign(fit.alpha.data(), fit.alpha.data() + n);
  const MatrixXd l = fit.llt.matrixL();
  m.chol.resize(static_cast<std::size_t>(n) * n, 0.0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      m.chol[static_cast<std::size_t>(i) * n + j] = l(i, j);
  return m;
}

void check_inputs(const std::vector<double>& inputs, const std::vector<double>& targets) {
  if (inputs.size() != targets.size())
    throw InputError("surrogate training: inputs and targets differ in length");
  if (inputs.size() < 2) throw InputError("surrogate training needs >= 2 samples");
  std::set<double> uniq(inputs.begin(), inputs.end());
  if (uniq.size() != inputs.size())
    throw InputError("surrogate training: duplicate inputs");
  for (double x : inputs)
    if (!(x > 0.0)) throw InputError("surrogate training: inputs must be positive");
}

} // namespace

SurrogateModel train(const std::vector<double>& inputs,
                     const std::vector<double>& targets, double floor_value) {
  check_inputs(inputs, targets);
  std::vector<double> u(inputs.size()), v(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    u[i] = std::log(inputs[i]);
    if (targets[i] < 0.0)
      throw InputError("surrogate training: negative target, log transform undefined");
    v[i] = std::log(std::max(targets[i], floor_value));
  }
  const auto [lo, hi] = std::minmax_element(inputs.begin(), inputs.end());
  return finish_model(u, v, floor_value, 0.0, *lo, *hi);
}

SurrogateModel train(const TrainingSet& set, double floor_value) {
  check_inputs(set.inputs, set.targets);
  if (set.yield_onset <= 0.0) return train(set.inputs, set.targets, floor_value);

  // GP over the plastic branch only, input shifted by the onset;
  // sub-onset inputs are predicted as exactly zero
  std::vector<double> u, v;
  for (std::size_t i = 0; i < set.inputs.size(); ++i) {
    if (set.targets[i] <= 0.0 || set.inputs[i] <= set.yield_onset) continue;
    u.push_back(std::log(set.inputs[i] - set.yield_onset));
    v.push_back(std::log(std::max(set.targets[i], floor_value)));
  }
  if (u.size() < 2) return train(set.inputs, set.targets, floor_value);
  const auto [lo, hi] = std::minmax_element(set.inputs.begin(), set.inputs.end());
  SurrogateModel m = finish_model(u, v, floor_value, set.yield_onset, *lo,
                                  std::max(set.input_max, *hi));
  return m;
}

Prediction predict(const SurrogateModel& model, const std::vector<double>& sigma_vm) {
  if (model.size() == 0) throw InputError("predict: empty model");
  const auto n = static_cast<Eigen::Index>(model.size());
  Prediction out;
  out.values.reserve(sigma_vm.size());
  out.log_std.reserve(sigma_vm.size());
  out.extrapolation_warning.reserve(sigma_vm.size());

  const double inv2l2 = 0.5 / (model.hyper.length_scale * model.hyper.length_scale);
  Eigen::VectorXd k(n), w(n);
  for (double svm : sigma_vm) {
    const bool warn = !(svm > 0.0 && svm <= model.input_max * (1.0 + 1e-12));
    out.extrapolation_warning.push_back(warn);
    if (model.yield_onset > 0.0 && svm <= model.yield_onset) {
      out.values.push_back(0.0);
      out.log_std.push_back(0.0);
      continue;
    }
    const double u = model.yield_onset > 0.0 ? std::log(svm - model.yield_onset)
                                             : std::log(std::max(svm, 1e-300));
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = u - model.train_u[static_cast<std::size_t>(i)];
      k[i] = model.hyper.signal_variance * std::exp(-d * d * inv2l2);
    }
    double mean = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      mean += k[i] * model.alpha[static_cast<std::size_t>(i)];
    // forward-substitute L w = k for the posterior variance
    for (Eigen::Index i = 0; i < n; ++i) {
      double acc = k[i];
      for (Eigen::Index j = 0; j < i; ++j)
        acc -= model.chol[static_cast<std::size_t>(i) * n + j] * w[j];
      w[i] = acc / model.chol[static_cast<std::size_t>(i) * n + i];
    }
    const double var = std::max(
        model.hyper.signal_variance + model.hyper.noise_variance - w.squaredNorm(), 0.0);
    const double value = std::exp(mean);
    out.values.push_back(value <= model.floor_value * (1.0 + 1e-9) ? 0.0 : value);
    out.log_std.push_back(std::sqrt(var));
  }
  return out;
}

std::vector<double> loo_log_errors(const SurrogateModel& model) {
  const auto n = static_cast<Eigen::Index>(model.size());
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j <= i; ++j)
      l(i, j) = model.chol[static_cast<std::size_t>(i) * n + j];
  const Eigen::MatrixXd kinv =
      l.transpose().triangularView<Eigen::Upper>().solve(Eigen::MatrixXd(
          l.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(n, n))));
  std::vector<double> out(model.size());
  for (Eigen::Index i = 0; i < n; ++i)
    out[static_cast<std::size_t>(i)] =
        model.alpha[static_cast<std::size_t>(i)] / kinv(i, i);
  return out;
}

std::string to_json(const SurrogateModel& model) {
  nlohmann::json j;
  j["format"] = "plascor-surrogate";
  j["version"] = 1;
  j["train_u"] = model.train_u;
  j["train_v"] = model.train_v;
  j["alpha"] = model.alpha;
  j["chol"] = model.chol;
  j["length_scale"] = model.hyper.length_scale;
  j["signal_variance"] = model.hyper.signal_variance;
  j["noise_variance"] = model.hyper.noise_variance;
  j["floor_value"] = model.floor_value;
  j["yield_onset"] = model.yield_onset;
  j["input_min"] = model.input_min;
  j["input_max"] = model.input_max;
  return j.dump(2);
}

SurrogateModel model_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "plascor-surrogate" || j.value("version", 0) != 1)
    throw InputError("unrecognized surrogate model file format");
  SurrogateModel m;
  m.train_u = j.at("train_u").get<std::vector<double>>();
  m.train_v = j.at("train_v").get<std::vector<double>>();
  m.alpha = j.at("alpha").get<std::vector<double>>();
  m.chol = j.at("chol").get<std::vector<double>>();
  m.hyper.length_scale = j.at("length_scale").get<double>();
  m.hyper.signal_variance = j.at("signal_variance").get<double>();
  m.hyper.noise_variance = j.at("noise_variance").get<double>();
  m.floor_value = j.at("floor_value").get<double>();
  m.yield_onset = j.at("yield_onset").get<double>();
  m.input_min = j.at("input_min").get<double>();
  m.input_max = j.at("input_max").get<double>();
  return m;
}

void save_model(const SurrogateModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << to_json(model) << "\n";
}

SurrogateModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

} // namespace plascor
