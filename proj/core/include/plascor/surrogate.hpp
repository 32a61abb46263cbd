#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "plascor/corrector.hpp"
#include "plascor/load_history.hpp"
#include "plascor/material.hpp"

namespace plascor {

/// Scalar quantity of interest extracted from one corrected series.
struct QoiSelector {
  enum class Kind { FinalEp, FinalPHat, DeltaP, Dissipation };
  Kind kind = Kind::FinalEp;
  std::size_t cycle = 1; // used by DeltaP / Dissipation

  static QoiSelector parse(const std::string& text);
  std::string name() const;
};

double evaluate_qoi(const QoiSelector& qoi, const CorrectedSeries& series,
                    double sigma_vm_sharp, const LoadHistory& load,
                    const MaterialParams& params);

/// Corrector-generated training data for the 1D surrogate.
struct TrainingSet {
  std::vector<double> inputs;  // sigma_vm_sharp, MPa
  std::vector<double> targets; // raw QoI values
  double yield_onset = 0.0;    // largest input with identically-zero QoI; 0 if none
  double input_max = 0.0;      // s_plus * sigma_y
};

/// n_s log-uniform samples on (1e-3 sigma_y, s_plus sigma_y], targets from the
/// direct corrector, plus a geometric cluster of refinement samples just above
/// the located yield onset (the target drops to zero there and the log-space
/// fit needs the steep branch resolved).
TrainingSet build_training_set(const MaterialParams& params, const LoadHistory& load,
                               std::size_t n_s, double s_plus,
                               const QoiSelector& qoi,
                               const SolverSettings& settings = {});

struct GpHyperparams {
  double length_scale = 1.0;
  double signal_variance = 1.0;
  double noise_variance = 1e-10;
};

/// Squared-exponential GP in transformed (log) coordinates. When
/// `yield_onset` > 0 the input transform is log(sigma - onset) and the model
/// predicts exactly zero at or below the onset.
struct SurrogateModel {
  std::vector<double> train_u; // transformed inputs
  std::vector<double> train_v; // log targets
  std::vector<double> alpha;   // K^{ -1} v
  std::vector<double> chol;    // lower Cholesky factor, row-major n x n
  GpHyperparams hyper;
  double floor_value = 1e-12;
  double yield_onset = 0.0;
  double input_min = 0.0; // raw-input training range
  double input_max = 0.0;

  std::size_t size() const { return train_u.size(); }
};

/// Fit on raw (input, target) pairs: log transforms on both axes, zero
/// targets replaced by floor_value, hyperparameters by marginal-likelihood
/// ascent with 5 deterministic restarts.
SurrogateModel train(const std::vector<double>& inputs,
                     const std::vector<double>& targets, double floor_value = 1e-12);

/// Same, with the onset-shifted input transform of a corrector-built set.
SurrogateModel train(const TrainingSet& set, double floor_value = 1e-12);

struct Prediction {
  std::vector<double> values;
  std::vector<double> log_std;             // posterior std in log space
  std::vector<bool> extrapolation_warning; // input outside (0, input_max]
};

Prediction predict(const SurrogateModel& model, const std::vector<double>& sigma_vm);

/// Closed-form leave-one-out residuals in log space at fixed hyperparameters.
std::vector<double> loo_log_errors(const SurrogateModel& model);

std::string to_json(const SurrogateModel& model);
SurrogateModel model_from_json(const std::string& text);
void save_model(const SurrogateModel& model, const std::string& path);
SurrogateModel load_model(const std::string& path);

} // namespace plascor
