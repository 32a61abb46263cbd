#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "plascor/corrector.hpp"
#include "plascor/load_history.hpp"
#include "plascor/material.hpp"
#include "plascor/reconstruction.hpp"
#include "plascor/surrogate.hpp"

namespace plascor {

/// 17 significant digits, enough to round-trip a double exactly.
std::string format_double(double v);

/// Default worker count: $PLASCOR_WORKERS if set, else hardware concurrency.
std::size_t default_workers();

struct RunConfig {
  std::string field_path;
  std::string load_path;
  std::string output_dir = ".";
  MaterialParams material;
  enum class Mode { Direct, Surrogate } mode = Mode::Direct;
  std::string surrogate_model_path;           // used in surrogate mode
  std::vector<QoiSelector> qois;              // at least one
  std::vector<std::size_t> snapshot_indices;  // time indices to dump
  bool reconstruct = false;                   // write tensor components in snapshots
  std::size_t workers = 0;                    // 0 means default_workers()
  double failure_threshold = 0.0;             // tolerated fraction of failed points
  SolverSettings solver;

  void validate(std::size_t n_time_samples) const;
};

std::vector<ElasticPointRecord> read_elastic_field(const std::string& path);
LoadHistory read_load_csv(const std::string& path);

/// key=value file, '#' comments; later keys win. Used as a config layer the
/// CLI flags override.
std::map<std::string, std::string> read_key_value_config(const std::string& path);

struct RunResult {
  std::size_t n_points = 0;
  std::size_t n_steps = 0;
  std::vector<PointFailure> failures;
  double wall_seconds = 0.0;
  double point_steps_per_second = 0.0;
  std::vector<std::string> output_files;
  bool failure_threshold_exceeded = false;
};

/// Parallel corrector run over all points; writes <output_dir>/qoi.csv,
/// one snapshot CSV per requested index, and a failure sidecar when any
/// point fails. Output row order is id order regardless of worker count.
RunResult run_correction(const RunConfig& config);

struct ScatterResult {
  std::vector<std::string> ids;
  std::vector<double> a, b, relative_difference;
  double fraction_within_band = 0.0; // |b-a| <= band * |a|
};

/// Pairs one named column of two qoi.csv files by id.
ScatterResult compute_scatter(const std::string& series_a_path,
                              const std::string& series_b_path,
                              const std::string& column, double band = 0.2);
void emit_scatter(const ScatterResult& scatter, const std::string& out_path);

} // namespace plascor
