// plascor: elasto-plastic correction of elasto-static FE fields.
//
// Subcommands: correct, qoi, surrogate train|predict, verify, scatter.
// Exit codes: 0 success, 1 input error, 2 numeric-failure threshold
// exceeded, 3 I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plascor/corrector.hpp"
#include "plascor/field.hpp"
#include "plascor/oracle.hpp"
#include "plascor/surrogate.hpp"

namespace {

struct MaterialFlags {
  std::optional<double> E, nu, sigma_y, C, D, Q, b;
};

void add_material_flags(CLI::App* app, MaterialFlags& m) {
  app->add_option("--youngs,-E", m.E, "Young's modulus [MPa]");
  app->add_option("--poisson", m.nu, "Poisson ratio");
  app->add_option("--sigma-y", m.sigma_y, "initial yield stress [MPa]");
  app->add_option("--kin-c,-C", m.C, "kinematic hardening modulus C [MPa]");
  app->add_option("--kin-d,-D", m.D, "kinematic recall D");
  app->add_option("--iso-q,-Q", m.Q, "isotropic saturation Q [MPa]");
  app->add_option("--iso-b,-b", m.b, "isotropic rate b");
}

double need(const std::optional<double>& flag,
            const std::map<std::string, std::string>& cfg, const std::string& key,
            std::optional<double> fallback = std::nullopt) {
  if (flag) return *flag;
  if (auto it = cfg.find(key); it != cfg.end()) return std::stod(it->second);
  if (fallback) return *fallback;
  throw plascor::InputError("missing material parameter '" + key + "'");
}

plascor::MaterialParams resolve_material(const MaterialFlags& m,
                                         const std::map<std::string, std::string>& cfg) {
  return plascor::MaterialParams::make(
      need(m.E, cfg, "youngs_modulus"), need(m.nu, cfg, "poisson_ratio"),
      need(m.sigma_y, cfg, "sigma_y"), need(m.C, cfg, "C", 0.0),
      need(m.D, cfg, "D", 0.0), need(m.Q, cfg, "Q", 0.0), need(m.b, cfg, "b", 0.0));
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int run_field_command(const std::string& config_path, const MaterialFlags& mat,
                      plascor::RunConfig& run, const std::vector<std::string>& qoi_flags,
                      bool quiet) {
  std::map<std::string, std::string> cfg;
  if (!config_path.empty()) cfg = plascor::read_key_value_config(config_path);

  auto take = [&](std::string& slot, const std::string& key) {
    if (slot.empty())
      if (auto it = cfg.find(key); it != cfg.end()) slot = it->second;
  };
  take(run.field_path, "field");
  take(run.load_path, "load");
  take(run.surrogate_model_path, "model");
  if (run.output_dir == ".")
    if (auto it = cfg.find("out"); it != cfg.end()) run.output_dir = it->second;
  if (run.mode == plascor::RunConfig::Mode::Direct)
    if (auto it = cfg.find("mode"); it != cfg.end() && it->second == "surrogate")
      run.mode = plascor::RunConfig::Mode::Surrogate;

  std::vector<std::string> qoi_names = qoi_flags;
  if (qoi_names.empty())
    if (auto it = cfg.find("qoi"); it != cfg.end()) qoi_names = split_list(it->second);
  if (qoi_names.empty()) qoi_names = {"p_final"};
  for (const auto& name : qoi_names)
    run.qois.push_back(plascor::QoiSelector::parse(name));

  if (run.snapshot_indices.empty())
    if (auto it = cfg.find("snapshots"); it != cfg.end())
      for (const auto& tok : split_list(it->second))
        run.snapshot_indices.push_back(std::stoul(tok));
  if (run.workers == 0)
    if (auto it = cfg.find("workers"); it != cfg.end())
      run.workers = std::stoul(it->second);

  run.material = resolve_material(mat, cfg);
  if (run.field_path.empty()) throw plascor::InputError("missing --field");
  if (run.load_path.empty()) throw plascor::InputError("missing --load");

  const plascor::RunResult result = plascor::run_correction(run);
  if (!quiet) {
    std::printf("points: %zu, steps: %zu, wall: %.3f s, %.3g point-steps/s\n",
                result.n_points, result.n_steps, result.wall_seconds,
                result.point_steps_per_second);
    for (const auto& f : result.output_files) std::printf("wrote %s\n", f.c_str());
    if (!result.failures.empty())
      std::printf("warning: %zu per-point failures (see failures.csv)\n",
                  result.failures.size());
  }
  return result.failure_threshold_exceeded ? 2 : 0;
}

int run_verify(const std::string& load_path, const MaterialFlags& mat,
               const std::string& config_path, const std::vector<double>& svm_list,
               std::size_t refinement, const std::string& out_path) {
  const plascor::MaterialParams params = resolve_material(
      mat, config_path.empty() ? std::map<std::string, std::string>{}
                               : plascor::read_key_value_config(config_path));
  const plascor::LoadHistory load = plascor::read_load_csv(load_path);

  std::string csv =
      "svm,max_abs_diff_s,max_abs_diff_ep,max_abs_diff_p,refinement_shift_p\n";
  for (double svm : svm_list) {
    const auto scalar = plascor::integrate_point(svm, load, params);

    plascor::ElasticPointRecord rec;
    rec.id = "verify";
    rec.sigma_vm_sharp = svm;
    // uniaxial-deviator direction with the requested equivalent stress
    plascor::SymTensor3 dev{2.0 / 3.0 * svm, -svm / 3.0, -svm / 3.0, 0, 0, 0};
    rec.dev_sigma_sharp = dev;
    rec.trace_sigma_sharp = svm;
    const auto tensor = plascor::oracle::integrate_tensorial(rec, load, params);

    double ds = 0, dep = 0, dp = 0;
    for (std::size_t i = 0; i < load.size(); ++i) {
      ds = std::max(ds, std::abs(scalar.samples[i].s - tensor.samples[i].s));
      dep = std::max(dep, std::abs(scalar.samples[i].e_p - tensor.samples[i].e_p));
      dp = std::max(dp,
                    std::abs(scalar.samples[i].p_hat - tensor.samples[i].state.p_hat));
    }
    const auto fine = plascor::oracle::integrate_fine(svm, load, params, refinement);
    const double shift =
        std::abs(scalar.samples.back().p_hat - fine.samples.back().p_hat);
    csv += plascor::format_double(svm) + "," + plascor::format_double(ds) + "," +
           plascor::format_double(dep) + "," + plascor::format_double(dp) + "," +
           plascor::format_double(shift) + "\n";
  }
  if (out_path.empty() || out_path == "-") {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::FILE* f = std::fopen(out_path.c_str(), "wb");
    if (!f) throw plascor::IoError("cannot open " + out_path + " for writing");
    std::fputs(csv.c_str(), f);
    std::fclose(f);
    std::printf("wrote %s\n", out_path.c_str());
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neuber-type elasto-plastic correction of elasto-static FE fields"};
  app.require_subcommand(1);

  // correct / qoi share the field-run plumbing
  std::string config_path;
  MaterialFlags mat;
  plascor::RunConfig run;
  std::vector<std::string> qoi_flags;
  std::string mode = "direct";
  bool quiet = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key=value config file");
    cmd->add_option("--field", run.field_path, "elastic field CSV (id,svm[,...])");
    cmd->add_option("--load", run.load_path, "load history CSV (t,f)");
    cmd->add_option("--out", run.output_dir, "output directory");
    cmd->add_option("--qoi", qoi_flags,
                    "QoI selector: p_final, ep_final, delta_p:N, dissipation:N");
    cmd->add_option("--workers", run.workers, "worker threads (0 = auto)");
    cmd->add_option("--failure-threshold", run.failure_threshold,
                    "tolerated fraction of failed points");
    cmd->add_option("--fy-tol", run.solver.fy_tolerance_rel,
                    "yield residual tolerance, relative to sigma_y");
    add_material_flags(cmd, mat);
  };

  CLI::App* correct = app.add_subcommand("correct", "run the corrector over a field");
  add_common(correct);
  correct->add_option("--mode", mode, "direct | surrogate");
  correct->add_option("--model", run.surrogate_model_path, "surrogate model JSON");
  correct->add_option("--snapshot", run.snapshot_indices,
                      "time index to dump as a field snapshot");
  correct->add_flag("--reconstruct", run.reconstruct,
                    "write reconstructed stress components in snapshots");
  correct->add_flag("--quiet", quiet, "suppress progress output");

  CLI::App* qoi_cmd = app.add_subcommand("qoi", "QoI summary only (no snapshots)");
  add_common(qoi_cmd);
  qoi_cmd->add_flag("--quiet", quiet, "suppress progress output");

  // surrogate train | predict
  CLI::App* surrogate = app.add_subcommand("surrogate", "1D GP surrogate over svm");
  surrogate->require_subcommand(1);

  std::string sur_load, sur_out = "model.json", sur_qoi = "p_final", sur_config;
  std::size_t n_s = 150;
  double s_plus = 8.0;
  MaterialFlags sur_mat;
  CLI::App* train_cmd = surrogate->add_subcommand("train", "fit a GP on corrector runs");
  train_cmd->add_option("--load", sur_load, "load history CSV (t,f)")->required();
  train_cmd->add_option("--config", sur_config, "key=value config file");
  train_cmd->add_option("--out", sur_out, "model output path");
  train_cmd->add_option("--qoi", sur_qoi, "QoI selector");
  train_cmd->add_option("--n-s", n_s, "training grid size");
  train_cmd->add_option("--s-plus", s_plus, "upper input bound, units of sigma_y");
  add_material_flags(train_cmd, sur_mat);

  std::string pred_model, pred_out = "-";
  std::vector<double> pred_inputs;
  std::string pred_field;
  CLI::App* pred_cmd = surrogate->add_subcommand("predict", "evaluate a trained model");
  pred_cmd->add_option("--model", pred_model, "model JSON path")->required();
  pred_cmd->add_option("--svm", pred_inputs, "equivalent stress input [MPa]");
  pred_cmd->add_option("--field", pred_field, "elastic field CSV to predict over");
  pred_cmd->add_option("--out", pred_out, "output CSV path, '-' for stdout");

  // verify
  std::string ver_load, ver_out = "-", ver_config;
  std::vector<double> ver_svm;
  std::size_t ver_refine = 10;
  MaterialFlags ver_mat;
  CLI::App* verify = app.add_subcommand(
      "verify", "compare the scalar corrector against independent references");
  verify->add_option("--load", ver_load, "load history CSV (t,f)")->required();
  verify->add_option("--config", ver_config, "key=value config file");
  verify->add_option("--svm", ver_svm, "equivalent stress levels [MPa]")->required();
  verify->add_option("--refinement", ver_refine, "substeps for the refined rerun");
  verify->add_option("--out", ver_out, "report CSV path, '-' for stdout");
  add_material_flags(verify, ver_mat);

  // scatter
  std::string sc_a, sc_b, sc_col = "p_final", sc_out = "scatter.csv";
  double sc_band = 0.2;
  CLI::App* scatter = app.add_subcommand("scatter", "pair two qoi.csv files by id");
  scatter->add_option("--a", sc_a, "first qoi.csv")->required();
  scatter->add_option("--b", sc_b, "second qoi.csv")->required();
  scatter->add_option("--column", sc_col, "QoI column name");
  scatter->add_option("--band", sc_band, "relative agreement band");
  scatter->add_option("--out", sc_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (correct->parsed() || qoi_cmd->parsed()) {
      if (qoi_cmd->parsed()) {
        run.snapshot_indices.clear();
        run.reconstruct = false;
        mode = "direct";
      }
      if (mode == "surrogate")
        run.mode = plascor::RunConfig::Mode::Surrogate;
      else if (mode != "direct")
        throw plascor::InputError("unknown mode '" + mode + "'");
      return run_field_command(config_path, mat, run, qoi_flags, quiet);
    }
    if (train_cmd->parsed()) {
      const plascor::MaterialParams params = resolve_material(
          sur_mat, sur_config.empty() ? std::map<std::string, std::string>{}
                                      : plascor::read_key_value_config(sur_config));
      const plascor::LoadHistory load = plascor::read_load_csv(sur_load);
      const auto qoi = plascor::QoiSelector::parse(sur_qoi);
      const auto set = plascor::build_training_set(params, load, n_s, s_plus, qoi);
      const auto model = plascor::train(set);
      plascor::save_model(model, sur_out);
      std::printf("trained on %zu samples (grid %zu), wrote %s\n", model.size(),
                  n_s, sur_out.c_str());
      return 0;
    }
    if (pred_cmd->parsed()) {
      const auto model = plascor::load_model(pred_model);
      std::vector<std::string> ids;
      if (!pred_field.empty()) {
        for (const auto& rec : plascor::read_elastic_field(pred_field)) {
          ids.push_back(rec.id);
          pred_inputs.push_back(rec.sigma_vm_sharp);
        }
      }
      if (pred_inputs.empty())
        throw plascor::InputError("predict: give --svm values or --field");
      const auto pred = plascor::predict(model, pred_inputs);
      std::string csv = "id,svm,value,log_std,extrapolated\n";
      for (std::size_t i = 0; i < pred_inputs.size(); ++i)
        csv += (i < ids.size() ? ids[i] : std::to_string(i)) + "," +
               plascor::format_double(pred_inputs[i]) + "," +
               plascor::format_double(pred.values[i]) + "," +
               plascor::format_double(pred.log_std[i]) + "," +
               (pred.extrapolation_warning[i] ? "1" : "0") + "\n";
      if (pred_out == "-") {
        std::fputs(csv.c_str(), stdout);
      } else {
        std::FILE* f = std::fopen(pred_out.c_str(), "wb");
        if (!f) throw plascor::IoError("cannot open " + pred_out + " for writing");
        std::fputs(csv.c_str(), f);
        std::fclose(f);
      }
      return 0;
    }
    if (verify->parsed())
      return run_verify(ver_load, ver_mat, ver_config, ver_svm, ver_refine, ver_out);
    if (scatter->parsed()) {
      const auto result = plascor::compute_scatter(sc_a, sc_b, sc_col, sc_band);
      plascor::emit_scatter(result, sc_out);
      std::printf("wrote %s (%.1f%% within band)\n", sc_out.c_str(),
                  100.0 * result.fraction_within_band);
      return 0;
    }
  } catch (const plascor::IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
