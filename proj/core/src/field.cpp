#include "plascor/field.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace plascor {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::size_t default_workers() {
  if (const char* env = std::getenv("PLASCOR_WORKERS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end && *end == '\0' && n > 0) return static_cast<std::size_t>(n);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void RunConfig::validate(std::size_t n_time_samples) const {
  if (qois.empty()) throw InputError("config: QoI list must be non-empty");
  for (std::size_t idx : snapshot_indices)
    if (idx >= n_time_samples)
      throw InputError("config: snapshot index " + std::to_string(idx) +
                       " outside load history (" + std::to_string(n_time_samples) +
                       " samples)");
  if (mode == Mode::Surrogate) {
    if (surrogate_model_path.empty())
      throw InputError("config: surrogate mode needs a model path");
    if (qois.size() != 1)
      throw CapabilityError("surrogate mode predicts a single QoI");
    if (!snapshot_indices.empty() || reconstruct)
      throw CapabilityError("surrogate mode has no time series; snapshots and "
                            "reconstruction need direct mode");
  }
  if (!(failure_threshold >= 0.0 && failure_threshold <= 1.0))
    throw InputError("config: failure threshold must lie in [0, 1]");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto a = cell.find_first_not_of(" \t\r");
    if (a == std::string::npos) {
      out.emplace_back();
    } else {
      const auto b = cell.find_last_not_of(" \t\r");
      out.push_back(cell.substr(a, b - a + 1));
    }
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& cell, const std::string& path,
                    std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw InputError(path + ":" + std::to_string(line_no) + ": bad number '" +
                     cell + "'");
  }
}

} // namespace

std::vector<ElasticPointRecord> read_elastic_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file, header required");
  const auto header = split_csv_line(line);

  const std::vector<std::string> tensor_names = {"s11", "s22", "s33",
                                                 "s12", "s13", "s23"};
  auto col = [&](const std::string& name) -> int {
    const auto it = std::find(header.begin(), header.end(), name);
    return it == header.end() ? -1 : static_cast<int>(it - header.begin());
  };
  const int id_col = col("id"), svm_col = col("svm"), tr_col = col("tr");
  int tensor_cols[6];
  int n_tensor = 0;
  for (int k = 0; k < 6; ++k) {
    tensor_cols[k] = col(tensor_names[static_cast<std::size_t>(k)]);
    if (tensor_cols[k] >= 0) ++n_tensor;
  }
  if (id_col < 0) throw InputError(path + ": header must contain an 'id' column");
  if (n_tensor != 0 && n_tensor != 6)
    throw InputError(path + ": tensor columns must be all of s11..s23 or none");
  if (svm_col < 0 && n_tensor == 0)
    throw InputError(path + ": need an 'svm' column or the six tensor columns");

  std::vector<ElasticPointRecord> records;
  std::vector<std::string> inconsistent;
  std::set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw InputError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " columns, got " +
                       std::to_string(cells.size()));
    ElasticPointRecord rec;
    rec.id = cells[static_cast<std::size_t>(id_col)];
    if (rec.id.empty())
      throw InputError(path + ":" + std::to_string(line_no) + ": empty id");
    if (!seen.insert(rec.id).second)
      throw InputError(path + ":" + std::to_string(line_no) + ": duplicate id '" +
                       rec.id + "'");
    if (n_tensor == 6) {
      SymTensor3 dev;
      double* comp[6] = {&dev.xx, &dev.yy, &dev.zz, &dev.xy, &dev.xz, &dev.yz};
      for (int k = 0; k < 6; ++k)
        *comp[k] = parse_double(cells[static_cast<std::size_t>(tensor_cols[k])],
                                path, line_no);
      rec.dev_sigma_sharp = dev;
      rec.trace_sigma_sharp =
          tr_col >= 0 ? parse_double(cells[static_cast<std::size_t>(tr_col)], path,
                                     line_no)
                      : 0.0;
    }
    if (svm_col >= 0)
      rec.sigma_vm_sharp =
          parse_double(cells[static_cast<std::size_t>(svm_col)], path, line_no);
    else
      rec.sigma_vm_sharp = von_mises(*rec.dev_sigma_sharp);
    try {
      rec.validate();
    } catch (const InputError&) {
      inconsistent.push_back(rec.id);
    }
    records.push_back(std::move(rec));
  }
  if (!inconsistent.empty()) {
    std::string msg = path + ": svm inconsistent with tensor columns for ids:";
    for (const auto& id : inconsistent) msg += " " + id;
    throw InputError(msg);
  }
  return records;
}

LoadHistory read_load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file, header required");
  const auto header = split_csv_line(line);
  if (header.size() != 2 || header[0] != "t" || header[1] != "f")
    throw InputError(path + ": expected header 't,f'");
  LoadHistory load;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 2)
      throw InputError(path + ":" + std::to_string(line_no) + ": expected 2 columns");
    load.times.push_back(parse_double(cells[0], path, line_no));
    load.values.push_back(parse_double(cells[1], path, line_no));
  }
  load.validate();
  return load;
}

std::map<std::string, std::string> read_key_value_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq <= a)
      throw InputError(path + ":" + std::to_string(line_no) +
                       ": expected key = value");
    auto trim = [](std::string s) {
      const auto x = s.find_first_not_of(" \t\r");
      if (x == std::string::npos) return std::string();
      const auto y = s.find_last_not_of(" \t\r");
      return s.substr(x, y - x + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

namespace {

struct PointOutput {
  std::vector<double> qoi_values;
  std::vector<ScalarSample> snapshots;       // one per requested index
  std::vector<SymTensor3> snapshot_stress;   // reconstructed, if requested
  std::vector<PointFailure> failures;
};

void write_or_throw(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw IoError("write failed on " + path);
}

} // namespace

RunResult run_correction(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ElasticPointRecord> records = read_elastic_field(config.field_path);
  const LoadHistory load = read_load_csv(config.load_path);
  config.validate(load.size());

  std::sort(records.begin(), records.end(),
            [](const ElasticPointRecord& a, const ElasticPointRecord& b) {
              return a.id < b.id;
            });
  if (config.reconstruct)
    for (const auto& rec : records)
      if (!rec.has_tensor())
        throw CapabilityError("reconstruction requested but record " + rec.id +
                              " carries no tensor data");

  const std::size_t n = records.size();
  std::vector<PointOutput> outputs(n);

  if (config.mode == RunConfig::Mode::Surrogate) {
    const SurrogateModel model = load_model(config.surrogate_model_path);
    std::vector<double> inputs(n);
    for (std::size_t i = 0; i < n; ++i) inputs[i] = records[i].sigma_vm_sharp;
    const Prediction pred = predict(model, inputs);
    for (std::size_t i = 0; i < n; ++i) outputs[i].qoi_values = {pred.values[i]};
  } else {
    const std::size_t workers =
        std::max<std::size_t>(1, std::min(config.workers ? config.workers
                                                         : default_workers(),
                                          std::max<std::size_t>(n, 1)));
    auto worker_fn = [&](std::size_t first, std::size_t last) {
      for (std::size_t i = first; i < last; ++i) {
        const ElasticPointRecord& rec = records[i];
        PointOutput& out = outputs[i];
        CorrectedSeries series =
            integrate_point(rec.sigma_vm_sharp, load, config.material, config.solver);
        for (auto& f : series.failures) f.point_id = rec.id;
        out.failures = series.failures;
        out.qoi_values.reserve(config.qois.size());
        for (const QoiSelector& q : config.qois)
          out.qoi_values.push_back(
              evaluate_qoi(q, series, rec.sigma_vm_sharp, load, config.material));
        if (!config.snapshot_indices.empty()) {
          std::vector<SymTensor3> stress;
          if (config.reconstruct) stress = reconstruct_stress(series, rec, load);
          for (std::size_t idx : config.snapshot_indices) {
            out.snapshots.push_back(series.samples[idx]);
            if (config.reconstruct) out.snapshot_stress.push_back(stress[idx]);
          }
        }
      }
    };
    if (workers == 1) {
      worker_fn(0, n);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      const std::size_t chunk = (n + workers - 1) / workers;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t first = w * chunk;
        if (first >= n) break;
        pool.emplace_back(worker_fn, first, std::min(first + chunk, n));
      }
      for (auto& t : pool) t.join();
    }
  }

  RunResult result;
  result.n_points = n;
  result.n_steps = load.size();

  std::filesystem::create_directories(config.output_dir);
  const std::filesystem::path dir(config.output_dir);

  {
    std::string csv = "id";
    if (config.mode == RunConfig::Mode::Surrogate)
      csv += "," + config.qois[0].name();
    else
      for (const QoiSelector& q : config.qois) csv += "," + q.name();
    csv += "\n";
    for (std::size_t i = 0; i < n; ++i) {
      csv += records[i].id;
      for (double v : outputs[i].qoi_values) csv += "," + format_double(v);
      csv += "\n";
    }
    const std::string path = (dir / "qoi.csv").string();
    write_or_throw(path, csv);
    result.output_files.push_back(path);
  }

  for (std::size_t k = 0; k < config.snapshot_indices.size(); ++k) {
    std::string csv = "id,s,e,e_p,p_hat,x,f_y";
    if (config.reconstruct) csv += ",sig11,sig22,sig33,sig12,sig13,sig23";
    csv += "\n";
    for (std::size_t i = 0; i < n; ++i) {
      const ScalarSample& smp = outputs[i].snapshots[k];
      csv += records[i].id + "," + format_double(smp.s) + "," + format_double(smp.e) +
             "," + format_double(smp.e_p) + "," + format_double(smp.p_hat) + "," +
             format_double(smp.x) + "," + format_double(smp.f_y);
      if (config.reconstruct) {
        const SymTensor3& sig = outputs[i].snapshot_stress[k];
        for (double c : {sig.xx, sig.yy, sig.zz, sig.xy, sig.xz, sig.yz})
          csv += "," + format_double(c);
      }
      csv += "\n";
    }
    const std::string path =
        (dir / ("snapshot_" + std::to_string(config.snapshot_indices[k]) + ".csv"))
            .string();
    write_or_throw(path, csv);
    result.output_files.push_back(path);
  }

  std::size_t failed_points = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!outputs[i].failures.empty()) ++failed_points;
    result.failures.insert(result.failures.end(), outputs[i].failures.begin(),
                           outputs[i].failures.end());
  }
  if (!result.failures.empty()) {
    std::string csv = "id,time_index,message\n";
    for (const PointFailure& f : result.failures)
      csv += f.point_id + "," + std::to_string(f.time_index) + "," + f.what + "\n";
    const std::string path = (dir / "failures.csv").string();
    write_or_throw(path, csv);
    result.output_files.push_back(path);
  }
  result.failure_threshold_exceeded =
      n > 0 && static_cast<double>(failed_points) >
                   config.failure_threshold * static_cast<double>(n);
  if (result.failures.empty()) result.failure_threshold_exceeded = false;

  const auto t1 = std::chrono::steady_clock::now();
  result.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  if (result.wall_seconds > 0.0)
    result.point_steps_per_second =
        static_cast<double>(n) * static_cast<double>(load.size()) /
        result.wall_seconds;
  return result;
}

namespace {

std::map<std::string, double> read_qoi_column(const std::string& path,
                                              const std::string& column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw InputError(path + ": empty file");
  const auto header = split_csv_line(line);
  const auto it = std::find(header.begin(), header.end(), column);
  if (header.empty() || header[0] != "id" || it == header.end())
    throw InputError(path + ": expected columns 'id' and '" + column + "'");
  const auto col = static_cast<std::size_t>(it - header.begin());
  std::map<std::string, double> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw InputError(path + ":" + std::to_string(line_no) + ": bad column count");
    out[cells[0]] = parse_double(cells[col], path, line_no);
  }
  return out;
}

} // namespace

ScatterResult compute_scatter(const std::string& series_a_path,
                              const std::string& series_b_path,
                              const std::string& column, double band) {
  const auto a_map = read_qoi_column(series_a_path, column);
  const auto b_map = read_qoi_column(series_b_path, column);

  std::string missing;
  for (const auto& [id, v] : a_map)
    if (!b_map.count(id)) missing += " " + id;
  for (const auto& [id, v] : b_map)
    if (!a_map.count(id)) missing += " " + id;
  if (!missing.empty())
    throw InputError("scatter: id sets differ; unmatched ids:" + missing);

  ScatterResult out;
  std::size_t in_band = 0;
  for (const auto& [id, va] : a_map) {
    const double vb = b_map.at(id);
    out.ids.push_back(id);
    out.a.push_back(va);
    out.b.push_back(vb);
    const double rel = va != 0.0 ? (vb - va) / std::abs(va)
                       : vb == 0.0 ? 0.0
                                   : std::numeric_limits<double>::infinity();
    out.relative_difference.push_back(rel);
    const bool ok = va == 0.0 ? vb == 0.0 : std::abs(vb - va) <= band * std::abs(va);
    if (ok) ++in_band;
  }
  out.fraction_within_band =
      out.ids.empty() ? 1.0
                      : static_cast<double>(in_band) /
                            static_cast<double>(out.ids.size());
  return out;
}

void emit_scatter(const ScatterResult& scatter, const std::string& out_path) {
  std::string csv = "id,a,b,relative_difference\n";
  for (std::size_t i = 0; i < scatter.ids.size(); ++i)
    csv += scatter.ids[i] + "," + format_double(scatter.a[i]) + "," +
           format_double(scatter.b[i]) + "," +
           format_double(scatter.relative_difference[i]) + "\n";
  csv += "# fraction_within_band," + format_double(scatter.fraction_within_band) + "\n";
  write_or_throw(out_path, csv);
}

} // namespace plascor
