#include "plascor/load_history.hpp"

#include <cmath>
#include <string>

namespace plascor {

namespace {
int sign_of(double x) { return (x > 0.0) - (x < 0.0); }
} // namespace

void LoadHistory::validate() const {
  if (times.size() != values.size())
    throw InputError("load history: times and values differ in length");
  if (times.size() < 2)
    throw InputError("load history needs at least 2 samples");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw InputError("load history times must be strictly increasing at index " +
                       std::to_string(i));
}

std::vector<std::size_t> detect_reversals(const LoadHistory& load) {
  load.validate();
  std::vector<std::size_t> out;
  int prev_dir = 0;
  for (std::size_t i = 1; i < load.size(); ++i) {
    const int d = sign_of(load.values[i] - load.values[i - 1]);
    if (d == 0) continue; // plateau carries the previous direction
    if (prev_dir != 0 && d != prev_dir) out.push_back(i - 1);
    prev_dir = d;
  }
  return out;
}

std::vector<std::size_t> positive_going_indices(const LoadHistory& load) {
  const auto reversals = detect_reversals(load);
  std::vector<std::size_t> out;
  // direction of the first non-plateau segment
  int first_dir = 0;
  for (std::size_t i = 1; i < load.size() && first_dir == 0; ++i)
    first_dir = sign_of(load.values[i] - load.values[i - 1]);
  if (first_dir > 0) out.push_back(0);
  for (std::size_t r : reversals) {
    // direction after the reversal
    for (std::size_t i = r + 1; i < load.size(); ++i) {
      const int d = sign_of(load.values[i] - load.values[i - 1]);
      if (d != 0) {
        if (d > 0) out.push_back(r);
        break;
      }
    }
  }
  return out;
}

std::pair<std::size_t, std::size_t> cycle_window(const LoadHistory& load,
                                                 std::size_t cycle_index) {
  const auto pg = positive_going_indices(load);
  if (cycle_index == 0 || pg.size() < cycle_index + 1)
    throw InputError("cycle index " + std::to_string(cycle_index) +
                     " out of range: history contains " +
                     std::to_string(pg.empty() ? 0 : pg.size() - 1) + " full cycles");
  return {pg[cycle_index - 1], pg[cycle_index]};
}

LoadHistory resample(const LoadHistory& load, std::size_t refinement) {
  load.validate();
  if (refinement < 1) throw InputError("refinement must be >= 1");
  if (refinement == 1) return load;
  LoadHistory out;
  out.times.reserve((load.size() - 1) * refinement + 1);
  out.values.reserve(out.times.capacity());
  out.times.push_back(load.times.front());
  out.values.push_back(load.values.front());
  for (std::size_t i = 1; i < load.size(); ++i) {
    const double t0 = load.times[i - 1], t1 = load.times[i];
    const double f0 = load.values[i - 1], f1 = load.values[i];
    for (std::size_t k = 1; k <= refinement; ++k) {
      const double a = static_cast<double>(k) / static_cast<double>(refinement);
      out.times.push_back(t0 + a * (t1 - t0));
      out.values.push_back(f0 + a * (f1 - f0));
    }
  }
  // keep the original sample values bit-exact at segment ends
  for (std::size_t i = 0; i < load.size(); ++i) {
    out.times[i * refinement] = load.times[i];
    out.values[i * refinement] = load.values[i];
  }
  return out;
}

LoadHistory make_ramp(double peak, std::size_t steps_per_branch, double t_end) {
  LoadHistory out;
  out.times.reserve(steps_per_branch + 1);
  out.values.reserve(steps_per_branch + 1);
  for (std::size_t i = 0; i <= steps_per_branch; ++i) {
    const double a = static_cast<double>(i) / static_cast<double>(steps_per_branch);
    out.times.push_back(a * t_end);
    out.values.push_back(a * peak);
  }
  return out;
}

LoadHistory make_triangle_cycles(double amp, std::size_t n_cycles,
                                 std::size_t steps_per_branch) {
  // 0 -> +amp, then n_cycles alternations (-amp, +amp interleaved),
  // closing with a rise from -amp back to 0.
  std::vector<double> nodes;
  nodes.push_back(0.0);
  nodes.push_back(amp);
  for (std::size_t c = 0; c < n_cycles; ++c) {
    nodes.push_back(-amp);
    if (c + 1 < n_cycles) nodes.push_back(amp);
  }
  nodes.push_back(0.0);

  LoadHistory out;
  out.times.push_back(0.0);
  out.values.push_back(nodes[0]);
  const double dt = 1.0 / static_cast<double>(steps_per_branch);
  for (std::size_t seg = 1; seg < nodes.size(); ++seg) {
    for (std::size_t k = 1; k <= steps_per_branch; ++k) {
      const double a = static_cast<double>(k) / static_cast<double>(steps_per_branch);
      out.times.push_back(out.times.back() + dt);
      out.values.push_back(nodes[seg - 1] + a * (nodes[seg] - nodes[seg - 1]));
    }
  }
  return out;
}

} // namespace plascor
