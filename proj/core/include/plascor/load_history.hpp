#pragma once

#include <cstddef>
#include <vector>

#include "plascor/errors.hpp"

namespace plascor {

/// Sampled proportional load function f(t). Times strictly increasing.
/// Reversals must coincide with samples; peaks between samples are not
/// reconstructed.
struct LoadHistory {
  std::vector<double> times;
  std::vector<double> values;

  std::size_t size() const { return times.size(); }
  void validate() const;
};

/// Interior indices where the monotonic direction of f flips.
/// Plateaus carry the previous direction.
std::vector<std::size_t> detect_reversals(const LoadHistory& load);

/// Indices at which an increasing branch starts: index 0 if the history
/// opens upward, plus every reversal followed by increasing f.
/// These delimit the cycle windows used for per-cycle quantities.
std::vector<std::size_t> positive_going_indices(const LoadHistory& load);

/// [first, last] sample window of the 1-based cycle_index-th cycle.
std::pair<std::size_t, std::size_t> cycle_window(const LoadHistory& load,
                                                 std::size_t cycle_index);

/// Same path with `refinement` linear substeps per segment.
LoadHistory resample(const LoadHistory& load, std::size_t refinement);

/// f: 0 -> peak in `steps_per_branch` uniform increments.
LoadHistory make_ramp(double peak, std::size_t steps_per_branch, double t_end = 1.0);

/// Triangle wave: 0 -> +amp, then n_cycles times (-amp, +amp) alternating,
/// closing with a rise back to 0.
LoadHistory make_triangle_cycles(double amp, std::size_t n_cycles,
                                 std::size_t steps_per_branch);

} // namespace plascor
