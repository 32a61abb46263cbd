#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "plascor/load_history.hpp"

using namespace plascor;

namespace {

LoadHistory from_values(const std::vector<double>& values) {
  LoadHistory load;
  for (std::size_t i = 0; i < values.size(); ++i) {
    load.times.push_back(static_cast<double>(i));
    load.values.push_back(values[i]);
  }
  return load;
}

} // namespace

TEST_CASE("validation") {
  LoadHistory bad;
  bad.times = {0.0, 1.0, 1.0};
  bad.values = {0.0, 1.0, 2.0};
  CHECK_THROWS_AS(bad.validate(), InputError);

  LoadHistory mismatched;
  mismatched.times = {0.0, 1.0};
  mismatched.values = {0.0};
  CHECK_THROWS_AS(mismatched.validate(), InputError);

  CHECK_THROWS_AS(detect_reversals(from_values({1.0})), InputError);
}

TEST_CASE("reversal detection") {
  CHECK(detect_reversals(from_values({0, 0.5, 1.0, 0.5, 0})) ==
        std::vector<std::size_t>{2});

  // monotone ramp, no reversal
  std::vector<double> ramp;
  for (int i = 0; i <= 100; ++i) ramp.push_back(1.55 * i / 100.0);
  CHECK(detect_reversals(from_values(ramp)).empty());

  // plateaus carry the previous direction
  CHECK(detect_reversals(from_values({0, 1, 1, 2, 1})) ==
        std::vector<std::size_t>{3});
  // the plateau end carries the up direction; the flip lands on index 2
  CHECK(detect_reversals(from_values({0, 1, 1, 0.5})) ==
        std::vector<std::size_t>{2});
}

TEST_CASE("triangle wave carries 40 interior reversals over 20 cycles") {
  const LoadHistory load = make_triangle_cycles(1.0, 20, 10);
  load.validate();
  CHECK(detect_reversals(load).size() == 40);
  CHECK(positive_going_indices(load).size() == 21);
  CHECK(load.values.front() == 0.0);
  CHECK(load.values.back() == 0.0);

  // cycles are consecutive, 1-based, and cover increasing windows
  const auto [f1, l1] = cycle_window(load, 1);
  const auto [f20, l20] = cycle_window(load, 20);
  CHECK(f1 == 0);
  CHECK(l20 > f20);
  CHECK(cycle_window(load, 2).first == l1);
  CHECK_THROWS_AS(cycle_window(load, 21), InputError);
  CHECK_THROWS_AS(cycle_window(load, 0), InputError);
}

TEST_CASE("resample keeps original samples bit-exact") {
  const LoadHistory load = make_triangle_cycles(1.5, 2, 7);
  const std::size_t r = 9;
  const LoadHistory fine = resample(load, r);
  CHECK(fine.size() == (load.size() - 1) * r + 1);
  for (std::size_t i = 0; i < load.size(); ++i) {
    CHECK(fine.times[i * r] == load.times[i]);
    CHECK(fine.values[i * r] == load.values[i]);
  }
  fine.validate();
  CHECK(resample(load, 1).size() == load.size());
}

TEST_CASE("ramp construction") {
  const LoadHistory load = make_ramp(1.55, 1000);
  CHECK(load.size() == 1001);
  CHECK(load.values.front() == 0.0);
  CHECK(load.values.back() == doctest::Approx(1.55).epsilon(1e-15));
  CHECK(detect_reversals(load).empty());
}
