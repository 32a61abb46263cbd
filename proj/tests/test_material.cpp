#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "plascor/material.hpp"

using namespace plascor;

TEST_CASE("lame conversion") {
  const auto [lambda, mu] = lame_from_engineering(200000.0, 0.3);
  CHECK(mu == doctest::Approx(76923.0769230769).epsilon(1e-12));
  CHECK(lambda == doctest::Approx(115384.615384615).epsilon(1e-12));

  const auto simple = lame_from_engineering(1.0, 0.0);
  CHECK(simple.mu == 0.5);
  CHECK(simple.lambda == 0.0);

  const auto soft = lame_from_engineering(75500.0, 0.3);
  CHECK(soft.mu == doctest::Approx(29038.4615384615).epsilon(1e-12));

  CHECK_THROWS_AS(lame_from_engineering(-1.0, 0.3), ParameterError);
  CHECK_THROWS_AS(lame_from_engineering(1.0, 0.5), ParameterError);
  CHECK_THROWS_AS(lame_from_engineering(1.0, -1.0), ParameterError);
}

TEST_CASE("material params validation and derived constants") {
  const auto mp = testing::reference_material();
  CHECK(mp.mu == doctest::Approx(200000.0 / 2.6).epsilon(1e-15));
  CHECK(mp.lambda ==
        doctest::Approx(200000.0 * 0.3 / (1.3 * 0.4)).epsilon(1e-15));

  CHECK_THROWS_AS(MaterialParams::make(200000, 0.3, -1, 0, 0, 0, 0), ParameterError);
  CHECK_THROWS_AS(MaterialParams::make(200000, 0.3, 100, -1, 0, 0, 0), ParameterError);
  CHECK_THROWS_AS(MaterialParams::make(200000, 0.3, 100, 0, -1, 0, 0), ParameterError);
  CHECK_THROWS_AS(MaterialParams::make(200000, 0.3, 100, 0, 0, -1, 0), ParameterError);
  CHECK_THROWS_AS(MaterialParams::make(200000, 0.3, 100, 0, 0, 0, -1), ParameterError);
}

TEST_CASE("von mises") {
  const double a = 123.0;
  const SymTensor3 uni{2 * a / 3, -a / 3, -a / 3, 0, 0, 0};
  CHECK(von_mises(uni) == doctest::Approx(a).epsilon(1e-14));

  CHECK(von_mises(SymTensor3::zero()) == 0.0);

  const double tau = 7.0;
  const SymTensor3 shear{0, 0, 0, tau, 0, 0};
  CHECK(von_mises(shear) == doctest::Approx(std::sqrt(3.0) * tau).epsilon(1e-14));
  // brute-force contraction with both symmetric off-diagonal entries
  double acc = 0.0;
  const double full[3][3] = {{0, tau, 0}, {tau, 0, 0}, {0, 0, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) acc += full[i][j] * full[i][j];
  CHECK(von_mises(shear) == doctest::Approx(std::sqrt(1.5 * acc)).epsilon(1e-14));

  const SymTensor3 not_dev{1, 1, 1, 0, 0, 0};
  CHECK_THROWS_AS(von_mises(not_dev), ParameterError);
}

TEST_CASE("von mises homogeneity") {
  const SymTensor3 t{2, -1.5, -0.5, 0.3, -0.7, 1.1};
  const double base = von_mises(t);
  for (double c : {-3.0, -1.0, 0.0, 0.5, 10.0})
    CHECK(von_mises(t * c) == doctest::Approx(std::abs(c) * base).epsilon(1e-13));
}

TEST_CASE("deviatoric projection") {
  const SymTensor3 t{5, -2, 3, 1, 0.5, -1};
  const SymTensor3 d = deviatoric(t);
  CHECK(std::abs(d.trace()) <= 1e-12 * frobenius_norm(t));
  const SymTensor3 dd = deviatoric(d);
  CHECK(frobenius_norm(dd - d) <= 1e-12 * frobenius_norm(d));
}

TEST_CASE("double contraction") {
  const SymTensor3 a{1, 2, 3, 4, 5, 6};
  const SymTensor3 b{-1, 0.5, 2, 1, -2, 0.25};
  CHECK(ddot(a, b) == ddot(b, a));
  // off-diagonals enter twice
  CHECK(ddot(a, b) ==
        doctest::Approx(1 * -1 + 2 * 0.5 + 3 * 2 + 2 * (4 * 1 + 5 * -2 + 6 * 0.25))
            .epsilon(1e-15));
}

TEST_CASE("isotropic hardening") {
  const auto mp = testing::reference_material();
  CHECK(isotropic_hardening(0.0, mp) == 0.0);
  CHECK(isotropic_hardening(0.1, mp) ==
        doctest::Approx(100.0 * (1.0 - std::exp(-1.0))).epsilon(1e-14));
  CHECK(isotropic_hardening(1e6, mp) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(isotropic_hardening(2.0, mp) < mp.Q);
  CHECK_THROWS_AS(isotropic_hardening(-0.1, mp), ParameterError);

  // R'(0) = Q b by finite difference
  const double h = 1e-9;
  const double slope = isotropic_hardening(h, mp) / h;
  CHECK(slope == doctest::Approx(mp.Q * mp.b).epsilon(1e-6));

  // monotone
  double prev = 0.0;
  for (double p = 0.0; p <= 1.0; p += 0.01) {
    const double r = isotropic_hardening(p, mp);
    CHECK(r >= prev);
    prev = r;
  }
}
