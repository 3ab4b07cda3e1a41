#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "quench/errors.hpp"
#include "quench/scaling.hpp"

using namespace quench;

TEST_CASE("per-time fit roundtrips synthetic power law exactly") {
  std::vector<std::pair<double, double>> data;
  for (int n = 2; n <= 20; ++n)
    data.emplace_back(n, 1.0 - 0.1 * std::pow(n, 0.5));
  const auto f = scaling::fit_scaling_at_time(data);
  CHECK(f.beta == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(f.gamma == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("per-time fit is invariant under point reordering") {
  std::vector<std::pair<double, double>> data;
  for (int n = 2; n <= 15; ++n)
    data.emplace_back(n, 1.0 - 0.03 * std::pow(n, 0.8));
  auto shuffled = data;
  std::mt19937 rng(11);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto a = scaling::fit_scaling_at_time(data);
  const auto b = scaling::fit_scaling_at_time(shuffled);
  CHECK(a.beta == doctest::Approx(b.beta).epsilon(1e-13));
  CHECK(a.gamma == doctest::Approx(b.gamma).epsilon(1e-13));
}

TEST_CASE("admissibility filter drops saturated points without changing the fit") {
  std::vector<std::pair<double, double>> data;
  for (int n = 2; n <= 12; ++n)
    data.emplace_back(n, 1.0 - 0.02 * std::pow(n, 0.6));
  const auto base = scaling::fit_scaling_at_time(data);
  auto padded = data;
  padded.emplace_back(40, 1e-5);   // 1-|nu| ~ 1: saturated, above ceiling
  padded.emplace_back(50, 1.0 - 1e-8);  // below floor
  const auto same = scaling::fit_scaling_at_time(padded);
  CHECK(base.beta == doctest::Approx(same.beta).epsilon(1e-13));
  CHECK(base.gamma == doctest::Approx(same.gamma).epsilon(1e-13));
  CHECK(base.n_used == same.n_used);
}

TEST_CASE("fewer than 3 admissible points throws") {
  std::vector<std::pair<double, double>> data = {
      {2.0, 1.0 - 1e-4}, {3.0, 1.0 - 2e-4}, {4.0, 1.0 - 1e-9}};
  CHECK_THROWS_AS(scaling::fit_scaling_at_time(data), ValidationError);
}

TEST_CASE("time laws: power beta and power/affine gamma") {
  scaling::ScalingFit fit;
  for (double t = 0.02; t <= 0.2; t *= 1.25) {
    scaling::TimeFit p;
    p.t = t;
    p.beta = 0.6 * std::pow(t, 0.52);
    p.gamma = 0.36 * std::pow(t, -0.042);
    fit.points.push_back(p);
  }
  scaling::fit_time_laws(fit, false);
  CHECK(fit.beta_law.amp == doctest::Approx(0.6).epsilon(1e-10));
  CHECK(fit.beta_law.expo == doctest::Approx(0.52).epsilon(1e-10));
  CHECK(fit.gamma_law.affine == false);
  CHECK(fit.gamma_law.g0 == doctest::Approx(0.36).epsilon(1e-10));
  CHECK(fit.gamma_law.g1 == doctest::Approx(-0.042).epsilon(1e-8));

  scaling::ScalingFit dfit;
  for (double t = 0.02; t <= 0.2; t *= 1.25) {
    scaling::TimeFit p;
    p.t = t;
    p.beta = 0.48 * std::pow(t, 0.47);
    p.gamma = -0.46 + 1.82 * t;
    dfit.points.push_back(p);
  }
  scaling::fit_time_laws(dfit, true);
  CHECK(dfit.gamma_law.affine == true);
  CHECK(dfit.gamma_law.g0 == doctest::Approx(-0.46).epsilon(1e-10));
  CHECK(dfit.gamma_law.g1 == doctest::Approx(1.82).epsilon(1e-10));
}

TEST_CASE("non-positive beta points are excluded with a warning") {
  scaling::ScalingFit fit;
  for (double t = 0.02; t <= 0.2; t *= 1.3) {
    scaling::TimeFit p;
    p.t = t;
    p.beta = 2.0 * std::pow(t, 1.1);
    p.gamma = 0.2 * std::pow(t, -0.1);
    fit.points.push_back(p);
  }
  fit.points[1].beta = -1.0;
  scaling::fit_time_laws(fit, false);
  CHECK(!fit.warnings.empty());
  CHECK(fit.beta_law.amp == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("growth fit roundtrips and validates") {
  std::vector<std::pair<double, double>> data;
  for (int n = 2; n <= 50; ++n)
    data.emplace_back(n, 2.0 * (std::pow(n, 0.3) - 1.0));
  const auto law = scaling::fit_growth_curve(data);
  CHECK(law.amp == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(law.expo == doctest::Approx(0.3).epsilon(1e-8));

  // order invariance
  auto shuffled = data;
  std::mt19937 rng(3);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  const auto law2 = scaling::fit_growth_curve(shuffled);
  CHECK(law2.amp == doctest::Approx(law.amp).epsilon(1e-10));
  CHECK(law2.expo == doctest::Approx(law.expo).epsilon(1e-10));

  std::vector<std::pair<double, double>> flat = {
      {2.0, 1.0}, {3.0, 1.0}, {4.0, 1.0}, {5.0, 1.0}};
  CHECK_THROWS_AS(scaling::fit_growth_curve(flat), ValidationError);
  std::vector<std::pair<double, double>> tiny = {{2.0, 1.0}, {3.0, 2.0}};
  CHECK_THROWS_AS(scaling::fit_growth_curve(tiny), ValidationError);
}
