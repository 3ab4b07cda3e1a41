#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

// Fits of the orthogonalization scaling law  1 - |nu(t)| ~ beta(t) N^gamma(t)
// over N at each time, the time-laws of beta and gamma, and the a(N^b - 1)
// growth model for the non-positivity functional.

namespace quench::scaling {

// admissibility band for 1 - |nu| in per-time fits: below the floor the
// log-regression sits in floating noise, above the ceiling the law saturates
inline constexpr double kEpsFloor = 1e-6;
inline constexpr double kEpsCeiling = 1e-3;  // admit 1-|nu| <= 1 - ceiling

struct TimeFit {
  double t = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double r2 = 0.0;
  std::size_t n_used = 0;
};

// data: (N, |nu|) pairs; log-linear least squares of ln(1-|nu|) vs ln N.
// Inadmissible points are dropped; fewer than 3 admissible points throws.
TimeFit fit_scaling_at_time(const std::vector<std::pair<double, double>>& data);

struct PowerLaw {
  double amp = 0.0;
  double expo = 0.0;
};

struct GammaLaw {
  bool affine = false;  // g0 + g1 t (diagonal flavor) vs g0 t^{g1}
  double g0 = 0.0;
  double g1 = 0.0;
};

struct ScalingFit {
  std::vector<TimeFit> points;
  PowerLaw beta_law;
  GammaLaw gamma_law;
  bool diagonal_flavor = false;
  std::vector<std::string> warnings;
};

// beta -> b0 t^{b1} by log-log regression; gamma -> g0 t^{g1} (coherent) or
// g0 + g1 t (diagonal).  Non-positive beta/gamma points are excluded from the
// log-log fits with a warning.
void fit_time_laws(ScalingFit& fit, bool diagonal_flavor);

// growth model a(N^b - 1), Gauss-Newton on relative residuals with log-space
// endpoint initialization
PowerLaw fit_growth_curve(const std::vector<std::pair<double, double>>& data);

}  // namespace quench::scaling
