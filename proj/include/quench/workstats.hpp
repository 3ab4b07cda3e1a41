#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "quench/echo.hpp"
#include "quench/spectrum.hpp"
#include "quench/states.hpp"

// Work-distribution observables: non-positivity of the MHQ distribution,
// average work along independent routes, the (divergent) truncated second
// moment, and quantum-speed-limit times.

namespace quench::workstats {

// N_Re = -1 + sum |Re q|
double nonpositivity(const echo::QuasiprobTable& table);
double nonpositivity(const states::InitialState& state,
                     const spectrum::PerturbedSpectrum& spec,
                     std::size_t rows = 0, unsigned workers = 0);

// Completeness-corrected N_Re: sum |Re q| - sum Re q = 2 x (negative MHQ
// mass).  Equals N_Re plus the truncation deficit of the perturbed basis, so
// it converges as fast as the (spectrally localized) negative mass and is the
// estimator of choice for cutoff-robust sweeps.  Identically 0 for diagonal
// states.
double nonpositivity_corrected(const states::InitialState& state,
                               const spectrum::PerturbedSpectrum& spec,
                               std::size_t rows = 0, unsigned workers = 0);

// <w> = <V> from the exact finite sum over the state support; no basis
// truncation.  Rejects k = +infinity (diverges).
double average_work_direct(const states::InitialState& state, double k);

// first moment of the KDQ table, sum Re(q) w
double average_work_moment(const echo::QuasiprobTable& table);
double average_work_moment(const states::InitialState& state,
                           const spectrum::PerturbedSpectrum& spec,
                           std::size_t rows = 0, unsigned workers = 0);

// truncated <V^2>: k^2 (origin density of the state) sum_{m<cutoff}
// psi_{2m}(0)^2.  Grows like cutoff^{1/2}; single-particle flavors only.
struct TruncatedVariance {
  double value = 0.0;
  std::size_t cutoff = 0;
};
TruncatedVariance truncated_variance(const states::InitialState& state,
                                     double k, std::size_t cutoff);

// Bures angle arccos|nu(t)| per grid point
std::vector<double> bures_angle(const echo::EchoSeries& series);

// tau_QSL = (1 - |nu(tau)|)/|<w>| at the grid point nearest tau
double qsl_time(const echo::EchoSeries& series, double avg_work, double tau);

// time of the first local minimum of |nu| at or before t_max (falls back to
// the global minimum in range)
double first_local_min_time(const echo::EchoSeries& series, double t_max);

struct WorkReport {
  std::string state_label;
  double k = 0.0;
  std::size_t cutoff = 0;
  double n_re = 0.0;
  double n_re_corrected = 0.0;
  double avg_work_direct = 0.0;
  double avg_work_moment = 0.0;
  double avg_work_slope = 0.0;  // <w>/(k sqrt(N)) for superposition families
  TruncatedVariance variance;
  double variance_growth_exponent = 0.0;
  double tau = 0.0;
  double tau_qsl = 0.0;
  double eps_trunc = 0.0;
};

struct WorkReportOptions {
  std::size_t rows = 0;            // KDQ rows (0: spectrum cutoff)
  std::size_t variance_cutoff = 1000000;
  double tau = -1.0;               // <0: first |nu| minimum in [0, pi]
  std::size_t echo_points = 2000;
  unsigned workers = 0;
};

WorkReport compute_work_report(const states::InitialState& state,
                               const spectrum::PerturbedSpectrum& spec,
                               const WorkReportOptions& opt = {});

}  // namespace quench::workstats
