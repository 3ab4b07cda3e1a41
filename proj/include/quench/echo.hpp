#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "quench/spectrum.hpp"
#include "quench/states.hpp"

// Work quasiprobabilities and the Loschmidt echo as their Fourier sum,
//   nu(t) = sum q_{n,m} exp(-i (E'_m - E_n) t),  nu(0) = sum q.
//
// Two evaluation routes: materialized tables (exact spec of each entry, used
// for work statistics and small grids) and streamed evaluation that never
// stores entries (used for 1e6-term strong-coupling series and fermion pair
// sums).  Both share the same entry definitions and agree to rounding.

namespace quench::echo {

struct QuasiprobEntry {
  // even-sector ranks; single-particle entries use b = -1
  std::int32_t n_a, n_b;  // unperturbed level (pair)
  std::int32_t m_a, m_b;  // perturbed level (pair)
  double w;               // energy transfer E' - E
  std::complex<double> q;
};

struct QuasiprobTable {
  std::vector<QuasiprobEntry> entries;
  double k = 0.0;
  spectrum::Backend backend = spectrum::Backend::finite_k;
  std::size_t rows = 0;  // perturbed levels (or pair-level cutoff) used
  states::Flavor flavor = states::Flavor::pure_single;
  std::complex<double> sum_q{0.0, 0.0};

  // completeness deficit of the truncated perturbed basis
  double eps_trunc() const {
    return std::max(std::abs(1.0 - sum_q.real()), std::abs(sum_q.imag()));
  }
};

// rows = 0 uses the spectrum cutoff.  For fermion flavors rows is the
// single-particle level count entering the perturbed pair basis.
QuasiprobTable kdq_table(const states::InitialState& state,
                         const spectrum::PerturbedSpectrum& spec,
                         std::size_t rows = 0);

// One streamed pass over all entries (no storage).
struct KdqScalars {
  std::complex<double> sum_q{0.0, 0.0};
  double sum_abs_re = 0.0;   // sum |Re q|
  double first_moment = 0.0; // sum Re(q) w
  double eps_trunc() const {
    return std::max(std::abs(1.0 - sum_q.real()), std::abs(sum_q.imag()));
  }
};
KdqScalars kdq_scalars(const states::InitialState& state,
                       const spectrum::PerturbedSpectrum& spec,
                       std::size_t rows = 0, unsigned workers = 0);

// MHQ work histogram: (bin center, sum Re q), ascending in w.
std::vector<std::pair<double, double>> mhq_histogram(
    const states::InitialState& state, const spectrum::PerturbedSpectrum& spec,
    double bin_width = 1.0, std::size_t rows = 0, unsigned workers = 0);

struct EchoSeries {
  std::vector<double> t;
  std::vector<std::complex<double>> nu;
  std::complex<double> sum_q{0.0, 0.0};  // = nu(0) of the truncated sum
  double eps_trunc() const {
    return std::max(std::abs(1.0 - sum_q.real()), std::abs(sum_q.imag()));
  }
  double abs_nu(std::size_t i) const { return std::abs(nu[i]); }
};

// uniform grid helper (endpoints included)
std::vector<double> uniform_times(double t0, double t1, std::size_t points);
std::vector<double> log_times(double t0, double t1, std::size_t points);

// Fourier sum over a materialized table; entries are accumulated in
// descending |q| with compensated summation.
EchoSeries echo_series(const QuasiprobTable& table,
                       std::span<const double> times, unsigned workers = 0);

// Streamed evaluation from state + spectrum.  Strong-coupling single-particle
// series collapse onto an integer frequency lattice and are evaluated by
// Horner in exp(-2it); everything else uses factorized per-time sums.
EchoSeries loschmidt_echo(const states::InitialState& state,
                          const spectrum::PerturbedSpectrum& spec,
                          std::span<const double> times, std::size_t rows = 0,
                          unsigned workers = 0);

// Strong-coupling closed form for the theta/phi two-level state.
// Note: the cross term carries the sign dictated by the overlap recursion,
//   nu = (2/pi)[asin z - (sqrt(1-z^2)/4)(e^{it}(cos th - 1)
//                                        - 2 sqrt2 cos(phi - t) sin th)],
// z = exp(-it).
std::complex<double> echo_closed_form_two_level(double theta, double phi,
                                                double t);

// Times where the |nu| slope jumps by more than `threshold` (estimated from
// the second difference over a uniform grid).
std::vector<double> detect_cusps(const EchoSeries& series,
                                 double threshold = 0.25);

}  // namespace quench::echo
