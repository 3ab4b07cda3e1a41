#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Post-quench spectrum of H' = H + k delta(x) in the even sector.
//
// Finite k: the even-sector matrix is diagonal + rank-one,
//     H'_{ab} = E_a delta_{ab} + k psi_a(0) psi_b(0),
// so each eigenvalue is the unique root of the secular function
//     f(E) = 1 + k sum_a psi_a(0)^2 / (E_a - E)
// between consecutive poles.  Roots are found in the pole-local variable
// delta = E' - E_anchor, where all pole distances are exact integers; this
// keeps eigenvector components u_n/(E' - E_n) accurate arbitrarily close to
// the poles.  The basis carries one extra level beyond the requested cutoff
// so that every retained root has a two-sided bracket.
//
// k -> +infinity: energies are m + 3/2 and overlaps have closed forms; the
// Lambda_{m,0} column comes from the Gamma-function expression and the other
// columns from the two-step ratio recursion in n.

namespace quench::spectrum {

enum class Backend { strong_coupling, finite_k };

// Closed-form strong-coupling overlap <psi'_m|psi_n>, m and n even.
// Column n is reached from Lambda_{m,0} by the ratio recursion
//   Lambda_{m,n}/Lambda_{m,n-2} = -sqrt((n-1)/n) (m-n+3)/(m-n+1).
double strong_overlap(std::int64_t m, std::int64_t n);

// Lambda_{2j,0}^2, stable for j up to 1e7 (term recurrence).
double strong_overlap_sq_m0(std::int64_t j);

struct ConvergenceReport {
  std::size_t cutoff_small = 0;
  std::size_t cutoff_large = 0;
  double max_energy_dev = 0.0;   // over the lowest cutoff_small/2 levels
  double max_overlap_dev = 0.0;  // same rows, columns below cutoff_small/2
};

class PerturbedSpectrum {
 public:
  static PerturbedSpectrum strong(std::size_t cutoff);
  static PerturbedSpectrum finite(double k, std::size_t cutoff,
                                  unsigned workers = 0);

  Backend backend() const { return backend_; }
  bool is_strong() const { return backend_ == Backend::strong_coupling; }
  // +infinity for the strong backend
  double defect_strength() const { return k_; }
  // number of retained even levels; rank j corresponds to level 2j
  std::size_t cutoff() const { return cutoff_; }

  // E'_{2j}
  double energy(std::size_t rank) const;
  // Lambda_{m,n} by even-sector rank (m = 2*row_rank, n = 2*col_rank)
  double overlap(std::size_t row_rank, std::size_t col_rank) const;
  // first out.size() columns of one row; O(columns)
  void overlap_row(std::size_t row_rank, std::span<double> out) const;

  // solver internals, exposed for serialization
  std::span<const double> root_offsets() const { return deltas_; }
  std::span<const double> row_norms() const { return norms_; }
  std::span<const double> origin_values() const { return u_; }

 private:
  PerturbedSpectrum() = default;
  friend PerturbedSpectrum make_cached_spectrum(Backend, double, std::size_t,
                                                std::vector<double>,
                                                std::vector<double>,
                                                std::vector<double>);

  Backend backend_ = Backend::strong_coupling;
  double k_ = 0.0;
  std::size_t cutoff_ = 0;
  // finite backend: root offsets delta_j in (0,2), eigenvector norms,
  // origin values u_a over the padded basis
  std::vector<double> deltas_;
  std::vector<double> norms_;
  std::vector<double> u_;
  // strong backend: signed Lambda_{2j,0} per row
  std::vector<double> lam0_;
};

PerturbedSpectrum build_strong_spectrum(std::size_t cutoff);
PerturbedSpectrum build_finite_spectrum(double k, std::size_t cutoff,
                                        unsigned workers = 0);

// Truncation study: rebuilds at both cutoffs and reports the worst drift of
// the lowest cutoff_small/2 levels.  k may be +infinity (analytic backend,
// zero deviations by construction).
ConvergenceReport convergence_probe(double k, std::size_t cutoff_small,
                                    std::size_t cutoff_large,
                                    unsigned workers = 0);

}  // namespace quench::spectrum
