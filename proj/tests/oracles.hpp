#pragma once

// Test-only oracles, independent of the library's solver paths:
//  - dense symmetric diagonalization of the even-sector rank-one matrix
//  - telescoped (product-form) strong-coupling overlaps
// Both are used to cross-check the secular-equation backend and the ratio
// recursion, never the other way round.

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "quench/basis.hpp"

namespace oracles {

struct DenseSpectrum {
  std::vector<double> energies;           // ascending, size = cutoff
  Eigen::MatrixXd rows;                   // rows[m][n], anchor-positive signs
};

// Mirrors the library's problem definition: basis of cutoff+1 even levels,
// retain the lowest `cutoff` eigenpairs.
inline DenseSpectrum dense_finite_spectrum(double k, std::size_t cutoff) {
  const std::size_t basis = cutoff + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(basis, basis);
  Eigen::VectorXd u(basis);
  for (std::size_t a = 0; a < basis; ++a)
    u[a] = quench::basis::psi_at_origin(2 * static_cast<std::int64_t>(a));
  for (std::size_t a = 0; a < basis; ++a) {
    for (std::size_t b = 0; b < basis; ++b) h(a, b) = k * u[a] * u[b];
    h(a, a) += 2.0 * static_cast<double>(a) + 0.5;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  DenseSpectrum out;
  out.energies.resize(cutoff);
  out.rows.resize(cutoff, basis);
  for (std::size_t m = 0; m < cutoff; ++m) {
    out.energies[m] = es.eigenvalues()[static_cast<Eigen::Index>(m)];
    Eigen::VectorXd v = es.eigenvectors().col(static_cast<Eigen::Index>(m));
    if (v[static_cast<Eigen::Index>(m)] < 0) v = -v;
    out.rows.row(static_cast<Eigen::Index>(m)) = v.transpose();
  }
  return out;
}

// Lambda_{m,n} with the ratio chain telescoped analytically:
//   Lambda_{m,n} = (-1)^{n/2} c_n (m+1)/(m-n+1) Lambda_{m,0},
// evaluated in log space.
inline double strong_overlap_product_form(std::int64_t m, std::int64_t n) {
  const double md = static_cast<double>(m);
  const double loglam0 = 0.5 * ((md + 1.0) * std::log(2.0) -
                                std::lgamma(md + 2.0)) +
                         std::lgamma(0.5 * (md + 1.0)) -
                         std::log(4.0 * std::atan(1.0));
  double sign = ((m / 2) % 2 == 0) ? 1.0 : -1.0;
  if ((n / 2) % 2 != 0) sign = -sign;
  const double denom = static_cast<double>(m - n + 1);
  if (denom < 0) sign = -sign;
  const double logmag = loglam0 + quench::basis::log_c_coefficient(n) +
                        std::log(md + 1.0) - std::log(std::abs(denom));
  return sign * std::exp(logmag);
}

}  // namespace oracles
