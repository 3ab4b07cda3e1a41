#pragma once

#include <cstdint>

// Harmonic-trap conventions shared by every other module.
//
// Units: hbar = omega = 1, energies in units of hbar*omega, times in 1/omega.
// The origin value psi_n(0) follows the convention
//     psi_n(0) = (-1)^{n/2} (n-1)!! / ( (2*pi)^{1/4} sqrt(n!) ),   n even,
// with (-1)!! = 1, so that the ground-state defect expectation is
// k*psi_0(0)^2 = k/sqrt(2*pi).  Odd levels vanish at the origin and decouple
// from a delta defect placed there.

namespace quench::basis {

enum class ParitySector { even, odd, both };

struct TrapBasis {
  double omega = 1.0;
  double hbar = 1.0;
  ParitySector parity_sector = ParitySector::even;
};

// E_n = n + 1/2
double energy_unperturbed(std::int64_t n);

// c_n = (n-1)!!/sqrt(n!) for even n >= 0 (c_0 = 1); throws on odd n.
double c_coefficient(std::int64_t n);

// ln c_n, stable for n up to 1e7 and beyond.
double log_c_coefficient(std::int64_t n);

// psi_n(0); exact 0 for odd n.  Log-space evaluation, valid for n >= 1e6.
double psi_at_origin(std::int64_t n);

// (2*pi)^{-1/4}
double inv_fourth_root_two_pi();

// sum_{r<count} psi_{2r}(0)^2, by stable term recurrence.
double origin_density_sum(std::size_t count);

// Riemann zeta at the two points quoted in closed-form work expressions.
// Diagnostic only: the Dirichlet series does not converge for s < 1, so these
// never enter load-bearing numerics.
inline constexpr double kZetaQuarter = -0.8132784052618917;
inline constexpr double kZetaHalf = -1.4603545088095868;

}  // namespace quench::basis
