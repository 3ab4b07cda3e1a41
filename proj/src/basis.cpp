#include "quench/basis.hpp"

#include <cmath>

#include "quench/errors.hpp"

namespace quench::basis {

namespace {
constexpr double kLn2 = 0.6931471805599453;
}

double energy_unperturbed(std::int64_t n) {
  if (n < 0) throw ValidationError("energy_unperturbed: n must be >= 0");
  return static_cast<double>(n) + 0.5;
}

double log_c_coefficient(std::int64_t n) {
  if (n < 0) throw ValidationError("c_coefficient: n must be >= 0");
  if (n % 2 != 0) throw ValidationError("c_coefficient: n must be even");
  // (n-1)!! = n! / (2^{n/2} (n/2)!)  =>  c_n = (n-1)!!/sqrt(n!)
  const double nd = static_cast<double>(n);
  return 0.5 * std::lgamma(nd + 1.0) - 0.5 * nd * kLn2 -
         std::lgamma(0.5 * nd + 1.0);
}

double c_coefficient(std::int64_t n) { return std::exp(log_c_coefficient(n)); }

double inv_fourth_root_two_pi() {
  static const double value = std::pow(8.0 * std::atan(1.0), -0.25);
  return value;
}

double psi_at_origin(std::int64_t n) {
  if (n < 0) throw ValidationError("psi_at_origin: n must be >= 0");
  if (n % 2 != 0) return 0.0;
  const double mag = std::exp(log_c_coefficient(n)) * inv_fourth_root_two_pi();
  return ((n / 2) % 2 == 0) ? mag : -mag;
}

double origin_density_sum(std::size_t count) {
  // psi_{2(r+1)}(0)^2 / psi_{2r}(0)^2 = (2r+1)/(2r+2)
  const double p0 = inv_fourth_root_two_pi();
  double term = p0 * p0;  // psi_0(0)^2 = 1/sqrt(2 pi)
  double sum = 0.0, comp = 0.0;
  for (std::size_t r = 0; r < count; ++r) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    term *= static_cast<double>(2 * r + 1) / static_cast<double>(2 * r + 2);
  }
  return sum;
}

}  // namespace quench::basis
