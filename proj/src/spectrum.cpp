#include "quench/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "quench/basis.hpp"
#include "quench/errors.hpp"
#include "quench/parallel.hpp"

namespace quench::spectrum {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

double strong_overlap_sq_m0(std::int64_t j) {
  if (j < 0) throw ValidationError("strong_overlap_sq_m0: j must be >= 0");
  // (2/pi) C(2j,j) / (2^{2j} (2j+1)), via log-Gamma to stay finite at large j
  const double jd = static_cast<double>(j);
  const double logc = std::lgamma(2.0 * jd + 1.0) - 2.0 * std::lgamma(jd + 1.0);
  return 2.0 / kPi *
         std::exp(logc - 2.0 * jd * 0.6931471805599453 -
                  std::log(2.0 * jd + 1.0));
}

namespace {

// Lambda_{m,0} = (-1)^{m/2} sqrt(2^{m+1}/(m+1)!) * Gamma((m+1)/2) / pi
double strong_lambda_m0(std::int64_t m) {
  const double md = static_cast<double>(m);
  const double lg = 0.5 * ((md + 1.0) * 0.6931471805599453 -
                           std::lgamma(md + 2.0)) +
                    std::lgamma(0.5 * (md + 1.0)) - std::log(kPi);
  const double mag = std::exp(lg);
  return ((m / 2) % 2 == 0) ? mag : -mag;
}

// one recursion step n-2 -> n at fixed m
inline double ratio_step(std::int64_t m, std::int64_t n) {
  return -std::sqrt(static_cast<double>(n - 1) / static_cast<double>(n)) *
         static_cast<double>(m - n + 3) / static_cast<double>(m - n + 1);
}

}  // namespace

double strong_overlap(std::int64_t m, std::int64_t n) {
  if (m < 0 || n < 0) throw ValidationError("strong_overlap: indices must be >= 0");
  if (m % 2 != 0 || n % 2 != 0)
    throw ValidationError("strong_overlap: odd index rejected");
  double lam = strong_lambda_m0(m);
  for (std::int64_t nn = 2; nn <= n; nn += 2) lam *= ratio_step(m, nn);
  return lam;
}

PerturbedSpectrum PerturbedSpectrum::strong(std::size_t cutoff) {
  if (cutoff < 1) throw ValidationError("strong spectrum: cutoff must be >= 1");
  PerturbedSpectrum s;
  s.backend_ = Backend::strong_coupling;
  s.k_ = std::numeric_limits<double>::infinity();
  s.cutoff_ = cutoff;
  s.lam0_.resize(cutoff);
  // Lambda_{2j,0}^2 term recurrence: R_{j+1}/R_j = (2j+1)^2/(2(j+1)(2j+3))
  double r = 2.0 / kPi;
  for (std::size_t j = 0; j < cutoff; ++j) {
    s.lam0_[j] = (j % 2 == 0 ? 1.0 : -1.0) * std::sqrt(r);
    const double tj = static_cast<double>(j);
    r *= (2.0 * tj + 1.0) * (2.0 * tj + 1.0) /
         (2.0 * (tj + 1.0) * (2.0 * tj + 3.0));
  }
  return s;
}

namespace {

struct Secular {
  double k;
  std::span<const double> u2;  // psi_a(0)^2 over the padded basis

  // f(delta) = 1 + k sum_a u2[a] / (2(a - anchor) - delta), with the exact
  // integer pole distances; also returns f' for Newton.
  void eval(std::size_t anchor, double delta, double& f, double& fp) const {
    double s = 0.0, sp = 0.0;
    for (std::size_t a = 0; a < u2.size(); ++a) {
      const double d = 2.0 * (static_cast<double>(a) -
                              static_cast<double>(anchor)) -
                       delta;
      const double inv = u2[a] / d;
      s += inv;
      sp += inv / d;
    }
    f = 1.0 + k * s;
    fp = k * sp;
  }
};

// root of f in (0, 2); f is increasing from -inf to +inf
double solve_root(const Secular& sec, std::size_t anchor) {
  double lo = 0.0, hi = 2.0;
  double x = 1.0;
  for (int it = 0; it < 128; ++it) {
    double f, fp;
    sec.eval(anchor, x, f, fp);
    if (f == 0.0) return x;
    if (f > 0.0)
      hi = x;
    else
      lo = x;
    double nx = x - f / fp;
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);  // safeguarded Newton
    if (std::abs(nx - x) <= 4e-16 * std::max(1.0, std::abs(x))) return nx;
    x = nx;
    if (hi - lo <= 4e-16) return 0.5 * (lo + hi);
  }
  return x;
}

}  // namespace

PerturbedSpectrum PerturbedSpectrum::finite(double k, std::size_t cutoff,
                                            unsigned workers) {
  if (!(k > 0.0) || std::isinf(k))
    throw ValidationError("finite spectrum: k must be positive and finite");
  if (cutoff < 2) throw ValidationError("finite spectrum: cutoff must be >= 2");

  PerturbedSpectrum s;
  s.backend_ = Backend::finite_k;
  s.k_ = k;
  s.cutoff_ = cutoff;

  const std::size_t basis = cutoff + 1;  // pad so the top root stays bracketed
  s.u_.resize(basis);
  std::vector<double> u2(basis);
  for (std::size_t a = 0; a < basis; ++a) {
    s.u_[a] = basis::psi_at_origin(static_cast<std::int64_t>(2 * a));
    u2[a] = s.u_[a] * s.u_[a];
  }

  s.deltas_.assign(cutoff, 0.0);
  s.norms_.assign(cutoff, 0.0);
  const Secular sec{k, u2};
  parallel_for(cutoff, workers, [&](std::size_t j) {
    const double delta = solve_root(sec, j);
    s.deltas_[j] = delta;
    double nrm = 0.0;
    for (std::size_t a = 0; a < basis; ++a) {
      const double d = 2.0 * (static_cast<double>(a) - static_cast<double>(j)) -
                       delta;
      const double c = s.u_[a] / d;
      nrm += c * c;
    }
    s.norms_[j] = 1.0 / std::sqrt(nrm);
  });
  return s;
}

PerturbedSpectrum build_strong_spectrum(std::size_t cutoff) {
  return PerturbedSpectrum::strong(cutoff);
}

PerturbedSpectrum build_finite_spectrum(double k, std::size_t cutoff,
                                        unsigned workers) {
  return PerturbedSpectrum::finite(k, cutoff, workers);
}

double PerturbedSpectrum::energy(std::size_t rank) const {
  if (rank >= cutoff_) throw ValidationError("energy: rank beyond cutoff");
  const double base = 2.0 * static_cast<double>(rank);
  if (backend_ == Backend::strong_coupling) return base + 1.5;
  return base + 0.5 + deltas_[rank];
}

double PerturbedSpectrum::overlap(std::size_t row_rank,
                                  std::size_t col_rank) const {
  if (row_rank >= cutoff_) throw ValidationError("overlap: row beyond cutoff");
  if (backend_ == Backend::strong_coupling) {
    const std::int64_t m = 2 * static_cast<std::int64_t>(row_rank);
    double lam = lam0_[row_rank];
    for (std::int64_t nn = 2; nn <= 2 * static_cast<std::int64_t>(col_rank);
         nn += 2)
      lam *= ratio_step(m, nn);
    return lam;
  }
  if (col_rank >= u_.size())
    throw ValidationError("overlap: column beyond basis");
  // eigenvector of the rank-one update, v_n ~ u_n/(E' - E_n); sign fixed so
  // the anchor component (dominant unperturbed level) is positive, matching
  // the strong-coupling sign convention in the k -> inf limit
  const double d = 2.0 * (static_cast<double>(row_rank) -
                          static_cast<double>(col_rank)) +
               deltas_[row_rank];
  const double sgn = (row_rank % 2 == 0) ? 1.0 : -1.0;
  return sgn * norms_[row_rank] * u_[col_rank] / d;
}

void PerturbedSpectrum::overlap_row(std::size_t row_rank,
                                    std::span<double> out) const {
  if (row_rank >= cutoff_)
    throw ValidationError("overlap_row: row beyond cutoff");
  if (backend_ == Backend::strong_coupling) {
    const std::int64_t m = 2 * static_cast<std::int64_t>(row_rank);
    double lam = lam0_[row_rank];
    for (std::size_t c = 0; c < out.size(); ++c) {
      if (c > 0) lam *= ratio_step(m, 2 * static_cast<std::int64_t>(c));
      out[c] = lam;
    }
    return;
  }
  if (out.size() > u_.size())
    throw ValidationError("overlap_row: more columns than basis");
  const double sgn = (row_rank % 2 == 0) ? 1.0 : -1.0;
  const double sn = sgn * norms_[row_rank];
  const double delta = deltas_[row_rank];
  for (std::size_t c = 0; c < out.size(); ++c) {
    const double d = 2.0 * (static_cast<double>(row_rank) -
                            static_cast<double>(c)) +
                     delta;
    out[c] = sn * u_[c] / d;
  }
}

PerturbedSpectrum make_cached_spectrum(Backend backend, double k,
                                       std::size_t cutoff,
                                       std::vector<double> deltas,
                                       std::vector<double> norms,
                                       std::vector<double> u) {
  PerturbedSpectrum s;
  s.backend_ = backend;
  s.k_ = k;
  s.cutoff_ = cutoff;
  s.deltas_ = std::move(deltas);
  s.norms_ = std::move(norms);
  s.u_ = std::move(u);
  return s;
}

ConvergenceReport convergence_probe(double k, std::size_t cutoff_small,
                                    std::size_t cutoff_large,
                                    unsigned workers) {
  if (cutoff_large <= cutoff_small)
    throw ValidationError("convergence_probe: cutoff_large must exceed cutoff_small");
  ConvergenceReport rep;
  rep.cutoff_small = cutoff_small;
  rep.cutoff_large = cutoff_large;
  if (std::isinf(k)) return rep;  // analytic backend: exact at any cutoff

  const auto sa = build_finite_spectrum(k, cutoff_small, workers);
  const auto sb = build_finite_spectrum(k, cutoff_large, workers);
  const std::size_t probe_rows = std::max<std::size_t>(1, cutoff_small / 2);
  std::vector<double> rowa(probe_rows), rowb(probe_rows);
  for (std::size_t j = 0; j < probe_rows; ++j) {
    rep.max_energy_dev =
        std::max(rep.max_energy_dev, std::abs(sa.energy(j) - sb.energy(j)));
    sa.overlap_row(j, rowa);
    sb.overlap_row(j, rowb);
    for (std::size_t c = 0; c < probe_rows; ++c)
      rep.max_overlap_dev =
          std::max(rep.max_overlap_dev, std::abs(rowa[c] - rowb[c]));
  }
  return rep;
}

}  // namespace quench::spectrum
