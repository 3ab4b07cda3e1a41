#include "quench/workstats.hpp"

#include <algorithm>
#include <cmath>

#include "quench/basis.hpp"
#include "quench/errors.hpp"

namespace quench::workstats {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
using cplx = std::complex<double>;
}  // namespace

double nonpositivity(const echo::QuasiprobTable& table) {
  double s = 0.0, c = 0.0;
  for (const auto& e : table.entries) {
    const double y = std::abs(e.q.real()) - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s - 1.0;
}

double nonpositivity(const states::InitialState& state,
                     const spectrum::PerturbedSpectrum& spec, std::size_t rows,
                     unsigned workers) {
  return echo::kdq_scalars(state, spec, rows, workers).sum_abs_re - 1.0;
}

double nonpositivity_corrected(const states::InitialState& state,
                               const spectrum::PerturbedSpectrum& spec,
                               std::size_t rows, unsigned workers) {
  const auto sc = echo::kdq_scalars(state, spec, rows, workers);
  return sc.sum_abs_re - sc.sum_q.real();
}

double average_work_direct(const states::InitialState& state, double k) {
  if (std::isinf(k))
    throw ValidationError("average_work_direct: diverges at k = +infinity");
  if (!(k > 0.0)) throw ValidationError("average_work_direct: k must be > 0");

  if (!state.is_fermion()) {
    if (state.is_diagonal()) {
      double s = 0.0;
      for (std::size_t r = 0; r < state.weights.size(); ++r) {
        const double p = basis::psi_at_origin(2 * static_cast<std::int64_t>(r));
        s += state.weights[r] * p * p;
      }
      return k * s;
    }
    cplx amp{0.0, 0.0};
    for (std::size_t r = 0; r < state.amps.size(); ++r)
      amp += state.amps[r] *
             basis::psi_at_origin(2 * static_cast<std::int64_t>(r));
    return k * std::norm(amp);
  }

  // Slater-Condon one-body rules over determinant pairs
  if (state.is_diagonal()) {
    double s = 0.0;
    for (std::size_t p = 0; p < state.pairs.size(); ++p) {
      const double pa =
          basis::psi_at_origin(2 * static_cast<std::int64_t>(state.pairs[p].first));
      const double pb =
          basis::psi_at_origin(2 * static_cast<std::int64_t>(state.pairs[p].second));
      s += state.weights[p] * (pa * pa + pb * pb);
    }
    return k * s;
  }
  double s = 0.0;
  cplx cross{0.0, 0.0};
  const auto& pairs = state.pairs;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      const auto [a1, b1] = pairs[p];
      const auto [a2, b2] = pairs[q];
      const cplx w = std::conj(state.amps[p]) * state.amps[q];
      auto psi = [](int rank) {
        return basis::psi_at_origin(2 * static_cast<std::int64_t>(rank));
      };
      if (a1 == a2 && b1 == b2) {
        s += w.real() * (psi(a1) * psi(a1) + psi(b1) * psi(b1));
      } else if (a1 == a2) {
        cross += w * psi(b1) * psi(b2);
      } else if (b1 == b2) {
        cross += w * psi(a1) * psi(a2);
      } else if (a1 == b2 || b1 == a2) {
        // one shared orbital after reordering; sign from the transposition
        const int shared = (a1 == b2) ? a1 : b1;
        const int x = (a1 == b2) ? b1 : a1;
        const int y = (a1 == b2) ? a2 : b2;
        (void)shared;
        cross -= w * psi(x) * psi(y);
      }
      // pairs differing in both orbitals contribute nothing (one-body)
    }
  }
  return k * (s + cross.real());
}

double average_work_moment(const echo::QuasiprobTable& table) {
  double s = 0.0, c = 0.0;
  for (const auto& e : table.entries) {
    const double y = e.q.real() * e.w - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double average_work_moment(const states::InitialState& state,
                           const spectrum::PerturbedSpectrum& spec,
                           std::size_t rows, unsigned workers) {
  return echo::kdq_scalars(state, spec, rows, workers).first_moment;
}

TruncatedVariance truncated_variance(const states::InitialState& state,
                                     double k, std::size_t cutoff) {
  if (std::isinf(k) || !(k > 0.0))
    throw ValidationError("truncated_variance: k must be positive and finite");
  if (state.is_fermion())
    throw ValidationError("truncated_variance: single-particle flavors only");
  double origin_weight = 0.0;
  if (state.is_diagonal()) {
    for (std::size_t r = 0; r < state.weights.size(); ++r) {
      const double p = basis::psi_at_origin(2 * static_cast<std::int64_t>(r));
      origin_weight += state.weights[r] * p * p;
    }
  } else {
    cplx amp{0.0, 0.0};
    for (std::size_t r = 0; r < state.amps.size(); ++r)
      amp += state.amps[r] *
             basis::psi_at_origin(2 * static_cast<std::int64_t>(r));
    origin_weight = std::norm(amp);
  }
  TruncatedVariance tv;
  tv.cutoff = cutoff;
  tv.value = k * k * origin_weight * basis::origin_density_sum(cutoff);
  return tv;
}

std::vector<double> bures_angle(const echo::EchoSeries& series) {
  std::vector<double> out(series.t.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::acos(std::clamp(series.abs_nu(i), 0.0, 1.0));
  return out;
}

double qsl_time(const echo::EchoSeries& series, double avg_work, double tau) {
  if (!(avg_work > 0.0))
    throw ValidationError("qsl_time: average work must be positive");
  if (series.t.empty()) throw ValidationError("qsl_time: empty series");
  std::size_t best = 0;
  double bestd = std::abs(series.t[0] - tau);
  for (std::size_t i = 1; i < series.t.size(); ++i) {
    const double d = std::abs(series.t[i] - tau);
    if (d < bestd) {
      bestd = d;
      best = i;
    }
  }
  return (1.0 - series.abs_nu(best)) / avg_work;
}

double first_local_min_time(const echo::EchoSeries& series, double t_max) {
  const std::size_t n = series.t.size();
  if (n < 3) throw ValidationError("first_local_min_time: series too short");
  std::size_t fallback = 0;
  double fallback_v = series.abs_nu(0);
  for (std::size_t i = 1; i + 1 < n && series.t[i] <= t_max; ++i) {
    const double v = series.abs_nu(i);
    if (v < fallback_v) {
      fallback_v = v;
      fallback = i;
    }
    if (v <= series.abs_nu(i - 1) && v <= series.abs_nu(i + 1)) return series.t[i];
  }
  return series.t[fallback];
}

namespace {

double growth_exponent(const states::InitialState& state, double k,
                       std::size_t cutoff) {
  // log-log slope of the inner origin sum between cutoff/4 and cutoff
  const auto lo = truncated_variance(state, k, cutoff / 4);
  const auto hi = truncated_variance(state, k, cutoff);
  return std::log(hi.value / lo.value) /
         std::log(static_cast<double>(cutoff) / static_cast<double>(cutoff / 4));
}

}  // namespace

WorkReport compute_work_report(const states::InitialState& state,
                               const spectrum::PerturbedSpectrum& spec,
                               const WorkReportOptions& opt) {
  WorkReport rep;
  rep.state_label = state.label;
  rep.k = spec.defect_strength();
  rep.cutoff = opt.rows == 0 ? spec.cutoff() : opt.rows;

  const auto scal = echo::kdq_scalars(state, spec, opt.rows, opt.workers);
  rep.n_re = scal.sum_abs_re - 1.0;
  rep.eps_trunc = scal.eps_trunc();
  rep.avg_work_moment = scal.first_moment;
  rep.n_re_corrected = scal.sum_abs_re - scal.sum_q.real();

  const bool finite = !spec.is_strong();
  if (finite) {
    rep.avg_work_direct = average_work_direct(state, spec.defect_strength());
    const double n_terms = static_cast<double>(state.support_size());
    rep.avg_work_slope =
        rep.avg_work_direct / (spec.defect_strength() * std::sqrt(n_terms));
    if (!state.is_fermion()) {
      rep.variance = truncated_variance(state, spec.defect_strength(),
                                        opt.variance_cutoff);
      rep.variance_growth_exponent = growth_exponent(
          state, spec.defect_strength(), opt.variance_cutoff);
    }
  }

  const auto times = echo::uniform_times(1e-9, kPi, opt.echo_points);
  const auto series =
      echo::loschmidt_echo(state, spec, times, opt.rows, opt.workers);
  rep.tau = opt.tau >= 0.0 ? opt.tau : first_local_min_time(series, kPi);
  if (finite) rep.tau_qsl = qsl_time(series, rep.avg_work_direct, rep.tau);
  return rep;
}

}  // namespace quench::workstats
