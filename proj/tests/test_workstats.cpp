#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "quench/basis.hpp"
#include "quench/echo.hpp"
#include "quench/errors.hpp"
#include "quench/spectrum.hpp"
#include "quench/states.hpp"
#include "quench/workstats.hpp"

using namespace quench;
using cplx = std::complex<double>;

namespace {
const double kPi = 4.0 * std::atan(1.0);
const double kSqrt2Pi = std::sqrt(2.0 * kPi);
}  // namespace

TEST_CASE("dephased states carry no MHQ negativity") {
  const auto spec = spectrum::build_finite_spectrum(5.0, 512);
  for (const auto* s : {"diag-equal:N=6", "diag-fermi2:N=3",
                        "diag-coherent:xi=1.0+0i,N=6"}) {
    const auto st = states::parse_state_spec(s);
    const std::size_t rows = st.is_fermion() ? 200 : 0;
    const double nre = workstats::nonpositivity(st, spec, rows);
    // deficit is the completeness leak of the truncated perturbed basis
    CHECK(nre <= 0.0);
    CHECK(std::abs(nre) <= (st.is_fermion() ? 2e-3 : 1e-5));
  }
}

TEST_CASE("coherence can only increase the non-positivity functional") {
  const auto spec = spectrum::build_finite_spectrum(10.0, 400);
  for (const auto* s : {"equal:N=12", "coherent:xi=1.3+0.2i,N=10",
                        "twolevel:theta=1.3,phi=0.2"}) {
    const auto st = states::parse_state_spec(s);
    const double coh = workstats::nonpositivity(st, spec);
    const double diag = workstats::nonpositivity(states::dephase(st), spec);
    CHECK(coh >= diag - 1e-10);
    CHECK(diag >= -1e-5);
  }
}

TEST_CASE("table and streamed N_Re agree") {
  const auto spec = spectrum::build_finite_spectrum(10.0, 300);
  const auto st = states::equal_superposition(9);
  const auto tab = echo::kdq_table(st, spec);
  CHECK(workstats::nonpositivity(tab) ==
        doctest::Approx(workstats::nonpositivity(st, spec)).epsilon(1e-12));
}

TEST_CASE("average work: ground state value k/sqrt(2 pi)") {
  const auto g = states::equal_superposition(1);
  for (const double k : {0.5, 1.0, 7.0}) {
    CHECK(workstats::average_work_direct(g, k) ==
          doctest::Approx(k / kSqrt2Pi).epsilon(1e-13));
  }
  CHECK_THROWS_AS(workstats::average_work_direct(
                      g, std::numeric_limits<double>::infinity()),
                  ValidationError);
}

TEST_CASE("average work trends in N") {
  const double k = 3.0;
  double prev_coh = 0.0, prev_diag = 1e300;
  for (int n = 1; n <= 30; ++n) {
    const auto st = states::equal_superposition(n);
    const double coh = workstats::average_work_direct(st, k);
    const double diag = workstats::average_work_direct(states::dephase(st), k);
    if (n >= 2) {
      CHECK(coh > prev_coh);
      CHECK(diag < prev_diag);
      CHECK(coh > diag);
    }
    prev_coh = coh;
    prev_diag = diag;
  }
}

TEST_CASE("average work: global phase invariance and k-linearity") {
  auto st = states::coherent({0.8, -0.5}, 9);
  const double base = workstats::average_work_direct(st, 2.0);
  auto rotated = st;
  for (auto& a : rotated.amps) a *= std::polar(1.0, 1.234);
  CHECK(workstats::average_work_direct(rotated, 2.0) ==
        doctest::Approx(base).epsilon(1e-13));
  CHECK(workstats::average_work_direct(st, 4.0) ==
        doctest::Approx(2.0 * base).epsilon(1e-13));
}

TEST_CASE("two-fermion average work follows the one-body Slater rules") {
  const double k = 2.5;
  const auto st = states::two_fermion_superposition(3);
  // shared orbital 0 plus the coherent sum over the partner orbitals
  cplx amp{0.0, 0.0};
  for (std::size_t j = 0; j < st.pairs.size(); ++j)
    amp += st.amps[j] * basis::psi_at_origin(2 * st.pairs[j].second);
  const double p0 = basis::psi_at_origin(0);
  const double expect = k * (p0 * p0 + std::norm(amp));
  CHECK(workstats::average_work_direct(st, k) ==
        doctest::Approx(expect).epsilon(1e-13));

  const auto dg = states::dephase(st);
  double dexpect = 0.0;
  for (std::size_t j = 0; j < dg.pairs.size(); ++j) {
    const double pb = basis::psi_at_origin(2 * dg.pairs[j].second);
    dexpect += dg.weights[j] * (p0 * p0 + pb * pb);
  }
  CHECK(workstats::average_work_direct(dg, k) ==
        doctest::Approx(k * dexpect).epsilon(1e-13));
}

TEST_CASE("first KDQ moment matches the direct expectation") {
  const auto spec = spectrum::build_finite_spectrum(1.0, 1024);
  for (const auto* s : {"equal:N=4", "diag-equal:N=4", "coherent:xi=0.9+0i,N=6"}) {
    const auto st = states::parse_state_spec(s);
    const double direct = workstats::average_work_direct(st, 1.0);
    const double moment = workstats::average_work_moment(st, spec);
    CHECK(std::abs(moment - direct) <= 1e-4 * direct);
    // table route agrees with the streamed route
    const auto tab = echo::kdq_table(st, spec);
    CHECK(workstats::average_work_moment(tab) ==
          doctest::Approx(moment).epsilon(1e-12));
  }
  // two fermions: pair determinants stay complete inside the truncated basis
  const auto fspec = spectrum::build_finite_spectrum(1.0, 300);
  const auto f = states::two_fermion_superposition(4);
  const double fd = workstats::average_work_direct(f, 1.0);
  const double fm = workstats::average_work_moment(f, fspec);
  CHECK(std::abs(fm - fd) <= 1e-4 * fd);
}

TEST_CASE("moment splits into diagonal plus coherence cross terms") {
  const auto spec = spectrum::build_finite_spectrum(2.0, 512);
  const auto st = states::equal_superposition(5);
  const auto dg = states::dephase(st);
  const double coh = workstats::average_work_moment(st, spec);
  const double diag = workstats::average_work_moment(dg, spec);
  const double cross = workstats::average_work_direct(st, 2.0) -
                       workstats::average_work_direct(dg, 2.0);
  CHECK(coh - diag == doctest::Approx(cross).epsilon(1e-4));
}

TEST_CASE("truncated variance: divergence, monotonicity, k-scaling") {
  const auto st = states::equal_superposition(3);
  const auto v1 = workstats::truncated_variance(st, 2.0, 1000);
  const auto v2 = workstats::truncated_variance(st, 2.0, 2000);
  CHECK(v2.value > v1.value);

  // inner-sum growth exponent ~ 1/2 over three decades
  const auto lo = workstats::truncated_variance(st, 2.0, 1000);
  const auto hi = workstats::truncated_variance(st, 2.0, 1000000);
  const double expo = std::log(hi.value / lo.value) / std::log(1000.0);
  CHECK(expo > 0.4);
  CHECK(expo < 0.6);

  const auto vk = workstats::truncated_variance(st, 4.0, 1000);
  CHECK(vk.value == doctest::Approx(4.0 * v1.value).epsilon(1e-13));

  CHECK_THROWS_AS(workstats::truncated_variance(
                      st, std::numeric_limits<double>::infinity(), 100),
                  ValidationError);
  CHECK_THROWS_AS(workstats::truncated_variance(
                      states::two_fermion_superposition(2), 1.0, 100),
                  ValidationError);
}

TEST_CASE("qsl time basics") {
  echo::EchoSeries s;
  s.t = {0.0, 0.5, 1.0};
  s.nu = {cplx{1, 0}, cplx{1, 0}, cplx{0.2, 0.0}};
  CHECK(workstats::qsl_time(s, 2.0, 0.5) == doctest::Approx(0.0));
  CHECK(workstats::qsl_time(s, 2.0, 1.0) == doctest::Approx(0.4));
  CHECK_THROWS_AS(workstats::qsl_time(s, 0.0, 0.5), ValidationError);

  const auto angles = workstats::bures_angle(s);
  CHECK(angles[0] == doctest::Approx(0.0));
  CHECK(angles[2] == doctest::Approx(std::acos(0.2)));
}

TEST_CASE("first local minimum") {
  echo::EchoSeries s;
  s.t = echo::uniform_times(0.0, 4.0, 41);
  s.nu.resize(41);
  for (std::size_t i = 0; i < 41; ++i) {
    const double t = s.t[i];
    s.nu[i] = 0.6 + 0.4 * std::cos(2.0 * t);  // minima at pi/2, 3pi/2
  }
  CHECK(workstats::first_local_min_time(s, 4.0) ==
        doctest::Approx(0.5 * kPi).epsilon(0.05));
}

TEST_CASE("qsl bound holds on the equal-superposition ensemble") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> un(2, 24);
  for (const double k : {1.0, 10.0}) {
    const auto spec = spectrum::build_finite_spectrum(k, 400);
    const auto times = echo::uniform_times(1e-3, 2.0 * kPi, 300);
    for (int trial = 0; trial < 4; ++trial) {
      auto st = states::equal_superposition(un(rng));
      if (trial % 2) st = states::dephase(st);
      const auto series = echo::loschmidt_echo(st, spec, times);
      const double w = workstats::average_work_direct(st, k);
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double tau_qsl = (1.0 - series.abs_nu(i)) / w;
        CHECK(times[i] >= tau_qsl - 1e-9);
      }
    }
  }
}

TEST_CASE("near-cancellation states break the naive speed-limit bound") {
  // tan(theta/2) = psi_0(0)/(-psi_2(0)) makes <V> ~ 0 while the echo still
  // decays, so tau >= (1-|nu|)/<w> cannot hold for arbitrary states; the
  // acceptance ensemble is therefore the equal-superposition family
  const double theta =
      2.0 * std::atan(basis::psi_at_origin(0) / -basis::psi_at_origin(2));
  const auto st = states::two_level(theta, 0.0);
  const double k = 10.0;
  const auto spec = spectrum::build_finite_spectrum(k, 400);
  const auto times = echo::uniform_times(0.05, 2.0 * kPi, 200);
  const auto series = echo::loschmidt_echo(st, spec, times);
  const double w = workstats::average_work_direct(st, k);
  double worst = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i)
    worst = std::max(worst, (1.0 - series.abs_nu(i)) / (w * times[i]));
  CHECK(worst > 1.0);
}

TEST_CASE("mhq histogram on the strong ground state") {
  const auto spec = spectrum::build_strong_spectrum(2000);
  const auto st = states::equal_superposition(1);
  const auto hist = echo::mhq_histogram(st, spec, 1.0);
  REQUIRE(!hist.empty());
  // gaps are odd integers: first bin at w = 1 with weight Lambda_{0,0}^2
  CHECK(hist.front().first == doctest::Approx(1.0));
  CHECK(hist.front().second ==
        doctest::Approx(2.0 / kPi).epsilon(1e-12));
  double total = 0.0;
  for (const auto& [w, v] : hist) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-2));
  CHECK_THROWS_AS(echo::mhq_histogram(st, spec, 0.0), ValidationError);
}

TEST_CASE("work report is internally consistent") {
  const auto spec = spectrum::build_finite_spectrum(1.0, 512);
  const auto st = states::equal_superposition(4);
  workstats::WorkReportOptions opt;
  opt.variance_cutoff = 10000;
  opt.echo_points = 400;
  const auto rep = workstats::compute_work_report(st, spec, opt);
  CHECK(rep.k == 1.0);
  CHECK(rep.n_re > 0.0);
  CHECK(rep.avg_work_direct > 0.0);
  CHECK(std::abs(rep.avg_work_moment - rep.avg_work_direct) <=
        1e-4 * rep.avg_work_direct);
  CHECK(rep.avg_work_slope ==
        doctest::Approx(rep.avg_work_direct / (1.0 * 2.0)).epsilon(1e-12));
  CHECK(rep.variance.value > 0.0);
  CHECK(rep.variance_growth_exponent > 0.3);
  CHECK(rep.variance_growth_exponent < 0.7);
  CHECK(rep.tau > 0.0);
  CHECK(rep.tau_qsl >= 0.0);
  CHECK(rep.tau_qsl <= rep.tau + 1e-9);
  CHECK(rep.eps_trunc < 1e-6);
}

TEST_CASE("corrected N_Re is cutoff-robust") {
  const auto spec = spectrum::build_finite_spectrum(100.0, 800);
  const auto st = states::equal_superposition(10);
  // raw + completeness deficit = 2 x negative mass, stable under truncation
  const double full = workstats::nonpositivity_corrected(st, spec);
  const double half = workstats::nonpositivity_corrected(st, spec, 400);
  const double raw = workstats::nonpositivity(st, spec);
  CHECK(full > raw);
  CHECK(std::abs(full - half) <= 2e-3 * full);
  // identically zero without coherence
  CHECK(workstats::nonpositivity_corrected(states::dephase(st), spec) ==
        doctest::Approx(0.0).epsilon(1e-14));
}
