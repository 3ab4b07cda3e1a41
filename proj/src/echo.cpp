#include "quench/echo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "quench/basis.hpp"
#include "quench/errors.hpp"
#include "quench/parallel.hpp"

namespace quench::echo {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
using cplx = std::complex<double>;

struct Kahan {
  double s = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
};

struct KahanC {
  Kahan re, im;
  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.s, im.s}; }
};

std::size_t resolve_rows(const spectrum::PerturbedSpectrum& spec,
                         std::size_t rows) {
  if (rows == 0) return spec.cutoff();
  if (rows > spec.cutoff())
    throw ValidationError("kdq: rows exceed spectrum cutoff");
  return rows;
}

void check_support(const states::InitialState& state,
                   const spectrum::PerturbedSpectrum& spec) {
  if (state.support_size() == 0) throw ValidationError("kdq: empty state");
  if (state.max_rank() >= spec.cutoff())
    throw ValidationError("kdq: state support outside spectrum cutoff");
}

// dense column block Lambda[row][col] for the state's support columns
std::vector<double> column_block(const spectrum::PerturbedSpectrum& spec,
                                 std::size_t rows, std::size_t cols,
                                 unsigned workers) {
  std::vector<double> lam(rows * cols);
  parallel_for(rows, workers, [&](std::size_t m) {
    spec.overlap_row(m, std::span<double>(lam.data() + m * cols, cols));
  });
  return lam;
}

double unperturbed_energy_rank(std::size_t rank) {
  return 2.0 * static_cast<double>(rank) + 0.5;
}

// ---- fermion helpers -------------------------------------------------------

struct FermionView {
  std::span<const std::pair<int, int>> pairs;
  std::span<const cplx> amps;      // pure
  std::span<const double> weights; // diagonal
  bool diagonal = false;
  std::size_t max_rank = 0;

  static FermionView of(const states::InitialState& s) {
    FermionView v;
    v.pairs = s.pairs;
    v.amps = s.amps;
    v.weights = s.weights;
    v.diagonal = s.is_diagonal();
    v.max_rank = s.max_rank();
    return v;
  }
  double pair_energy(std::size_t p) const {
    return unperturbed_energy_rank(pairs[p].first) +
           unperturbed_energy_rank(pairs[p].second);
  }
};

// det overlap between perturbed pair (c,d) and unperturbed pair columns
inline double det2(const double* rowc, const double* rowd, int a, int b) {
  return rowc[a] * rowd[b] - rowc[b] * rowd[a];
}

}  // namespace

std::vector<double> uniform_times(double t0, double t1, std::size_t points) {
  if (points < 2) throw ValidationError("time grid needs at least 2 points");
  if (!(t1 > t0)) throw ValidationError("time grid: t1 must exceed t0");
  std::vector<double> t(points);
  const double dt = (t1 - t0) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    t[i] = t0 + dt * static_cast<double>(i);
  return t;
}

std::vector<double> log_times(double t0, double t1, std::size_t points) {
  if (points < 2) throw ValidationError("time grid needs at least 2 points");
  if (!(t0 > 0.0) || !(t1 > t0))
    throw ValidationError("log time grid: need 0 < t0 < t1");
  std::vector<double> t(points);
  const double l0 = std::log(t0);
  const double dl = (std::log(t1) - l0) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    t[i] = std::exp(l0 + dl * static_cast<double>(i));
  return t;
}

QuasiprobTable kdq_table(const states::InitialState& state,
                         const spectrum::PerturbedSpectrum& spec,
                         std::size_t rows) {
  check_support(state, spec);
  rows = resolve_rows(spec, rows);

  QuasiprobTable tab;
  tab.k = spec.defect_strength();
  tab.backend = spec.backend();
  tab.rows = rows;
  tab.flavor = state.flavor;

  KahanC total;
  if (!state.is_fermion()) {
    const std::size_t cols = state.support_size();
    std::vector<double> row(cols);
    tab.entries.reserve(rows * cols);
    for (std::size_t m = 0; m < rows; ++m) {
      spec.overlap_row(m, row);
      const double em = spec.energy(m);
      if (state.is_diagonal()) {
        for (std::size_t n = 0; n < cols; ++n) {
          const cplx q = state.weights[n] * row[n] * row[n];
          tab.entries.push_back({static_cast<std::int32_t>(n), -1,
                                 static_cast<std::int32_t>(m), -1,
                                 em - unperturbed_energy_rank(n), q});
          total.add(q);
        }
      } else {
        cplx inner{0.0, 0.0};
        for (std::size_t n = 0; n < cols; ++n) inner += row[n] * state.amps[n];
        for (std::size_t n = 0; n < cols; ++n) {
          const cplx q = std::conj(state.amps[n]) * row[n] * inner;
          tab.entries.push_back({static_cast<std::int32_t>(n), -1,
                                 static_cast<std::int32_t>(m), -1,
                                 em - unperturbed_energy_rank(n), q});
          total.add(q);
        }
      }
    }
  } else {
    const auto view = FermionView::of(state);
    const std::size_t cols = view.max_rank + 1;
    const auto lam = column_block(spec, rows, cols, 1);
    const std::size_t np = view.pairs.size();
    tab.entries.reserve(rows * (rows - 1) / 2 * np);
    std::vector<double> l2(np);
    for (std::size_t c = 0; c < rows; ++c) {
      const double* rowc = lam.data() + c * cols;
      for (std::size_t d = c + 1; d < rows; ++d) {
        const double* rowd = lam.data() + d * cols;
        const double eq = spec.energy(c) + spec.energy(d);
        for (std::size_t p = 0; p < np; ++p)
          l2[p] = det2(rowc, rowd, view.pairs[p].first, view.pairs[p].second);
        if (view.diagonal) {
          for (std::size_t p = 0; p < np; ++p) {
            const cplx q = view.weights[p] * l2[p] * l2[p];
            tab.entries.push_back({view.pairs[p].first, view.pairs[p].second,
                                   static_cast<std::int32_t>(c),
                                   static_cast<std::int32_t>(d),
                                   eq - view.pair_energy(p), q});
            total.add(q);
          }
        } else {
          cplx inner{0.0, 0.0};
          for (std::size_t p = 0; p < np; ++p) inner += l2[p] * view.amps[p];
          for (std::size_t p = 0; p < np; ++p) {
            const cplx q = std::conj(view.amps[p]) * l2[p] * inner;
            tab.entries.push_back({view.pairs[p].first, view.pairs[p].second,
                                   static_cast<std::int32_t>(c),
                                   static_cast<std::int32_t>(d),
                                   eq - view.pair_energy(p), q});
            total.add(q);
          }
        }
      }
    }
  }
  tab.sum_q = total.value();
  return tab;
}

KdqScalars kdq_scalars(const states::InitialState& state,
                       const spectrum::PerturbedSpectrum& spec,
                       std::size_t rows, unsigned workers) {
  check_support(state, spec);
  rows = resolve_rows(spec, rows);

  if (!state.is_fermion()) {
    const std::size_t cols = state.support_size();
    // fixed row blocks; block partials combined in index order
    const std::size_t block = 2048;
    const std::size_t nblocks = (rows + block - 1) / block;
    std::vector<KdqScalars> parts(nblocks);
    parallel_for(nblocks, workers, [&](std::size_t bi) {
      std::vector<double> row(cols);
      KahanC sq;
      Kahan sabs, smom;
      const std::size_t lo = bi * block, hi = std::min(rows, lo + block);
      for (std::size_t m = lo; m < hi; ++m) {
        spec.overlap_row(m, row);
        const double em = spec.energy(m);
        if (state.is_diagonal()) {
          for (std::size_t n = 0; n < cols; ++n) {
            const double q = state.weights[n] * row[n] * row[n];
            sq.add(q);
            sabs.add(std::abs(q));
            smom.add(q * (em - unperturbed_energy_rank(n)));
          }
        } else {
          cplx inner{0.0, 0.0};
          for (std::size_t n = 0; n < cols; ++n)
            inner += row[n] * state.amps[n];
          for (std::size_t n = 0; n < cols; ++n) {
            const cplx q = std::conj(state.amps[n]) * row[n] * inner;
            sq.add(q);
            sabs.add(std::abs(q.real()));
            smom.add(q.real() * (em - unperturbed_energy_rank(n)));
          }
        }
      }
      parts[bi].sum_q = sq.value();
      parts[bi].sum_abs_re = sabs.s;
      parts[bi].first_moment = smom.s;
    });
    KdqScalars out;
    for (const auto& p : parts) {
      out.sum_q += p.sum_q;
      out.sum_abs_re += p.sum_abs_re;
      out.first_moment += p.first_moment;
    }
    return out;
  }

  const auto view = FermionView::of(state);
  const std::size_t cols = view.max_rank + 1;
  const auto lam = column_block(spec, rows, cols, workers);
  const std::size_t np = view.pairs.size();
  const std::size_t block = 64;  // rows of c per block
  const std::size_t nblocks = (rows + block - 1) / block;
  std::vector<KdqScalars> parts(nblocks);
  parallel_for(nblocks, workers, [&](std::size_t bi) {
    KahanC sq;
    Kahan sabs, smom;
    std::vector<double> l2(np);
    const std::size_t lo = bi * block, hi = std::min(rows, lo + block);
    for (std::size_t c = lo; c < hi; ++c) {
      const double* rowc = lam.data() + c * cols;
      for (std::size_t d = c + 1; d < rows; ++d) {
        const double* rowd = lam.data() + d * cols;
        const double eq = spec.energy(c) + spec.energy(d);
        for (std::size_t p = 0; p < np; ++p)
          l2[p] = det2(rowc, rowd, view.pairs[p].first, view.pairs[p].second);
        if (view.diagonal) {
          for (std::size_t p = 0; p < np; ++p) {
            const double q = view.weights[p] * l2[p] * l2[p];
            sq.add(q);
            sabs.add(std::abs(q));
            smom.add(q * (eq - view.pair_energy(p)));
          }
        } else {
          cplx inner{0.0, 0.0};
          for (std::size_t p = 0; p < np; ++p) inner += l2[p] * view.amps[p];
          for (std::size_t p = 0; p < np; ++p) {
            const cplx q = std::conj(view.amps[p]) * l2[p] * inner;
            sq.add(q);
            sabs.add(std::abs(q.real()));
            smom.add(q.real() * (eq - view.pair_energy(p)));
          }
        }
      }
    }
    parts[bi].sum_q = sq.value();
    parts[bi].sum_abs_re = sabs.s;
    parts[bi].first_moment = smom.s;
  });
  KdqScalars out;
  for (const auto& p : parts) {
    out.sum_q += p.sum_q;
    out.sum_abs_re += p.sum_abs_re;
    out.first_moment += p.first_moment;
  }
  return out;
}

std::vector<std::pair<double, double>> mhq_histogram(
    const states::InitialState& state, const spectrum::PerturbedSpectrum& spec,
    double bin_width, std::size_t rows, unsigned workers) {
  if (!(bin_width > 0.0))
    throw ValidationError("mhq_histogram: bin width must be positive");
  check_support(state, spec);
  rows = resolve_rows(spec, rows);
  (void)workers;  // serial map accumulation keeps bins exact and ordered

  std::map<long long, double> bins;
  auto deposit = [&](double w, double re_q) {
    bins[llround(w / bin_width)] += re_q;
  };

  if (!state.is_fermion()) {
    const std::size_t cols = state.support_size();
    std::vector<double> row(cols);
    for (std::size_t m = 0; m < rows; ++m) {
      spec.overlap_row(m, row);
      const double em = spec.energy(m);
      if (state.is_diagonal()) {
        for (std::size_t n = 0; n < cols; ++n)
          deposit(em - unperturbed_energy_rank(n),
                  state.weights[n] * row[n] * row[n]);
      } else {
        cplx inner{0.0, 0.0};
        for (std::size_t n = 0; n < cols; ++n) inner += row[n] * state.amps[n];
        for (std::size_t n = 0; n < cols; ++n)
          deposit(em - unperturbed_energy_rank(n),
                  (std::conj(state.amps[n]) * row[n] * inner).real());
      }
    }
  } else {
    const auto view = FermionView::of(state);
    const std::size_t cols = view.max_rank + 1;
    const auto lam = column_block(spec, rows, cols, workers);
    const std::size_t np = view.pairs.size();
    std::vector<double> l2(np);
    for (std::size_t c = 0; c < rows; ++c) {
      const double* rowc = lam.data() + c * cols;
      for (std::size_t d = c + 1; d < rows; ++d) {
        const double* rowd = lam.data() + d * cols;
        const double eq = spec.energy(c) + spec.energy(d);
        for (std::size_t p = 0; p < np; ++p)
          l2[p] = det2(rowc, rowd, view.pairs[p].first, view.pairs[p].second);
        if (view.diagonal) {
          for (std::size_t p = 0; p < np; ++p)
            deposit(eq - view.pair_energy(p),
                    view.weights[p] * l2[p] * l2[p]);
        } else {
          cplx inner{0.0, 0.0};
          for (std::size_t p = 0; p < np; ++p) inner += l2[p] * view.amps[p];
          for (std::size_t p = 0; p < np; ++p)
            deposit(eq - view.pair_energy(p),
                    (std::conj(view.amps[p]) * l2[p] * inner).real());
        }
      }
    }
  }
  std::vector<std::pair<double, double>> out;
  out.reserve(bins.size());
  for (const auto& [idx, sum] : bins)
    out.emplace_back(static_cast<double>(idx) * bin_width, sum);
  return out;
}

EchoSeries echo_series(const QuasiprobTable& table,
                       std::span<const double> times, unsigned workers) {
  EchoSeries out;
  out.t.assign(times.begin(), times.end());
  out.nu.resize(times.size());
  out.sum_q = table.sum_q;

  std::vector<std::size_t> order(table.entries.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(table.entries[a].q) > std::abs(table.entries[b].q);
  });

  parallel_for(times.size(), workers, [&](std::size_t ti) {
    const double t = times[ti];
    KahanC acc;
    for (const std::size_t idx : order) {
      const auto& e = table.entries[idx];
      acc.add(e.q * std::polar(1.0, -e.w * t));
    }
    out.nu[ti] = acc.value();
  });
  return out;
}

namespace {

// strong-coupling single particle: gaps are odd integers; collapse onto the
// lattice w = 2d + w_min and evaluate by Horner in z = exp(-2it)
EchoSeries strong_single_lattice(const states::InitialState& state,
                                 const spectrum::PerturbedSpectrum& spec,
                                 std::span<const double> times,
                                 std::size_t rows, unsigned workers) {
  const std::size_t cols = state.support_size();
  std::vector<cplx> lattice(rows + cols - 1, cplx{0.0, 0.0});
  // entry (n-rank r, m-rank j): w = 2(j - r) + 1, lattice index j - r + cols-1
  std::vector<double> row(cols);
  KahanC total;
  for (std::size_t j = 0; j < rows; ++j) {
    spec.overlap_row(j, row);
    if (state.is_diagonal()) {
      for (std::size_t r = 0; r < cols; ++r) {
        const cplx q = state.weights[r] * row[r] * row[r];
        lattice[j - r + cols - 1] += q;
        total.add(q);
      }
    } else {
      cplx inner{0.0, 0.0};
      for (std::size_t r = 0; r < cols; ++r) inner += row[r] * state.amps[r];
      for (std::size_t r = 0; r < cols; ++r) {
        const cplx q = std::conj(state.amps[r]) * row[r] * inner;
        lattice[j - r + cols - 1] += q;
        total.add(q);
      }
    }
  }
  const double w_min = 1.0 - 2.0 * static_cast<double>(cols - 1);

  EchoSeries out;
  out.t.assign(times.begin(), times.end());
  out.nu.resize(times.size());
  out.sum_q = total.value();
  parallel_for(times.size(), workers, [&](std::size_t ti) {
    const double t = times[ti];
    const cplx z = std::polar(1.0, -2.0 * t);
    cplx s{0.0, 0.0};
    for (std::size_t d = lattice.size(); d-- > 0;) s = s * z + lattice[d];
    out.nu[ti] = s * std::polar(1.0, -w_min * t);
  });
  return out;
}

EchoSeries finite_single_direct(const states::InitialState& state,
                                const spectrum::PerturbedSpectrum& spec,
                                std::span<const double> times,
                                std::size_t rows, unsigned workers) {
  const std::size_t cols = state.support_size();
  const auto lam = column_block(spec, rows, cols, workers);
  std::vector<double> ep(rows);
  for (std::size_t m = 0; m < rows; ++m) ep[m] = spec.energy(m);

  // per-row inner sums (t-independent)
  std::vector<cplx> inner(rows, cplx{0.0, 0.0});
  KahanC total;
  if (!state.is_diagonal()) {
    for (std::size_t m = 0; m < rows; ++m) {
      cplx a{0.0, 0.0};
      const double* r = lam.data() + m * cols;
      for (std::size_t n = 0; n < cols; ++n) a += r[n] * state.amps[n];
      inner[m] = a;
      for (std::size_t n = 0; n < cols; ++n)
        total.add(std::conj(state.amps[n]) * r[n] * a);
    }
  } else {
    for (std::size_t m = 0; m < rows; ++m) {
      const double* r = lam.data() + m * cols;
      for (std::size_t n = 0; n < cols; ++n)
        total.add(cplx{state.weights[n] * r[n] * r[n], 0.0});
    }
  }

  EchoSeries out;
  out.t.assign(times.begin(), times.end());
  out.nu.resize(times.size());
  out.sum_q = total.value();
  parallel_for(times.size(), workers, [&](std::size_t ti) {
    const double t = times[ti];
    std::vector<cplx> ph(cols);
    for (std::size_t n = 0; n < cols; ++n)
      ph[n] = std::polar(1.0, unperturbed_energy_rank(n) * t);
    KahanC acc;
    for (std::size_t m = 0; m < rows; ++m) {
      const double* r = lam.data() + m * cols;
      cplx b{0.0, 0.0};
      if (state.is_diagonal()) {
        for (std::size_t n = 0; n < cols; ++n)
          b += state.weights[n] * r[n] * r[n] * ph[n];
      } else {
        for (std::size_t n = 0; n < cols; ++n)
          b += std::conj(state.amps[n]) * r[n] * ph[n];
        b *= inner[m];
      }
      acc.add(b * std::polar(1.0, -ep[m] * t));
    }
    out.nu[ti] = acc.value();
  });
  return out;
}

// pure two-fermion states sharing the first orbital: factorized pair sums
EchoSeries fermion_pure_shared(const states::InitialState& state,
                               const spectrum::PerturbedSpectrum& spec,
                               std::span<const double> times, std::size_t rows,
                               unsigned workers) {
  const auto view = FermionView::of(state);
  const std::size_t np = view.pairs.size();
  const int a0 = view.pairs.front().first;
  const std::size_t cols = view.max_rank + 1;
  const auto lam = column_block(spec, rows, cols, workers);
  std::vector<double> ep(rows);
  for (std::size_t c = 0; c < rows; ++c) ep[c] = spec.energy(c);

  // W_Q and sum_q (t-independent pass)
  std::vector<double> ga(rows);  // sum_p A_p Lambda_{c, b_p} (A real here?)
  // amplitudes may be complex in general; keep complex
  std::vector<cplx> gac(rows);
  for (std::size_t c = 0; c < rows; ++c) {
    const double* r = lam.data() + c * cols;
    cplx g{0.0, 0.0};
    for (std::size_t p = 0; p < np; ++p)
      g += view.amps[p] * r[view.pairs[p].second];
    gac[c] = g;
    ga[c] = r[a0];
  }
  KahanC total;
  {
    std::vector<cplx> l2w(np);
    for (std::size_t c = 0; c < rows; ++c) {
      const double* rowc = lam.data() + c * cols;
      for (std::size_t d = c + 1; d < rows; ++d) {
        const double* rowd = lam.data() + d * cols;
        const cplx wq = ga[c] * gac[d] - gac[c] * ga[d];
        cplx dots{0.0, 0.0};
        for (std::size_t p = 0; p < np; ++p)
          dots += std::conj(view.amps[p]) *
                  det2(rowc, rowd, a0, view.pairs[p].second);
        total.add(wq * dots);
      }
    }
  }

  EchoSeries out;
  out.t.assign(times.begin(), times.end());
  out.nu.resize(times.size());
  out.sum_q = total.value();
  const double ea0 = unperturbed_energy_rank(a0);
  parallel_for(times.size(), workers, [&](std::size_t ti) {
    const double t = times[ti];
    // G_x(t) = sum_p conj(A_p) Lambda_{x, b_p} e^{i E_{b_p} t}
    std::vector<cplx> g(rows);
    for (std::size_t x = 0; x < rows; ++x) {
      const double* r = lam.data() + x * cols;
      cplx acc{0.0, 0.0};
      for (std::size_t p = 0; p < np; ++p)
        acc += std::conj(view.amps[p]) * r[view.pairs[p].second] *
               std::polar(1.0, unperturbed_energy_rank(view.pairs[p].second) * t);
      g[x] = acc;
    }
    const cplx pha = std::polar(1.0, ea0 * t);
    KahanC acc;
    for (std::size_t c = 0; c < rows; ++c) {
      const cplx phc = std::polar(1.0, -ep[c] * t);
      for (std::size_t d = c + 1; d < rows; ++d) {
        const cplx wq = ga[c] * gac[d] - gac[c] * ga[d];
        const cplx vq = pha * (ga[c] * g[d] - g[c] * ga[d]);
        acc.add(wq * vq * phc * std::polar(1.0, -ep[d] * t));
      }
    }
    out.nu[ti] = acc.value();
  });
  return out;
}

// diagonal two-fermion states: expand the squared determinant and factorize
// the pair sum into per-level transforms
EchoSeries fermion_diag_factorized(const states::InitialState& state,
                                   const spectrum::PerturbedSpectrum& spec,
                                   std::span<const double> times,
                                   std::size_t rows, unsigned workers) {
  const auto view = FermionView::of(state);
  const std::size_t np = view.pairs.size();
  const std::size_t cols = view.max_rank + 1;
  const auto lam = column_block(spec, rows, cols, workers);
  std::vector<double> ep(rows);
  for (std::size_t c = 0; c < rows; ++c) ep[c] = spec.energy(c);

  // sum_q via the same expansion at t = 0
  KahanC total;
  EchoSeries out;
  out.t.assign(times.begin(), times.end());
  out.nu.resize(times.size());

  // per (p, t):  S_p(t) = sum_{c<d} L2^2 e^{-i(ep_c+ep_d)t}
  //   L2^2 = A_c B_d + A_d B_c - 2 X_c X_d,  A = L(.,a)^2, B = L(.,b)^2,
  //   X = L(.,a) L(.,b)
  // sum_{c<d}(U_c V_d + U_d V_c) e^{-i(ep_c+ep_d)t}
  //   = Uhat Vhat - sum_c U_c V_c e^{-2 i ep_c t}
  std::vector<double> A(rows), B(rows), X(rows);
  auto series_for_pair = [&](std::size_t p, std::span<const double> ts,
                             std::vector<cplx>& dst) {
    const int a = view.pairs[p].first, b = view.pairs[p].second;
    for (std::size_t c = 0; c < rows; ++c) {
      const double* r = lam.data() + c * cols;
      A[c] = r[a] * r[a];
      B[c] = r[b] * r[b];
      X[c] = r[a] * r[b];
    }
    for (std::size_t ti = 0; ti < ts.size(); ++ti) {
      const double t = ts[ti];
      cplx ah{0, 0}, bh{0, 0}, xh{0, 0}, diag{0, 0};
      for (std::size_t c = 0; c < rows; ++c) {
        const cplx ph = std::polar(1.0, -ep[c] * t);
        ah += A[c] * ph;
        bh += B[c] * ph;
        xh += X[c] * ph;
        diag += (A[c] * B[c] - X[c] * X[c]) * ph * ph;
      }
      dst[ti] = ah * bh - xh * xh - diag;
    }
  };

  std::vector<cplx> acc(times.size(), cplx{0.0, 0.0});
  std::vector<cplx> sp(times.size());
  std::vector<double> zero{0.0};
  std::vector<cplx> s0(1);
  for (std::size_t p = 0; p < np; ++p) {
    series_for_pair(p, zero, s0);
    total.add(view.weights[p] * s0[0]);
    series_for_pair(p, times, sp);
    const double epair = view.pair_energy(p);
    for (std::size_t ti = 0; ti < times.size(); ++ti)
      acc[ti] += view.weights[p] * sp[ti] * std::polar(1.0, epair * times[ti]);
  }
  out.sum_q = total.value();
  out.nu = std::move(acc);
  return out;
}

}  // namespace

EchoSeries loschmidt_echo(const states::InitialState& state,
                          const spectrum::PerturbedSpectrum& spec,
                          std::span<const double> times, std::size_t rows,
                          unsigned workers) {
  check_support(state, spec);
  rows = resolve_rows(spec, rows);
  if (!state.is_fermion()) {
    if (spec.is_strong())
      return strong_single_lattice(state, spec, times, rows, workers);
    return finite_single_direct(state, spec, times, rows, workers);
  }
  if (state.pairs.empty()) throw ValidationError("echo: empty fermion state");
  if (state.is_diagonal())
    return fermion_diag_factorized(state, spec, times, rows, workers);
  const int a0 = state.pairs.front().first;
  const bool shared = std::all_of(
      state.pairs.begin(), state.pairs.end(),
      [a0](const std::pair<int, int>& pr) { return pr.first == a0; });
  if (shared) return fermion_pure_shared(state, spec, times, rows, workers);
  // general pair sets fall back to the materialized table
  return echo_series(kdq_table(state, spec, rows), times, workers);
}

std::complex<double> echo_closed_form_two_level(double theta, double phi,
                                                double t) {
  const cplx z = std::polar(1.0, -t);
  const cplx root = std::sqrt(1.0 - z * z);
  const cplx eit = std::polar(1.0, t);
  const cplx cross = eit * (std::cos(theta) - 1.0) -
                     2.0 * std::sqrt(2.0) * std::cos(phi - t) * std::sin(theta);
  return 2.0 / kPi * (std::asin(z) - 0.25 * root * cross);
}

std::vector<double> detect_cusps(const EchoSeries& series, double threshold) {
  const std::size_t n = series.t.size();
  if (n < 3) throw ValidationError("detect_cusps: grid too coarse");
  const double h = series.t[1] - series.t[0];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hh = series.t[i + 1] - series.t[i];
    if (std::abs(hh - h) > 1e-9 * std::max(1.0, std::abs(h)))
      throw ValidationError("detect_cusps: grid must be uniform");
  }
  std::vector<double> cusps;
  double best = 0.0;
  bool in_group = false;
  double best_t = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double m =
        std::abs(series.abs_nu(i + 1) - 2.0 * series.abs_nu(i) +
                 series.abs_nu(i - 1)) /
        h;  // slope-jump estimate; O(h |y''|) for smooth series
    if (m > threshold) {
      if (!in_group || m > best) {
        best = m;
        best_t = series.t[i];
      }
      in_group = true;
    } else if (in_group) {
      cusps.push_back(best_t);
      in_group = false;
      best = 0.0;
    }
  }
  if (in_group) cusps.push_back(best_t);
  return cusps;
}

}  // namespace quench::echo
