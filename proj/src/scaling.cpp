#include "quench/scaling.hpp"

#include <algorithm>
#include <cmath>

#include "quench/errors.hpp"

namespace quench::scaling {

namespace {

struct LinFit {
  double intercept = 0.0, slope = 0.0, r2 = 1.0;
};

LinFit linear_least_squares(const std::vector<double>& x,
                            const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LinFit f;
  const double det = n * sxx - sx * sx;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double fit = f.intercept + f.slope * x[i];
    ss_res += (y[i] - fit) * (y[i] - fit);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  f.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

}  // namespace

TimeFit fit_scaling_at_time(
    const std::vector<std::pair<double, double>>& data) {
  std::vector<double> lx, ly;
  for (const auto& [n, absnu] : data) {
    const double dec = 1.0 - absnu;
    if (dec < kEpsFloor || dec > 1.0 - kEpsCeiling) continue;  // saturated or noise
    lx.push_back(std::log(n));
    ly.push_back(std::log(dec));
  }
  if (lx.size() < 3)
    throw ValidationError("fit_scaling_at_time: fewer than 3 admissible points");
  const auto f = linear_least_squares(lx, ly);
  TimeFit out;
  out.beta = std::exp(f.intercept);
  out.gamma = f.slope;
  out.r2 = f.r2;
  out.n_used = lx.size();
  return out;
}

void fit_time_laws(ScalingFit& fit, bool diagonal_flavor) {
  fit.diagonal_flavor = diagonal_flavor;
  std::vector<double> lt, lb;
  for (const auto& p : fit.points) {
    if (p.beta <= 0.0) {
      fit.warnings.push_back("beta <= 0 at t=" + std::to_string(p.t) +
                             " excluded from beta law");
      continue;
    }
    lt.push_back(std::log(p.t));
    lb.push_back(std::log(p.beta));
  }
  if (lt.size() < 2)
    throw ValidationError("fit_time_laws: not enough beta points");
  const auto bf = linear_least_squares(lt, lb);
  fit.beta_law = {std::exp(bf.intercept), bf.slope};

  if (diagonal_flavor) {
    std::vector<double> tt, gg;
    for (const auto& p : fit.points) {
      tt.push_back(p.t);
      gg.push_back(p.gamma);
    }
    const auto gf = linear_least_squares(tt, gg);
    fit.gamma_law = {true, gf.intercept, gf.slope};
  } else {
    std::vector<double> gt, gl;
    for (const auto& p : fit.points) {
      if (p.gamma <= 0.0) {
        fit.warnings.push_back("gamma <= 0 at t=" + std::to_string(p.t) +
                               " excluded from gamma law");
        continue;
      }
      gt.push_back(std::log(p.t));
      gl.push_back(std::log(p.gamma));
    }
    if (gt.size() < 2)
      throw ValidationError("fit_time_laws: not enough gamma points");
    const auto gf = linear_least_squares(gt, gl);
    fit.gamma_law = {false, std::exp(gf.intercept), gf.slope};
  }
}

PowerLaw fit_growth_curve(const std::vector<std::pair<double, double>>& data) {
  if (data.size() < 4)
    throw ValidationError("fit_growth_curve: need at least 4 points");
  auto pts = data;
  std::sort(pts.begin(), pts.end());
  const double vfirst = pts.front().second, vlast = pts.back().second;
  if (!(vlast > 0.0) || !(vfirst >= 0.0))
    throw ValidationError("fit_growth_curve: values must be nonnegative");
  if (std::abs(vlast - vfirst) <= 1e-14 * std::max(1.0, std::abs(vlast)))
    throw ValidationError("fit_growth_curve: degenerate data (all equal)");

  // log-space endpoint initialization
  const auto& mid = pts[pts.size() / 2];
  double b = std::log(std::max(vlast, 1e-300) /
                      std::max(mid.second, 1e-300)) /
             std::log(pts.back().first / mid.first);
  b = std::clamp(b, 1e-3, 5.0);
  double a = vlast / (std::pow(pts.back().first, b) - 1.0);

  // Gauss-Newton on r_i = (a(N^b - 1) - y_i)/y_i with step halving
  auto sse = [&pts](double aa, double bb) {
    double s = 0.0;
    for (const auto& [n, y] : pts) {
      const double r = (aa * (std::pow(n, bb) - 1.0) - y) / std::max(y, 1e-300);
      s += r * r;
    }
    return s;
  };
  double cur = sse(a, b);
  for (int it = 0; it < 200; ++it) {
    double jaa = 0, jab = 0, jbb = 0, ga = 0, gb = 0;
    for (const auto& [n, y] : pts) {
      const double nb = std::pow(n, b);
      const double wy = 1.0 / std::max(y, 1e-300);
      const double r = (a * (nb - 1.0) - y) * wy;
      const double da = (nb - 1.0) * wy;
      const double db = a * nb * std::log(n) * wy;
      jaa += da * da;
      jab += da * db;
      jbb += db * db;
      ga += da * r;
      gb += db * r;
    }
    const double det = jaa * jbb - jab * jab;
    if (std::abs(det) < 1e-300) break;
    const double stepa = (jbb * ga - jab * gb) / det;
    const double stepb = (jaa * gb - jab * ga) / det;
    double scale = 1.0;
    double na = a, nb2 = b;
    for (int h = 0; h < 60; ++h) {
      na = a - scale * stepa;
      nb2 = b - scale * stepb;
      if (na > 0.0 && sse(na, nb2) < cur) break;
      scale *= 0.5;
    }
    const double moved = std::max(std::abs(na - a), std::abs(nb2 - b));
    a = na;
    b = nb2;
    cur = sse(a, b);
    if (moved < 1e-13 * std::max(1.0, std::abs(a) + std::abs(b))) break;
  }
  return {a, b};
}

}  // namespace quench::scaling
