#include "newton_measure/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include "newton_measure/errors.hpp"
#include "newton_measure/measure.hpp"

namespace nmeasure {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

}  // namespace

double SuiteResult::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics)
    if (k == key) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

SuiteResult verify_gamma(std::uint64_t seed, int pairs, int grid) {
  SuiteResult out;
  out.name = "gamma";
  std::mt19937_64 rng(seed);
  double worst_residual = 0.0, worst_slope = -std::numeric_limits<double>::infinity();
  double worst_band = std::numeric_limits<double>::infinity(), worst_limit = 0.0;
  std::ostringstream csv;
  csv << "mu,alpha,beta,y,gamma,residual,slope_fd,slope_bound,shift\n";

  for (int s = 0; s < pairs; ++s) {
    const double mu = -3.0 + 6.0 * unit(rng);
    const double alpha = std::pow(10.0, -1.0 + 2.0 * unit(rng));
    const double beta = alpha / (1.5 + 8.5 * unit(rng));
    const double L = std::log(alpha / beta);
    const double y0 = 2.0 * std::abs(mu) + 1.0;
    for (int k = 0; k < grid; ++k) {
      const double mag = y0 * std::pow(1e6 / y0, static_cast<double>(k) / (grid - 1));
      for (const double y : {mag, -mag}) {
        const double x = gamma_solve(mu, alpha, y);
        const double residual = std::abs(x - mu * std::log(std::hypot(x, y)) + std::log(alpha));
        const double h = 1e-4 * std::abs(y);
        const double fd = (gamma_solve(mu, alpha, y + h) - gamma_solve(mu, alpha, y - h)) / (2.0 * h);
        const double bound = 2.0 * std::abs(mu) / std::abs(y);
        const double shift = gamma_solve(mu, beta, y) - x;
        worst_residual = std::max(worst_residual, residual);
        worst_slope = std::max(worst_slope, std::abs(fd) - bound);
        // Band slack: distance to the nearer edge of [2L/3, 2L], negative if outside.
        worst_band = std::min(worst_band, std::min(shift - 2.0 * L / 3.0, 2.0 * L - shift));
        if (k == grid - 1) worst_limit = std::max(worst_limit, std::abs(shift - L));
        csv << num(mu) << ',' << num(alpha) << ',' << num(beta) << ',' << num(y) << ',' << num(x) << ','
            << num(residual) << ',' << num(fd) << ',' << num(bound) << ',' << num(shift) << '\n';
      }
    }
  }
  out.metrics = {{"max_residual", worst_residual},
                 {"max_slope_excess", worst_slope},
                 {"min_band_slack", worst_band},
                 {"max_limit_error", worst_limit}};
  if (!(worst_residual <= 1e-12)) out.fail("residual above 1e-12");
  if (!(worst_slope <= 1e-6)) out.fail("slope bound exceeded by more than 1e-6");
  if (!(worst_band >= 0.0)) out.fail("alpha-shift left the [2/3, 2] log band");
  if (!(worst_limit <= 1e-3)) out.fail("alpha-shift limit off by more than 1e-3 at |y| = 1e6");
  out.csv = csv.str();
  return out;
}

SuiteResult verify_asymptotics(const Problem& prob, int samples) {
  SuiteResult out;
  out.name = "asymptotics";
  std::ostringstream csv;
  csv << "formula,j,abs_w,error\n";
  const double inv_d = 1.0 / prob.d;
  // Horizontal ray at height 40: |w| runs from 50 to 5000.
  RaySpec ray;
  ray.origin = {0.0, 40.0};
  ray.direction = 1.0;
  ray.t_min = 30.0;
  ray.t_max = std::sqrt(5000.0 * 5000.0 - 1600.0);
  for (int j = 1; j <= prob.d; ++j) {
    for (const auto& [formula, floor] : {std::pair{AsymFormula::FNewton, inv_d - 0.2},
                                         std::pair{AsymFormula::HRight, 1.0 + inv_d - 0.2}}) {
      const std::string tag = std::string(to_string(formula)) + "_j" + std::to_string(j);
      try {
        const AsymptoticReport rep = error_decay_scan(prob, j, formula, ray, samples);
        for (const auto& [r, e] : rep.samples)
          csv << to_string(formula) << ',' << j << ',' << num(r) << ',' << num(e) << '\n';
        out.metrics.emplace_back(tag + "_exponent", rep.exponent);
        out.metrics.emplace_back(tag + "_decreasing", rep.decreasing_fraction);
        if (!(rep.exponent >= floor)) out.fail(tag + ": exponent " + num(rep.exponent) + " below " + num(floor));
        if (!rep.monotone_majority()) out.fail(tag + ": fewer than 80% of consecutive errors decrease");
      } catch (const NumericError& e) {
        out.fail(tag + ": " + e.what());
      }
    }
  }
  out.csv = csv.str();
  return out;
}

SuiteResult verify_zeros(const Problem& prob, RootRegistry& registry, int k_lo, int k_hi) {
  SuiteResult out;
  out.name = "zeros";
  std::ostringstream csv;
  csv << "j,k,v_re,v_im,seed_re,seed_im,root_re,root_im,anchor_distance,residual\n";
  RootRegistry local(registry.rel_radius());
  std::vector<double> low, high;
  int seeds = 0;
  for (int j = 1; j <= prob.d; ++j) {
    for (long k = -k_hi; k <= k_hi; ++k) {
      if (std::abs(k) < k_lo) continue;
      try {
        const ZeroAnchor a = v_anchor(prob, j, k);
        const cplx seed = phi(prob, j, a.v);
        ++seeds;
        const cplx root = refine_zero(prob, seed, registry);
        local.insert(root);
        const double dist = std::abs(prob.q(root) - a.v);
        const double residual = std::abs(newton_correction(prob, root));
        if (std::abs(k) <= k_lo + 10) low.push_back(dist);
        if (std::abs(k) >= k_hi - 10) high.push_back(dist);
        csv << j << ',' << k << ',' << num(a.v.real()) << ',' << num(a.v.imag()) << ',' << num(seed.real()) << ','
            << num(seed.imag()) << ',' << num(root.real()) << ',' << num(root.imag()) << ',' << num(dist) << ','
            << num(residual) << '\n';
      } catch (const NumericError& e) {
        if (e.kind() == ErrorKind::AnchorTooLow) continue;
        out.fail("j=" + std::to_string(j) + " k=" + std::to_string(k) + ": " + e.what());
      }
    }
  }
  const double m_low = median(low), m_high = median(high);
  out.metrics = {{"seeds", static_cast<double>(seeds)},
                 {"distinct_roots", static_cast<double>(local.size())},
                 {"median_low_band", m_low},
                 {"median_high_band", m_high}};
  if (static_cast<int>(local.size()) != seeds) out.fail("two seeds refined to the same root");
  if (!(m_high <= 0.5 * m_low)) out.fail("anchor distance did not halve between the outer bands");
  out.csv = csv.str();
  return out;
}

SuiteResult verify_basins(const Problem& prob, const RootRegistry& registry, int count, int samples,
                          std::uint64_t seed, const OrbitOptions& opts) {
  SuiteResult out;
  out.name = "basins";
  std::vector<int> order(registry.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  const auto& roots = registry.roots();
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(roots[a].z) > std::abs(roots[b].z); });
  if (static_cast<int>(order.size()) > count) order.resize(static_cast<size_t>(count));
  if (static_cast<int>(order.size()) < count) out.fail("fewer registered roots than requested");

  const R2Sampler sampler(seed);
  long z_total = 0, z_ok = 0, w_total = 0, w_ok = 0;
  std::ostringstream csv;
  csv << "root_re,root_im,radius,z_samples,z_converged,w_samples,w_converged\n";
  for (const int idx : order) {
    const cplx z0 = roots[static_cast<size_t>(idx)].z;
    const long z_before = z_ok, w_before = w_ok;
    auto hits = [&](cplx z) {
      const OrbitResult r = iterate_orbit(prob, z, opts);
      return r.verdict == Verdict::Converged && registry.find(r.root) == idx;
    };
    try {
      const Shape zdisk = Shape::disk(z0, basin_disk_radius(prob, z0));
      const Shape wdisk = Shape::disk(prob.q(z0), 1.0 / 13.0);
      const int j = sector_of(prob, z0);
      for (int s = 0; s < samples; ++s) {
        const auto [u, v] = sampler(static_cast<std::uint64_t>(s));
        ++z_total;
        if (hits(zdisk.from_unit(u, v))) ++z_ok;
        ++w_total;
        if (hits(phi(prob, j, wdisk.from_unit(u, v)))) ++w_ok;
      }
      csv << num(z0.real()) << ',' << num(z0.imag()) << ',' << num(zdisk.r) << ',' << samples << ','
          << z_ok - z_before << ',' << samples << ',' << w_ok - w_before << '\n';
    } catch (const NumericError& e) {
      out.fail(std::string("root near ") + num(std::abs(z0)) + ": " + e.what());
    }
  }
  out.csv = csv.str();
  out.metrics = {{"roots", static_cast<double>(order.size())},
                 {"z_disk_converged", static_cast<double>(z_ok)},
                 {"z_disk_samples", static_cast<double>(z_total)},
                 {"w_disk_converged", static_cast<double>(w_ok)},
                 {"w_disk_samples", static_cast<double>(w_total)}};
  if (z_ok != z_total) out.fail("a z-plane basin-disk sample did not converge to its root");
  if (w_ok != w_total) out.fail("a w-plane disk sample did not converge to its root");
  return out;
}

SuiteResult verify_preimages(const Problem& prob, std::uint64_t seed, int starts, int steps, double alpha,
                             double eps) {
  SuiteResult out;
  out.name = "preimages";
  const double lam = prob.lambda_value();
  const double h = 1e-6;
  double nu = std::max(20.0, 2.0 * std::abs(lam));

  for (int attempt = 0; attempt < 6; ++attempt, nu *= 2.0) {
    std::mt19937_64 rng(seed);
    double min_slack = std::numeric_limits<double>::infinity(), c_hat = 0.0, b_hat = std::numeric_limits<double>::infinity();
    double min_modulus = std::numeric_limits<double>::infinity(), decay = 0.0;
    bool containment = true;
    std::string failure;
    std::ostringstream csv;
    csv << "start,j,w_re,w_im,drift_slack,imag_drift,modulus_slack,decay_constant,min_fd_derivative\n";
    for (int s = 0; s < starts && containment && failure.empty(); ++s) {
      const int j = 1 + s % prob.d;
      const double mag = std::abs(sector_constant(prob, j));
      const double y = (unit(rng) < 0.5 ? -1.0 : 1.0) * (nu + 60.0 * unit(rng));
      const cplx w0{gamma_solve(lam, alpha / mag, y) + 40.0 * unit(rng), y};
      try {
        const PullbackTrace mid = psi_orbit(prob, j, w0, steps, alpha, eps);
        const PullbackTrace plus = psi_orbit(prob, j, w0 + h, steps, alpha, eps);
        const PullbackTrace minus = psi_orbit(prob, j, w0 - h, steps, alpha, eps);
        double start_b = std::numeric_limits<double>::infinity();
        for (int n = 1; n <= steps; ++n) {
          const double fd = std::abs(plus.points[n] - minus.points[n]) / (2.0 * h);
          start_b = std::min(start_b, fd);
        }
        b_hat = std::min(b_hat, start_b);
        csv << s << ',' << j << ',' << num(w0.real()) << ',' << num(w0.imag()) << ',' << num(mid.drift_slack) << ','
            << num(mid.imag_drift) << ',' << num(mid.modulus_slack) << ',' << num(mid.decay_constant) << ','
            << num(start_b) << '\n';
        min_slack = std::min(min_slack, mid.drift_slack);
        c_hat = std::max(c_hat, mid.imag_drift);
        min_modulus = std::min(min_modulus, mid.modulus_slack);
        decay = std::max(decay, mid.decay_constant);
      } catch (const NumericError& e) {
        if (e.kind() == ErrorKind::ContainmentViolated) containment = false;
        else failure = e.what();
      }
    }
    if (!containment) continue;  // nu too small for this alpha: retry further out
    out.csv = csv.str();
    out.metrics = {{"nu", nu},
                   {"min_drift_slack", min_slack},
                   {"imag_drift_C", c_hat},
                   {"derivative_B", b_hat},
                   {"min_modulus_ratio", min_modulus},
                   {"decay_constant", decay}};
    if (!failure.empty()) out.fail(failure);
    if (!(min_slack >= 0.0)) out.fail("linear drift bound violated");
    if (!std::isfinite(c_hat)) out.fail("imaginary drift unbounded");
    if (!(b_hat > 0.0) || !std::isfinite(b_hat)) out.fail("pullback derivative vanished");
    return out;
  }
  out.metrics = {{"nu", nu}};
  out.fail("containment failed up to nu = " + num(nu));
  return out;
}

}  // namespace nmeasure
