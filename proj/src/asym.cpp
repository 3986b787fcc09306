#include "newton_measure/asym.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "newton_measure/errors.hpp"

namespace nmeasure {

namespace {

constexpr double kMaxLogValue = 709.0;

double d_lambda(const Problem& prob) { return static_cast<double>(prob.d - 1 - prob.m); }

void require_region(bool ok, const char* what) {
  if (!ok) throw NumericError(ErrorKind::RegionViolation, what);
}

// c_j e^{-w} phi^{d lambda}, assembled in log space.
cplx cj_term(const Problem& prob, int j, cplx w, cplx z) {
  const cplx cj = sector_constant(prob, j);
  const cplx lg = std::log(cj) - w + d_lambda(prob) * sector_log(prob, j, z);
  if (lg.real() > kMaxLogValue) throw NumericError(ErrorKind::OverflowRegion, "c_j e^{-w} term overflows");
  return std::exp(lg);
}

}  // namespace

cplx estimate_cj(const Problem& prob, int j, double X0, double tol) {
  double X = std::max({X0, prob.R + 1.0 + 1e-9, 8.0});
  cplx prev = eval_g(prob, phi(prob, j, cplx(-X, 0.0)), tol);
  while (X <= 600.0) {
    X *= 2.0;
    const cplx cur = eval_g(prob, phi(prob, j, cplx(-std::min(X, 600.0), 0.0)), tol);
    if (std::abs(cur - prev) <= tol * (1.0 + std::abs(cur))) return cur;
    prev = cur;
  }
  throw NumericError(ErrorKind::NonConvergence, "sector constant did not settle by X = 600");
}

void ensure_sector_constants(Problem& prob, double tol) {
  prob.cj.resize(static_cast<size_t>(prob.d));
  for (int j = 1; j <= prob.d; ++j) {
    auto& slot = prob.cj[static_cast<size_t>(j - 1)];
    if (!slot) slot = estimate_cj(prob, j, 0.0, tol);
  }
  for (int j = 1; j <= prob.d; ++j) {
    if (std::abs(*prob.cj[static_cast<size_t>(j - 1)]) < kSectorConstantFloor) {
      std::ostringstream msg;
      msg << "c_" << j << " vanishes (|c_j| = " << std::abs(*prob.cj[static_cast<size_t>(j - 1)])
          << "); Baker domain likely";
      throw NumericError(ErrorKind::SectorConstantVanishes, msg.str());
    }
  }
}

cplx sector_constant(const Problem& prob, int j) {
  if (j < 1 || j > prob.d || static_cast<int>(prob.cj.size()) < j || !prob.cj[static_cast<size_t>(j - 1)])
    throw NumericError(ErrorKind::InvalidInput, "sector constant c_j not available");
  return *prob.cj[static_cast<size_t>(j - 1)];
}

cplx sector_power(const Problem& prob, int j, cplx z) { return std::exp(d_lambda(prob) * sector_log(prob, j, z)); }

cplx g_asym(const Problem& prob, int j, cplx w) {
  const cplx z = phi(prob, j, w);
  return sector_constant(prob, j) + prob.p(z) / prob.dq(z) * (1.0 + prob.lambda_value() / w) * std::exp(w);
}

bool sector_path_available(const Problem& prob, cplx w) noexcept {
  if (!(prob.R > 0.0) || !prob.has_sector_constants()) return false;
  const double margin = 2.0 * prob.R + 2.0;
  return std::abs(w.imag()) > margin || w.real() < -margin;
}

cplx sector_path_integral(const Problem& prob, int j, cplx z, double tol) {
  const cplx w = prob.q(z);
  if (!sector_path_available(prob, w)) throw NumericError(ErrorKind::RegionViolation, "leftward ray meets D(0,R)");
  constexpr double kReach = 50.0;  // e^{-50} is far below any tolerance used here
  const double sn = prob.d > 1 ? std::sin(M_PI / prob.d) : 1.0;

  // phi_j along the ray, warm-started from the previous node. Newton stops
  // once the step is below 1e-8 relative: quadratic convergence puts the
  // accepted point well under the quadrature tolerance.
  auto inv = [](cplx a) { return std::conj(a) / std::norm(a); };
  cplx last_s = w;
  cplx last_z = z;
  auto integrand = [&](double u) -> cplx {
    const cplx s = w + u;
    cplx x = last_z + (s - last_s) * inv(prob.dq(last_z));
    bool ok = false;
    for (int it = 0; it < 30; ++it) {
      const auto [val, slope] = eval_with_derivative(prob.q, x);
      const cplx dx = (val - s) * inv(slope);
      x -= dx;
      if (std::norm(dx) <= 1e-16 * std::norm(x)) {
        ok = true;
        break;
      }
    }
    if (!ok || !(std::norm(x - last_z) < 0.25 * sn * sn * std::norm(x))) x = phi(prob, j, s);
    last_s = s;
    last_z = x;
    return prob.p(x) * inv(prob.dq(x)) * std::exp(u);
  };
  // The weight e^u concentrates near u = 0, so the panels do too.
  static constexpr double kBreaks[] = {-kReach, -24.0, -10.0, -4.0, 0.0};
  return gk_adaptive(integrand, kBreaks, tol, 0.0, 0.0).value;
}

cplx sector_path_correction(const Problem& prob, int j, cplx z, double tol) {
  const cplx qz = prob.q(z);
  const cplx pz = prob.p(z);
  const cplx integral = sector_path_integral(prob, j, z, tol);
  const cplx lg = std::log(sector_constant(prob, j)) - qz - std::log(pz);
  if (lg.real() > kMaxLogValue) throw NumericError(ErrorKind::NumericLoss, "c_j e^{-q}/p overflows");
  return integral / pz + std::exp(lg);
}

cplx exact_correction(const Problem& prob, cplx z, double tol) {
  const cplx qz = prob.q(z);
  if (std::abs(qz) > 4.0 * M_PI + 2.0 * prob.R + 2.0 && sector_path_available(prob, qz) && !is_pole(prob, z))
    return sector_path_correction(prob, sector_of(prob, z), z, tol);
  return newton_correction(prob, z, tol);
}

cplx eval_g_sector(const Problem& prob, int j, cplx z, double tol) {
  const cplx qz = prob.q(z);
  if (qz.real() > kMaxLogValue) throw NumericError(ErrorKind::OverflowRegion, "e^q overflows");
  return sector_constant(prob, j) + std::exp(qz) * sector_path_integral(prob, j, z, tol);
}

cplx f_asym_correction(const Problem& prob, int j, cplx z) {
  const cplx qz = prob.q(z);
  require_region(std::abs(qz) > prob.R, "f_asym needs |q(z)| > R");
  const cplx drift = (1.0 + prob.lambda_value() / std::pow(z, prob.d)) / prob.dq(z);
  // Far right the c_j term is below the last bit of the drift; skip it so no
  // sector constant is needed there.
  if (qz.real() > kOverflowGuard) return drift;
  const cplx lg = std::log(sector_constant(prob, j)) - qz - std::log(prob.p(z));
  if (lg.real() > kMaxLogValue) throw NumericError(ErrorKind::OverflowRegion, "c_j e^{-q}/p overflows");
  return drift + std::exp(lg);
}

cplx f_asym(const Problem& prob, int j, cplx z) { return z - f_asym_correction(prob, j, z); }

cplx h_direct(const Problem& prob, int j, cplx w, double tol) {
  const cplx z = phi(prob, j, w);
  return prob.q(z - exact_correction(prob, z, tol));
}

cplx h_prime_direct(const Problem& prob, int j, cplx w, double tol) {
  const cplx z = phi(prob, j, w);
  const cplx corr = exact_correction(prob, z, tol);
  const cplx fprime = corr * (prob.dq(z) + prob.dp(z) / prob.p(z));
  return prob.dq(z - corr) * fprime / prob.dq(z);
}

cplx h_asym_right(const Problem& prob, int j, cplx w) {
  const cplx z = phi(prob, j, w);
  const double kappa = static_cast<double>(2 * prob.m + 1 - prob.d) / (2.0 * prob.d);
  return w - 1.0 + kappa / w - cj_term(prob, j, w, z);
}

cplx hprime_asym(const Problem& prob, int j, cplx w) { return 1.0 + cj_term(prob, j, w, phi(prob, j, w)); }

LogComplex h_asym_left(const Problem& prob, int j, cplx w) {
  const double d = prob.d;
  LogComplex out;
  out.log = d * std::log(-sector_constant(prob, j) / d) - d * w;
  if (prob.m != 0) out.log -= static_cast<double>(prob.m) * std::log(w);
  if (out.log.real() < kMaxLogValue) out.value = std::exp(out.log);
  return out;
}

const char* to_string(AsymFormula formula) {
  switch (formula) {
    case AsymFormula::GSector: return "g_sector";
    case AsymFormula::FNewton: return "f_newton";
    case AsymFormula::HRight: return "h_right";
    case AsymFormula::HPrime: return "h_prime";
    case AsymFormula::HMiddle: return "h_middle";
    case AsymFormula::HLeft: return "h_left";
  }
  return "?";
}

std::string RaySpec::describe() const {
  std::ostringstream os;
  os.precision(6);
  os << "w = (" << origin.real() << "," << origin.imag() << ") + t*(" << direction.real() << ","
     << direction.imag() << "), t in [" << t_min << "," << t_max << "]";
  return os.str();
}

double fit_decay_exponent(const std::vector<std::pair<double, double>>& samples) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [r, e] : samples)
    if (e > 0.0 && r > 0.0) pts.emplace_back(std::log(r), std::log(e));
  if (pts.empty()) return std::numeric_limits<double>::infinity();
  if (pts.size() == 1) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return -(n * sxy - sx * sy) / denom;
}

AsymptoticReport error_decay_scan(const Problem& prob, int j, AsymFormula formula, const RaySpec& ray, int n,
                                  double tol) {
  if (n < 2 || !(ray.t_min > 0.0) || !(ray.t_max > ray.t_min))
    throw NumericError(ErrorKind::InvalidInput, "scan needs n >= 2 and 0 < t_min < t_max");
  const cplx cj = sector_constant(prob, j);
  const double mag = std::abs(cj);
  const double lam = prob.lambda_value();
  const ZoneParams zp = ZoneParams::defaults_for(prob);

  AsymptoticReport rep;
  rep.formula = formula;
  rep.j = j;
  rep.ray = ray.describe();
  for (int i = 0; i < n; ++i) {
    const double t = ray.t_min * std::pow(ray.t_max / ray.t_min, static_cast<double>(i) / (n - 1));
    const cplx w = ray.origin + t * ray.direction;
    require_region(in_G(prob, w), "ray leaves G");
    double err = 0.0;
    switch (formula) {
      case AsymFormula::GSector: {
        const cplx z = phi(prob, j, w);
        const cplx ratio = prob.p(z) / prob.dq(z);
        if (sector_path_available(prob, w)) {
          // g - c_j = e^w I exactly, so compare I against its expansion.
          err = std::abs(sector_path_integral(prob, j, z, tol) - ratio * (1.0 + lam / w)) / std::abs(ratio);
        } else {
          err = std::abs(eval_g(prob, z, tol) - g_asym(prob, j, w)) / std::abs(ratio * std::exp(w));
        }
        break;
      }
      case AsymFormula::FNewton: {
        const cplx z = phi(prob, j, w);
        require_region(w.real() > -kOverflowGuard / 2, "ray leaves the f_asym region");
        err = std::abs(exact_correction(prob, z, tol) - f_asym_correction(prob, j, z)) * std::abs(prob.dq(z));
        break;
      }
      case AsymFormula::HRight:
        require_region(in_H(w, {lam, 2.0 / mag, 2.0 * std::abs(lam)}), "ray leaves H(lambda, 2/|c_j|)");
        err = std::abs(h_direct(prob, j, w, tol) - h_asym_right(prob, j, w));
        break;
      case AsymFormula::HPrime:
        require_region(in_H(w, {lam, 1.0 / mag, 2.0 * std::abs(lam)}), "ray leaves H(lambda, 1/|c_j|)");
        err = std::abs(h_prime_direct(prob, j, w, tol) - hprime_asym(prob, j, w));
        break;
      case AsymFormula::HMiddle: {
        const RegionSpec outer{lam - 1.0, zp.alpha1 / mag, zp.nu};
        const RegionSpec inner{lam, zp.beta1 / mag, zp.nu};
        require_region(in_H(w, outer) && !in_H(w, inner), "ray leaves the middle band");
        const cplx z = phi(prob, j, w);
        const cplx ratio = (h_direct(prob, j, w, tol) - w) / (-cj_term(prob, j, w, z));
        err = std::abs(ratio - 1.0);
        break;
      }
      case AsymFormula::HLeft: {
        require_region(!in_H(w, {lam - 1.0, zp.beta2 / mag, zp.nu}) && std::abs(w.imag()) >= zp.nu,
                       "ray leaves the left band");
        const LogComplex form = h_asym_left(prob, j, w);
        err = std::abs(std::exp(std::log(h_direct(prob, j, w, tol)) - form.log) - 1.0);
        break;
      }
    }
    rep.samples.emplace_back(std::abs(w), err);
  }
  std::sort(rep.samples.begin(), rep.samples.end());
  int decreasing = 0;
  for (size_t i = 1; i < rep.samples.size(); ++i)
    if (rep.samples[i].second <= rep.samples[i - 1].second) ++decreasing;
  rep.decreasing_fraction = static_cast<double>(decreasing) / static_cast<double>(rep.samples.size() - 1);
  rep.exponent = fit_decay_exponent(rep.samples);
  return rep;
}

}  // namespace nmeasure
