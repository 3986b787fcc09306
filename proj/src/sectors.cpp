#include "newton_measure/sectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "newton_measure/errors.hpp"

namespace nmeasure {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double arg0(cplx w) noexcept {
  const double a = std::arg(w);
  return a > 0.0 ? a : a + kTwoPi;
}

void require_R(const Problem& prob) {
  if (!(prob.R > 0.0)) throw NumericError(ErrorKind::InvalidInput, "problem has no sector cutoff; normalize it first");
}

void require_sector(const Problem& prob, int j) {
  if (j < 1 || j > prob.d) throw NumericError(ErrorKind::InvalidInput, "sector index out of range");
}

// Newton on q(z) = w from z. Returns false on leaving the annulus or
// failing to settle.
bool newton_q(const Polynomial& q, cplx w, cplx& z, double lo, double hi) {
  for (int it = 0; it < 60; ++it) {
    const auto [val, slope] = eval_with_derivative(q, z);
    if (slope == cplx{}) return false;
    const cplx dz = (val - w) / slope;
    z -= dz;
    const double r = std::abs(z);
    if (r < lo || r > hi || !std::isfinite(r)) return false;
    if (std::abs(dz) <= 4.0 * std::numeric_limits<double>::epsilon() * r) break;
  }
  return std::abs(q(z) - w) <= 1e-10 * std::abs(w);
}

// Tracks the preimage along the ray from far out down to w. Rays outward from
// any point of G stay in G, and far out phi_j is close to its monomial seed.
cplx continue_phi(const Problem& prob, int j, cplx w) {
  double cauchy = 1.0;
  for (int k = 0; k < prob.d; ++k) cauchy += std::abs(prob.q.coeff(k));
  const double far = std::max(std::abs(w), std::pow(64.0 * prob.d * cauchy, prob.d));
  const cplx dir = w / std::abs(w);
  const double theta = arg0(w) / prob.d + kTwoPi * (j - 1) / prob.d;

  double radius = far;
  cplx z = std::polar(std::pow(radius, 1.0 / prob.d), theta);
  for (int it = 0; it < 100000; ++it) {
    const cplx target = radius * dir;
    const double root = std::pow(radius, 1.0 / prob.d);
    if (!newton_q(prob.q, target, z, 0.5 * root, 2.0 * root))
      throw NumericError(ErrorKind::SeedEscape, "continuation of phi left the annulus");
    if (radius <= std::abs(w)) return z;
    radius = std::max(std::abs(w), radius / 1.25);
    z *= std::pow(radius / std::abs(target), 1.0 / prob.d);
  }
  throw NumericError(ErrorKind::SeedEscape, "continuation of phi did not reach w");
}

}  // namespace

RegionSpec RegionSpec::make(double mu, double alpha, double nu) {
  if (!(alpha > 0.0)) throw NumericError(ErrorKind::InvalidInput, "region alpha must be positive");
  if (nu < 2.0 * std::abs(mu)) throw NumericError(ErrorKind::InvalidInput, "region nu must be >= 2|mu|");
  return {mu, alpha, nu};
}

const char* to_string(Zone zone) {
  switch (zone) {
    case Zone::Right: return "RIGHT";
    case Zone::Middle: return "MIDDLE";
    case Zone::Left: return "LEFT";
    case Zone::NearAxis: return "NEAR_AXIS";
  }
  return "?";
}

ZoneParams ZoneParams::defaults_for(const Problem& prob) {
  const double lam = prob.lambda_value();
  ZoneParams out;
  out.nu = std::max({20.0, 2.0 * std::abs(lam) + 1.0, 2.0 * std::abs(lam - 1.0) + 1.0});
  return out;
}

bool check_q_bound(const Polynomial& q, double R) {
  const int d = q.degree();
  const double base = std::pow(R, 1.0 / d);
  const double slack = std::ldexp(1.0, d);
  constexpr int kRadii = 10;
  constexpr int kAngles = 72;  // 10 x 72 = 720 sample points
  for (int i = 0; i < kRadii; ++i) {
    const double r = 0.5 * base * std::pow(4.0, static_cast<double>(i) / (kRadii - 1));
    const double rd = std::pow(r, d);
    for (int k = 0; k < kAngles; ++k) {
      const double mag = std::abs(q(std::polar(r, kTwoPi * k / kAngles)));
      if (mag < rd / slack || mag > rd * slack) return false;
    }
  }
  return true;
}

double choose_R(const Polynomial& q) {
  if (q.degree() < 1) throw NumericError(ErrorKind::InvalidInput, "q must be non-constant");
  double crit = 0.0;
  if (q.degree() >= 2)
    for (const cplx c : polynomial_roots(q.derivative())) crit = std::max(crit, std::abs(q(c)));
  for (double R = 1.0; R < 1e300; R *= 2.0)
    if (crit < R && check_q_bound(q, R)) return R;
  throw NumericError(ErrorKind::InvalidInput, "no sector cutoff satisfies the |q| bound");
}

bool in_G(const Problem& prob, cplx w) noexcept {
  if (std::abs(w) <= prob.R) return false;
  return !(w.imag() == 0.0 && w.real() >= 0.0);
}

cplx phi(const Problem& prob, int j, cplx w) {
  require_R(prob);
  require_sector(prob, j);
  if (!in_G(prob, w)) throw NumericError(ErrorKind::NotInG, "phi needs w outside D(0,R) and off [0, inf)");
  const int d = prob.d;
  if (d == 1) return (w - prob.q.coeff(0)) / prob.q.coeff(1);

  const double root = std::pow(std::abs(w), 1.0 / d);
  const cplx seed = std::polar(root, arg0(w) / d + kTwoPi * (j - 1) / d);
  cplx z = seed;
  // Accept the direct Newton result only when it is unambiguously the
  // preimage nearest the seed; otherwise fall back to continuation.
  if (newton_q(prob.q, w, z, 0.5 * root, 2.0 * root) && std::abs(z - seed) < 0.5 * root * std::sin(M_PI / d))
    return z;
  return continue_phi(prob, j, w);
}

cplx phi_prime(const Problem& prob, int j, cplx w) { return 1.0 / prob.dq(phi(prob, j, w)); }

double sector_arg(const Problem& prob, int j, cplx z) noexcept {
  const double centre = (2.0 * j - 1.0) * M_PI / prob.d;
  return centre + std::remainder(std::arg(z) - centre, kTwoPi);
}

cplx sector_log(const Problem& prob, int j, cplx z) noexcept { return {std::log(std::abs(z)), sector_arg(prob, j, z)}; }

int sector_of(const Problem& prob, cplx z) {
  require_R(prob);
  const cplx w = prob.q(z);
  if (std::abs(w) <= prob.R) throw NumericError(ErrorKind::NotInG, "z lies inside q^{-1}(D(0,R))");
  if (prob.d == 1) return 1;
  const int guess = std::clamp(static_cast<int>(std::floor(arg0(z) * prob.d / kTwoPi)) + 1, 1, prob.d);
  // On the slit itself the point belongs to no sector; nudge into the lower
  // side, which keeps the choice deterministic.
  const cplx wg = in_G(prob, w) ? w : cplx(w.real(), -std::abs(w) * 1e-15);
  int best = guess;
  double best_dist = std::numeric_limits<double>::infinity();
  for (int off = 0; off < prob.d; ++off) {
    const int j = (guess - 1 + off) % prob.d + 1;
    const double dist = std::abs(phi(prob, j, wg) - z);
    if (dist < best_dist) {
      best_dist = dist;
      best = j;
    }
    if (dist <= 1e-6 * (1.0 + std::abs(z))) break;
  }
  return best;
}

double gamma_solve(double mu, double alpha, double y) {
  if (!(alpha > 0.0)) throw NumericError(ErrorKind::InvalidInput, "gamma alpha must be positive");
  if (std::abs(y) < 2.0 * std::abs(mu) * (1.0 - 1e-12))
    throw NumericError(ErrorKind::InvalidInput, "gamma needs |y| >= 2|mu|");
  const double la = std::log(alpha);
  if (mu == 0.0) return -la;

  auto F = [&](double x) { return x - mu * std::log(std::hypot(x, y)) + la; };
  // F' lies in [1/2, 3/2], so the root is within 2|F(x0)| of x0.
  const double x0 = -la;
  const double f0 = F(x0);
  double lo = x0 - 2.0 * std::abs(f0) - 1e-300;
  double hi = x0 + 2.0 * std::abs(f0) + 1e-300;
  double x = x0;
  for (int it = 0; it < 200; ++it) {
    const double fx = F(x);
    if (fx == 0.0) return x;
    (fx > 0.0 ? hi : lo) = x;
    const double slope = 1.0 - mu * x / (x * x + y * y);
    double next = x - fx / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 2.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) return next;
    x = next;
  }
  return x;
}

bool in_H(cplx w, const RegionSpec& spec) noexcept {
  if (std::abs(w.imag()) < spec.nu) return false;
  return w.real() >= spec.mu * std::log(std::abs(w)) - std::log(spec.alpha);
}

double on_Gamma_residual(cplx w, const RegionSpec& spec) {
  return w.real() - spec.mu * std::log(std::abs(w)) + std::log(spec.alpha);
}

double gamma_magnitude(cplx w, const RegionSpec& spec) noexcept { return spec.alpha * std::pow(std::abs(w), -spec.mu); }

Zone zone_classify(const Problem& prob, int j, cplx w, const ZoneParams& params) {
  require_sector(prob, j);
  const auto& cj = prob.cj.at(static_cast<size_t>(j - 1));
  if (!cj) throw NumericError(ErrorKind::InvalidInput, "zone classification needs c_j");
  if (std::abs(w.imag()) < params.nu) return Zone::NearAxis;

  const double mag = std::abs(*cj);
  const double lam = prob.lambda_value();
  const RegionSpec right{lam, 1.0 / mag, params.nu};
  const RegionSpec mid_outer{lam - 1.0, params.alpha1 / mag, params.nu};
  const RegionSpec mid_inner{lam, params.beta1 / mag, params.nu};
  const RegionSpec left{lam - 1.0, params.beta2 / mag, params.nu};

  if (in_H(w, right)) return Zone::Right;
  if (in_H(w, mid_outer) && !in_H(w, mid_inner)) return Zone::Middle;
  if (!in_H(w, left)) return Zone::Left;

  // Transition bands: nearest band boundary by Gamma-residual, ties to the
  // band further right.
  const double d_right = std::abs(on_Gamma_residual(w, right));
  const double d_mid = std::min(std::abs(on_Gamma_residual(w, mid_outer)), std::abs(on_Gamma_residual(w, mid_inner)));
  const double d_left = std::abs(on_Gamma_residual(w, left));
  if (d_right <= d_mid && d_right <= d_left) return Zone::Right;
  if (d_mid <= d_left) return Zone::Middle;
  return Zone::Left;
}

double calibrate_sector_constant(const Problem& prob, int samples, std::uint64_t seed) {
  require_R(prob);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_mag(std::log(2.0 * prob.R), std::log(1e6));
  std::uniform_real_distribution<double> angle(1e-9, kTwoPi - 1e-9);
  std::uniform_int_distribution<int> sector(1, prob.d);
  double c_hat = 0.0;
  for (int s = 0; s < samples; ++s) {
    const cplx w = std::polar(std::exp(log_mag(rng)), angle(rng));
    const int j = sector(rng);
    const cplx z = phi(prob, j, w);
    const double a = sector_arg(prob, j, z);
    const double lo = kTwoPi * (j - 1) / prob.d;
    const double hi = kTwoPi * j / prob.d;
    const double excess = std::max(lo - a, a - hi);
    if (excess > 0.0) c_hat = std::max(c_hat, excess * std::abs(z));
  }
  return c_hat;
}

}  // namespace nmeasure
