#include "newton_measure/roots.hpp"

#include <algorithm>
#include <cmath>

#include "newton_measure/asym.hpp"
#include "newton_measure/errors.hpp"
#include "newton_measure/sectors.hpp"

namespace nmeasure {

namespace {

bool canonical_less(cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); }

bool better(const RootEntry& a, const RootEntry& b) {
  if (a.residual != b.residual) return a.residual < b.residual;
  return canonical_less(a.z, b.z);
}

}  // namespace

int RootRegistry::find(cplx z) const noexcept {
  // A match lies within the radius in Re, so only that slice is scanned.
  const double reach = 2.0 * match_radius(z) + 1e-300;
  auto lo = std::lower_bound(roots_.begin(), roots_.end(), z.real() - reach,
                             [](const RootEntry& e, double x) { return e.z.real() < x; });
  int best = -1;
  double best_dist = 0.0;
  for (auto it = lo; it != roots_.end() && it->z.real() <= z.real() + reach; ++it) {
    const double dist = std::abs(it->z - z);
    if (dist <= std::max(match_radius(z), match_radius(it->z)) && (best < 0 || dist < best_dist)) {
      best = static_cast<int>(it - roots_.begin());
      best_dist = dist;
    }
  }
  return best;
}

int RootRegistry::insert(const RootEntry& entry) {
  const int hit = find(entry.z);
  if (hit >= 0) {
    auto& cur = roots_[static_cast<size_t>(hit)];
    if (!better(entry, cur)) return hit;
    roots_.erase(roots_.begin() + hit);
  }
  auto pos = std::lower_bound(roots_.begin(), roots_.end(), entry,
                              [](const RootEntry& a, const RootEntry& b) { return canonical_less(a.z, b.z); });
  return static_cast<int>(roots_.insert(pos, entry) - roots_.begin());
}

void RootRegistry::merge(const RootRegistry& other) {
  for (const auto& e : other.roots_) insert(e);
}

double y_anchor(const Problem& prob, int j, long n) {
  const double lam = prob.lambda_value();
  const double base = std::arg(-sector_constant(prob, j));
  const double two_pi_n = 2.0 * M_PI * static_cast<double>(n);
  if (n >= 0) return base + lam * (M_PI / 2.0 + 2.0 * M_PI * (j - 1)) + two_pi_n;
  return base + lam * (-M_PI / 2.0 + 2.0 * M_PI * j) + two_pi_n;
}

ZeroAnchor v_anchor(const Problem& prob, int j, long k) {
  const double y = y_anchor(prob, j, k);
  const double lam = prob.lambda_value();
  if (std::abs(y) < 2.0 * std::abs(lam)) throw NumericError(ErrorKind::AnchorTooLow, "|Im v| < 2|lambda|");
  const double x = gamma_solve(lam, 1.0 / std::abs(sector_constant(prob, j)), y);
  return {j, k, cplx(x, y)};
}

cplx refine_zero(const Problem& prob, cplx guess, const RefineOptions& opts) {
  cplx z = guess;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const cplx corr = newton_correction(prob, z, kDefaultTol);
    cplx step = corr;
    // Damping: accept the first halving that does not increase the residual.
    for (int damp = 0; damp < 30; ++damp) {
      const cplx trial = z - step;
      double trial_res = 0.0;
      try {
        trial_res = std::abs(newton_correction(prob, trial, kDefaultTol));
      } catch (const NumericError&) {
        step *= 0.5;
        continue;
      }
      if (trial_res <= std::abs(corr) || std::abs(step) <= opts.tol * (1.0 + std::abs(z))) break;
      step *= 0.5;
    }
    z -= step;
    if (std::abs(z - guess) > opts.max_drift) throw NumericError(ErrorKind::DivergedFromSeed, "refinement left the seed neighbourhood");
    if (std::abs(step) <= opts.tol * (1.0 + std::abs(z))) {
      // One more full step to land on the root to machine precision.
      return z - newton_correction(prob, z, kDefaultTol);
    }
  }
  throw NumericError(ErrorKind::MaxIterations, "refine_zero did not settle in 50 iterations");
}

cplx refine_zero(const Problem& prob, cplx guess, RootRegistry& registry, const RefineOptions& opts) {
  const cplx z = refine_zero(prob, guess, opts);
  const double gp = std::abs(prob.p(z));
  registry.insert(RootEntry{z, std::abs(eval_g(prob, z)), gp < 1e-10 * std::pow(1.0 + std::abs(z), prob.m)});
  return z;
}

double basin_disk_radius(const Problem& prob, cplx z0, double r1) {
  const double r = std::abs(z0);
  if (r < r1) throw NumericError(ErrorKind::BelowThreshold, "root modulus below the basin-disk threshold");
  return 1.0 / (3.0 * prob.d * std::pow(r, prob.d - 1));
}

std::vector<cplx> critical_point_candidates(const Problem& prob) {
  const Polynomial g2 = prob.p * prob.dq + prob.dp;
  if (g2.is_zero() || g2.degree() < 1) return {};
  return polynomial_roots(g2);
}

std::vector<cplx> critical_points(const Problem& prob, double tol) {
  std::vector<cplx> out;
  for (const cplx z : critical_point_candidates(prob)) {
    if (std::abs(prob.p(z)) <= tol * std::pow(1.0 + std::abs(z), prob.m)) continue;
    const cplx qz = prob.q(z);
    if (qz.real() <= kOverflowGuard) {
      // |g| relative to g' = p e^q: zero of g means a superattracting point.
      if (std::abs(newton_correction(prob, z)) <= tol * (1.0 + std::abs(z))) continue;
    }
    out.push_back(z);
  }
  return out;
}

}  // namespace nmeasure
