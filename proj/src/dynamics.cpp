#include "newton_measure/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "newton_measure/asym.hpp"
#include "newton_measure/errors.hpp"

namespace nmeasure {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

StepResult finish(cplx z, cplx corr, Route route) {
  const cplx next = z - corr;
  if (!finite(next)) throw NumericError(ErrorKind::NumericLoss, "next iterate is not representable");
  return {next, corr, route};
}

StepResult asymptotic_step(const Problem& prob, cplx z, cplx qz) {
  if (!(std::abs(qz) > prob.R) || prob.R <= 0.0)
    throw NumericError(ErrorKind::NumericLoss, "no evaluation path is representable at z");
  try {
    // Far right the c_j term is dropped, so any sector index will do there.
    const int j = qz.real() > kOverflowGuard ? 1 : sector_of(prob, z);
    return finish(z, f_asym_correction(prob, j, z), qz.real() > 0.0 ? Route::AsymRight : Route::AsymLeft);
  } catch (const NumericError& e) {
    if (e.kind() == ErrorKind::PoleHit) throw;
    throw NumericError(ErrorKind::NumericLoss, e.what());
  }
}

// f' = corr (q' + p'/p).
cplx derivative_from_correction(const Problem& prob, cplx z, cplx corr) {
  return corr * (prob.dq(z) + prob.dp(z) / prob.p(z));
}

// Empty when the quadrature cannot represent the correction.
std::optional<cplx> direct_correction(const Problem& prob, cplx z, double tol) {
  try {
    return exact_correction(prob, z, tol);
  } catch (const NumericError& e) {
    if (e.kind() == ErrorKind::PoleHit) throw;
    return std::nullopt;
  }
}

}  // namespace

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Converged: return "converged";
    case Verdict::Cycle: return "cycle";
    case Verdict::Escaped: return "escaped";
    case Verdict::PoleHit: return "pole";
    case Verdict::Unresolved: return "unresolved";
  }
  return "?";
}

StepResult step_detail(const Problem& prob, cplx z, double tol) {
  if (is_pole(prob, z)) throw NumericError(ErrorKind::PoleHit, "p vanishes at z");
  const cplx qz = prob.q(z);
  if (std::abs(qz.real()) <= kOverflowGuard)
    if (auto corr = direct_correction(prob, z, tol)) return finish(z, *corr, Route::Direct);
  return asymptotic_step(prob, z, qz);
}

cplx step(const Problem& prob, cplx z, double tol) { return step_detail(prob, z, tol).next; }

StepResult step_asymptotic(const Problem& prob, cplx z) {
  if (is_pole(prob, z)) throw NumericError(ErrorKind::PoleHit, "p vanishes at z");
  return asymptotic_step(prob, z, prob.q(z));
}

OrbitResult OrbitResult::truncated(int budget) const {
  if (iterations <= budget) return *this;
  OrbitResult out;
  out.verdict = Verdict::Unresolved;
  out.iterations = budget;
  return out;
}

OrbitResult iterate_orbit(const Problem& prob, cplx z0, const OrbitOptions& opts) {
  if (opts.budget < 1) throw NumericError(ErrorKind::InvalidInput, "budget must be >= 1");
  OrbitResult res;

  cplx z = z0;
  cplx prev = z0;
  cplx tortoise = z0;
  int power = 1;
  int lam = 0;
  int stagnant = 0;
  int streak = 0;

  auto unresolved = [&](bool loss) {
    res.verdict = Verdict::Unresolved;
    res.iterations = opts.budget;
    res.final_point = z;
    res.numeric_loss = loss;
    return res;
  };

  for (int n = 0;; ++n) {
    if (is_pole(prob, z)) {
      res.verdict = Verdict::PoleHit;
      res.iterations = n;
      res.final_point = z;
      return res;
    }
    const cplx qz = prob.q(z);
    cplx corr;
    try {
      corr = step_detail(prob, z, opts.tol).correction;
    } catch (const NumericError& e) {
      if (e.kind() != ErrorKind::PoleHit) return unresolved(true);
      res.verdict = Verdict::PoleHit;
      res.iterations = n;
      res.final_point = z;
      return res;
    }

    const double scale = 1.0 + std::abs(z);
    const bool close = n == 0 || std::abs(z - prev) < opts.conv_radius * scale;
    if (close && std::abs(corr) < opts.residual_threshold * scale &&
        std::abs(derivative_from_correction(prob, z, corr)) < 0.5) {
      res.verdict = Verdict::Converged;
      res.iterations = n;
      res.final_point = z - corr;
      res.root = res.final_point;
      return res;
    }
    if (n == opts.budget) return unresolved(false);

    const cplx next = z - corr;
    if (!finite(next)) return unresolved(true);
    prev = z;
    z = next;

    // Escape: sustained growth far out with Re q falling.
    if (std::abs(z) > opts.escape_radius && std::abs(z) > std::abs(prev) && prob.q(z).real() < qz.real()) {
      if (++streak >= opts.escape_streak) {
        res.verdict = Verdict::Escaped;
        res.iterations = n + 1;
        res.final_point = z;
        return res;
      }
    } else {
      streak = 0;
    }

    // Brent cycle detection.
    ++lam;
    if (std::abs(z - tortoise) < opts.cycle_tol) {
      if (lam == 1 || std::abs(z - prev) < opts.cycle_tol) {
        // A fixed point that is not a root: the orbit has stalled.
        if (++stagnant >= 3) return unresolved(false);
      } else if (lam <= opts.period_cap) {
        cplx mult = 1.0;
        cplx w = z;
        try {
          for (int k = 0; k < lam; ++k) {
            const StepResult s = step_detail(prob, w, opts.tol);
            mult *= derivative_from_correction(prob, w, s.correction);
            w = s.next;
          }
        } catch (const NumericError&) {
          return unresolved(true);
        }
        res.verdict = Verdict::Cycle;
        res.iterations = n + 1;
        res.final_point = z;
        res.period = lam;
        res.representative = z;
        res.multiplier = mult;
        res.attracting = std::abs(mult) < 1.0;
        return res;
      }
    } else {
      stagnant = 0;
    }
    if (lam == power) {
      tortoise = z;
      power *= 2;
      lam = 0;
    }
  }
}

OrbitResult iterate_orbit(const Problem& prob, cplx z, RootRegistry& registry, const OrbitOptions& opts) {
  OrbitResult res = iterate_orbit(prob, z, opts);
  if (res.verdict == Verdict::Converged) {
    registry.insert(RootEntry{res.root, 0.0, false});
    res.root_id = registry.find(res.root);
  }
  return res;
}

void resolve_root_ids(std::vector<OrbitResult>& results, const RootRegistry& registry) {
  for (auto& r : results) r.root_id = r.verdict == Verdict::Converged ? registry.find(r.root) : -1;
}

std::vector<OrbitResult> classify_generated(const Problem& prob, size_t n, const std::function<cplx(size_t)>& point,
                                            const OrbitOptions& opts, RootRegistry& registry, int threads) {
  constexpr size_t kTile = 1024;
  const size_t tiles = (n + kTile - 1) / kTile;
  std::vector<OrbitResult> out(n);
  std::vector<RootRegistry> local(tiles, RootRegistry(registry.rel_radius()));
  std::atomic<size_t> next{0};

  auto worker = [&] {
    for (size_t t; (t = next.fetch_add(1)) < tiles;) {
      const size_t end = std::min(n, (t + 1) * kTile);
      for (size_t i = t * kTile; i < end; ++i) {
        out[i] = iterate_orbit(prob, point(i), opts);
        if (out[i].verdict == Verdict::Converged) local[t].insert(RootEntry{out[i].root, 0.0, false});
      }
    }
  };
  int count = threads > 0 ? threads : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  count = static_cast<int>(std::min<size_t>(static_cast<size_t>(count), std::max<size_t>(tiles, 1)));
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < count; ++i) pool.emplace_back(worker);
  }
  for (const auto& reg : local) registry.merge(reg);
  resolve_root_ids(out, registry);
  return out;
}

std::vector<OrbitResult> classify_points(const Problem& prob, const std::vector<cplx>& points,
                                         const OrbitOptions& opts, RootRegistry& registry, int threads) {
  return classify_generated(prob, points.size(), [&](size_t i) { return points[i]; }, opts, registry, threads);
}

cplx psi_inverse(const Problem& prob, int j, cplx w0, double alpha, double eps) {
  if (!(alpha > 0.0 && alpha < 1.0) || !(eps > 0.0 && eps < 1.0 - alpha))
    throw NumericError(ErrorKind::InvalidInput, "psi_inverse needs alpha in (0,1) and eps in (0, 1-alpha)");
  const double lam = prob.lambda_value();
  const RegionSpec region{lam, alpha / std::abs(sector_constant(prob, j)), 2.0 * std::abs(lam)};
  if (!in_H(w0, region)) throw NumericError(ErrorKind::RegionViolation, "w0 outside H(lambda, alpha/|c_j|)");

  cplx w = w0 + 1.0;
  for (int it = 0; it < 30; ++it) {
    const cplx dw = (h_direct(prob, j, w) - w0) / h_prime_direct(prob, j, w);
    w -= dw;
    if (!finite(w) || !in_G(prob, w)) break;
    if (std::abs(dw) <= 1e-13 * (1.0 + std::abs(w))) {
      if (std::abs(w - (w0 + 1.0)) >= alpha + eps)
        throw NumericError(ErrorKind::ContainmentViolated, "preimage outside D(w0 + 1, alpha + eps)");
      return w;
    }
  }
  throw NumericError(ErrorKind::NonConvergence, "psi_inverse did not converge in 30 iterations");
}

PullbackTrace psi_orbit(const Problem& prob, int j, cplx w, int n, double alpha, double eps) {
  PullbackTrace tr;
  tr.j = j;
  tr.alpha = alpha;
  tr.eps = eps;
  tr.points.push_back(w);
  tr.derivative.push_back(1.0);
  const double rate = 1.0 - alpha - eps;
  const double lam = prob.lambda_value();
  tr.drift_slack = std::numeric_limits<double>::infinity();
  tr.modulus_slack = std::numeric_limits<double>::infinity();
  tr.min_derivative = 1.0;

  cplx cur = w;
  double deriv = 1.0;
  for (int k = 1; k <= n; ++k) {
    cur = psi_inverse(prob, j, cur, alpha, eps);
    deriv /= std::abs(h_prime_direct(prob, j, cur));
    tr.points.push_back(cur);
    tr.derivative.push_back(deriv);
    tr.drift_slack = std::min(tr.drift_slack, cur.real() - w.real() - k * rate);
    tr.modulus_slack = std::min(tr.modulus_slack, std::abs(cur) / (std::max<double>(k, std::abs(w)) * rate / 4.0));
    tr.imag_drift = std::max(tr.imag_drift, std::abs(cur.imag() - w.imag()));
    tr.decay_constant =
        std::max(tr.decay_constant, std::exp(-cur.real() + lam * std::log(std::abs(cur)) + 0.5 * k * rate));
    tr.min_derivative = std::min(tr.min_derivative, deriv);
  }
  return tr;
}

}  // namespace nmeasure
