#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "newton_measure/roots.hpp"
#include "newton_measure/sectors.hpp"

namespace nmeasure {

/// Which evaluation produced a Newton step.
enum class Route { Direct, AsymRight, AsymLeft };

struct StepResult {
  cplx next;
  cplx correction;  // z - next
  Route route = Route::Direct;
};

/// One Newton step routed by Re q(z): direct quadrature when
/// |Re q| <= kOverflowGuard, the closed-form asymptotics otherwise. Far left
/// the c_j term is formed in log space. Throws PoleHit, and NumericLoss when
/// the next point is not representable.
StepResult step_detail(const Problem& prob, cplx z, double tol = kDefaultTol);
cplx step(const Problem& prob, cplx z, double tol = kDefaultTol);

/// Same as step_detail but forcing the asymptotic route (for overlap checks).
StepResult step_asymptotic(const Problem& prob, cplx z);

enum class Verdict { Converged, Cycle, Escaped, PoleHit, Unresolved };

const char* to_string(Verdict verdict);

struct OrbitOptions {
  int budget = 200;
  double conv_radius = 1e-8;
  double residual_threshold = 1e-10;
  double cycle_tol = 1e-9;
  int period_cap = 64;
  double escape_radius = 1e12;
  int escape_streak = 10;
  double tol = kDefaultTol;
};

struct OrbitResult {
  Verdict verdict = Verdict::Unresolved;
  /// Step count at which the verdict was decided. For Unresolved it equals
  /// the budget, so a run at budget B also answers every budget b < B: the
  /// verdict at b is this one if iterations <= b and Unresolved otherwise.
  int iterations = 0;
  cplx final_point{};
  cplx root{};          // Converged: the limit
  int root_id = -1;     // index into the registry used for resolution
  int period = 0;       // Cycle
  cplx representative{};
  cplx multiplier{};    // Cycle: product of f' along the cycle
  bool attracting = false;
  bool numeric_loss = false;  // Unresolved because a step was unrepresentable

  bool fatou() const noexcept {
    return verdict == Verdict::Converged || (verdict == Verdict::Cycle && attracting);
  }
  /// Verdict as it would have been reported with a smaller budget.
  OrbitResult truncated(int budget) const;
};

/// Iterates the routed Newton step from z. Converged once the Newton
/// correction falls below residual_threshold * (1 + |z|); Brent cycle
/// detection at absolute tolerance cycle_tol; Escaped after escape_streak
/// steps of growth beyond escape_radius with Re q decreasing.
OrbitResult iterate_orbit(const Problem& prob, cplx z, const OrbitOptions& opts = {});

/// As above, then matches or registers the limit in registry and sets root_id.
OrbitResult iterate_orbit(const Problem& prob, cplx z, RootRegistry& registry, const OrbitOptions& opts = {});

/// Re-derives root ids of converged results against a (merged) registry.
void resolve_root_ids(std::vector<OrbitResult>& results, const RootRegistry& registry);

/// Classifies every point in parallel tiles. Each tile keeps its own root
/// registry; the tiles are merged in index order afterwards and ids resolved
/// against the merge, so the output does not depend on scheduling.
std::vector<OrbitResult> classify_points(const Problem& prob, const std::vector<cplx>& points,
                                         const OrbitOptions& opts, RootRegistry& registry, int threads = 0);

/// Same over a generator of n points.
std::vector<OrbitResult> classify_generated(const Problem& prob, size_t n, const std::function<cplx(size_t)>& point,
                                            const OrbitOptions& opts, RootRegistry& registry, int threads = 0);

/// The unique w in D(w0 + 1, alpha + eps) with h_j(w) = w0, by Newton from
/// w0 + 1. Throws ContainmentViolated when the solution lands outside the disk
/// and NonConvergence after 30 iterations.
cplx psi_inverse(const Problem& prob, int j, cplx w0, double alpha, double eps);

struct PullbackTrace {
  int j = 1;
  double alpha = 0.0;
  double eps = 0.0;
  std::vector<cplx> points;        // w, psi(w), psi^2(w), ...
  std::vector<double> derivative;  // |(psi^n)'(w)| from the chain product
  double drift_slack = 0.0;        // min_n Re psi^n - Re w - n(1 - alpha - eps)     (i)
  double modulus_slack = 0.0;      // min_n |psi^n| / (max(n,|w|)(1-alpha-eps)/4)    (ii)
  double imag_drift = 0.0;         // max_n |Im psi^n - Im w|                         (iii)
  double decay_constant = 0.0;     // max_n e^{-Re psi^n}|psi^n|^lambda e^{n(1-a-e)/2} (iv)
  double min_derivative = 0.0;     // min_n |(psi^n)'(w)|
};

PullbackTrace psi_orbit(const Problem& prob, int j, cplx w, int n, double alpha, double eps);

}  // namespace nmeasure
