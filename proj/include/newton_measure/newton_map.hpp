#pragma once

#include <functional>
#include <span>

#include "newton_measure/problem.hpp"

namespace nmeasure {

inline constexpr double kDefaultTol = 1e-12;

/// Integral of p(t) e^{q(t) - shift} over the straight segment [a, b].
/// The shift keeps large-but-representable integrands away from overflow;
/// the true integral is value * e^{shift}.
struct SegmentIntegral {
  cplx value{};
  double error = 0.0;
  double shift = 0.0;
  int intervals = 0;
};

struct QuadratureResult {
  cplx value{};
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive 7/15-point Gauss-Kronrod rule for a complex integrand on
/// [a, b], starting from `pieces` equal panels and bisecting the panel with
/// the largest error until error <= tol * (scale + |value + offset|). Panels
/// whose estimate is already at the roundoff level are not split further.
/// Throws ToleranceNotMet when the depth (40) or panel cap is exhausted.
QuadratureResult gk_adaptive(const std::function<cplx(double)>& f, double a, double b, double tol, cplx offset,
                             double scale, int pieces = 1);

/// Same rule started from the panels between consecutive breakpoints
/// (strictly increasing, at least two).
QuadratureResult gk_adaptive(const std::function<cplx(double)>& f, std::span<const double> breaks, double tol,
                             cplx offset, double scale);

/// Adaptive 7/15-point Gauss-Kronrod quadrature of p e^{q - shift} along
/// [a, b]. Subdivision stops once the error estimate is at most
/// tol * (scale + |value + offset|); offset and scale are in shifted units and
/// let callers express "relative to the final g" before g is known.
SegmentIntegral integrate_segment(const Problem& prob, cplx a, cplx b, double tol, double shift,
                                  cplx offset, double scale);

/// Largest Re q(t) found on a dense sample of the segment [a, b].
double max_re_q_on_segment(const Problem& prob, cplx a, cplx b);

/// g(z) by quadrature along [0, z]. Throws OverflowRegion when Re q exceeds
/// the overflow guard on the segment and ToleranceNotMet when subdivision
/// cannot reach tol * (1 + |g|).
cplx eval_g(const Problem& prob, cplx z, double tol = kDefaultTol);

/// g(z) integrated along the polyline 0 -> vertices[0] -> ... -> vertices.back().
cplx eval_g_path(const Problem& prob, std::span<const cplx> vertices, double tol = kDefaultTol);

/// True when |p(z)| is below 1e-300 (1+|z|)^m.
bool is_pole(const Problem& prob, cplx z) noexcept;

/// Newton correction g(z) e^{-q(z)} / p(z), so that f(z) = z - correction.
cplx newton_correction(const Problem& prob, cplx z, double tol = kDefaultTol);

/// Newton map f(z) = z - g(z)/g'(z) with g' = p e^{q}.
cplx eval_f(const Problem& prob, cplx z, double tol = kDefaultTol);

/// f'(z) = g g'' / g'^2, computed from the Newton correction.
cplx eval_f_prime(const Problem& prob, cplx z, double tol = kDefaultTol);

}  // namespace nmeasure
