#pragma once

#include <cstdint>

#include "newton_measure/problem.hpp"

namespace nmeasure {

/// Parameters of the region H(mu, alpha, nu) = {Re w >= mu log|w| - log alpha,
/// |Im w| >= nu} and of its boundary curve Gamma(mu, alpha).
struct RegionSpec {
  double mu = 0.0;
  double alpha = 1.0;
  double nu = 0.0;

  /// Validates alpha > 0 and nu >= 2|mu|.
  static RegionSpec make(double mu, double alpha, double nu);
};

enum class Zone { Right, Middle, Left, NearAxis };

const char* to_string(Zone zone);

/// Band constants of the w-plane partition. Defaults follow
/// ZoneParams::defaults_for; all are overridable from configuration.
struct ZoneParams {
  double alpha1 = 0.05;
  double beta1 = 20.0;
  double beta2 = 20.0;
  double nu = 20.0;

  static ZoneParams defaults_for(const Problem& prob);
};

/// Smallest R in {1, 2, 4, ...} such that the critical values of q lie in
/// D(0, R) and 2^-d |z|^d <= |q(z)| <= 2^d |z|^d holds on a 720-point sample
/// of ten circles between (1/2) R^{1/d} and 2 R^{1/d}.
double choose_R(const Polynomial& q);
inline double choose_R(const Problem& prob) { return choose_R(prob.q); }

/// Re-runs the sampled two-sided bound for a given R.
bool check_q_bound(const Polynomial& q, double R);

/// w in G = C \ (closed D(0,R) u [0, inf)).
bool in_G(const Problem& prob, cplx w) noexcept;

/// Branch phi_j of q^{-1} mapping G onto the sector S_j (j = 1..d).
cplx phi(const Problem& prob, int j, cplx w);

/// Derivative of phi_j at w, i.e. 1 / q'(phi_j(w)).
cplx phi_prime(const Problem& prob, int j, cplx w);

/// Representative of arg z closest to the centre (2j-1) pi / d of sector j.
double sector_arg(const Problem& prob, int j, cplx z) noexcept;

/// log|z| + i sector_arg(z): the logarithm that is continuous on S_j.
cplx sector_log(const Problem& prob, int j, cplx z) noexcept;

/// Index of the sector containing z (|q(z)| > R required).
int sector_of(const Problem& prob, cplx z);

/// x_y solving x = mu log|x + iy| - log alpha, for |y| >= 2|mu|.
double gamma_solve(double mu, double alpha, double y);
inline double gamma_solve(const RegionSpec& spec, double y) { return gamma_solve(spec.mu, spec.alpha, y); }

bool in_H(cplx w, const RegionSpec& spec) noexcept;

/// Re w - mu log|w| + log alpha; zero exactly on Gamma(mu, alpha).
double on_Gamma_residual(cplx w, const RegionSpec& spec);

/// alpha |w|^{-mu}: equals |e^{-w}| on Gamma, bounds it from above inside H.
double gamma_magnitude(cplx w, const RegionSpec& spec) noexcept;

/// Classification of w into the three bands of the w-plane (plus the strip
/// around the real axis). Needs c_j on the problem.
Zone zone_classify(const Problem& prob, int j, cplx w, const ZoneParams& params);

/// Smallest constant c such that every sampled phi_j output satisfies
/// 2(j-1)pi/d - c/|z| < arg z < 2j pi/d + c/|z|, over `samples` random w in G
/// with |w| in [2R, 1e6].
double calibrate_sector_constant(const Problem& prob, int samples, std::uint64_t seed);

}  // namespace nmeasure
