#pragma once

#include <optional>
#include <string>
#include <vector>

#include "newton_measure/newton_map.hpp"
#include "newton_measure/sectors.hpp"

namespace nmeasure {

/// Below this modulus a sector constant is treated as vanishing: f then has a
/// Baker domain and the zone machinery does not apply.
inline constexpr double kSectorConstantFloor = 1e-9;

/// g(phi_j(-X)) with X doubled from X0 until two successive values agree to
/// tol * (1 + |value|). Throws NonConvergence past X = 600.
cplx estimate_cj(const Problem& prob, int j, double X0 = 0.0, double tol = kDefaultTol);

/// Fills every empty c_j slot. Throws SectorConstantVanishes when some
/// |c_j| < kSectorConstantFloor.
void ensure_sector_constants(Problem& prob, double tol = kDefaultTol);

cplx sector_constant(const Problem& prob, int j);

/// phi_j(w)^{d lambda} via the sector-continuous logarithm.
cplx sector_power(const Problem& prob, int j, cplx z);

/// Closed part of the g asymptotics in the w-plane:
/// c_j + p/q' (1 + lambda/w) e^w at z = phi_j(w).
cplx g_asym(const Problem& prob, int j, cplx w);

/// True when the leftward horizontal ray from w stays clear of D(0, R) with
/// room to spare, so the sector path below is usable.
bool sector_path_available(const Problem& prob, cplx w) noexcept;

/// I(w) = int_{-inf}^0 (p/q')(phi_j(w+u)) e^u du, so that
/// g(z) = c_j + e^{q(z)} I(q(z)) for z in S_j. The integrand does not
/// oscillate, which makes this much cheaper than the straight segment from 0
/// once |Im q(z)| is large.
cplx sector_path_integral(const Problem& prob, int j, cplx z, double tol = kDefaultTol);

/// Exact Newton correction g e^{-q}/p = (I + c_j e^{-q})/p via the sector
/// path. Throws NumericLoss when c_j e^{-q}/p is not representable.
cplx sector_path_correction(const Problem& prob, int j, cplx z, double tol = kDefaultTol);

/// Exact Newton correction g e^{-q}/p by quadrature: along the sector path
/// once |q(z)| is large and the leftward ray is clear, along [0, z]
/// otherwise. Both are the same integral over different contours.
cplx exact_correction(const Problem& prob, cplx z, double tol = kDefaultTol);

/// g(z) via the sector path. Throws OverflowRegion when e^{q} overflows.
cplx eval_g_sector(const Problem& prob, int j, cplx z, double tol = kDefaultTol);

/// Newton map with the O(|z|^{-d-1}) term dropped:
/// z - (1/q')(1 + lambda/z^d) - c_j e^{-q}/p.
cplx f_asym(const Problem& prob, int j, cplx z);

/// Correction z - f_asym(z); the c_j term is formed in log space so it only
/// overflows when the result itself does.
cplx f_asym_correction(const Problem& prob, int j, cplx z);

/// h_j = q o f o phi_j, evaluated directly.
cplx h_direct(const Problem& prob, int j, cplx w, double tol = kDefaultTol);

/// h_j'(w) = q'(f(z)) f'(z) / q'(z) with z = phi_j(w).
cplx h_prime_direct(const Problem& prob, int j, cplx w, double tol = kDefaultTol);

/// w - 1 + ((2m+1-d)/(2d))/w - c_j e^{-w} phi_j(w)^{d lambda}.
cplx h_asym_right(const Problem& prob, int j, cplx w);

/// 1 + c_j e^{-w} phi_j(w)^{d lambda}.
cplx hprime_asym(const Problem& prob, int j, cplx w);

/// Left-zone form (-c_j/d)^d e^{-dw} w^{-m}, held as its logarithm.
struct LogComplex {
  cplx log;
  std::optional<cplx> value;  // set when exp(log) is representable
};
LogComplex h_asym_left(const Problem& prob, int j, cplx w);

enum class AsymFormula { GSector, FNewton, HRight, HPrime, HMiddle, HLeft };

const char* to_string(AsymFormula formula);

/// Straight ray w(t) = origin + t * direction, sampled at log-spaced t.
struct RaySpec {
  cplx origin{};
  cplx direction{0.0, 1.0};
  double t_min = 30.0;
  double t_max = 5000.0;

  std::string describe() const;
};

struct AsymptoticReport {
  AsymFormula formula = AsymFormula::HRight;
  int j = 1;
  std::string ray;
  std::vector<std::pair<double, double>> samples;  // (|w|, error), sorted by |w|
  double exponent = 0.0;                           // +inf when every error is zero
  double decreasing_fraction = 0.0;

  bool monotone_majority() const noexcept { return decreasing_fraction >= 0.8; }
};

/// Compares a closed form against direct evaluation along a ray. Errors are
/// relative to the natural size of each formula. Throws RegionViolation when
/// a sample leaves the formula's region.
AsymptoticReport error_decay_scan(const Problem& prob, int j, AsymFormula formula, const RaySpec& ray, int n,
                                  double tol = 1e-13);

/// Least-squares decay exponent -slope of log(err) against log|w|.
double fit_decay_exponent(const std::vector<std::pair<double, double>>& samples);

}  // namespace nmeasure
