#pragma once

#include <vector>

#include "newton_measure/newton_map.hpp"

namespace nmeasure {

struct RootEntry {
  cplx z;
  double residual = 0.0;  // |g(z)| at registration
  bool multiple = false;  // g'(z) also (numerically) vanishes
};

/// Zeros of g found so far, kept sorted by (Re, Im). Two locations within
/// rel_radius * (1 + |z|) of each other are the same root; the entry with the
/// smaller residual wins so that merges do not depend on insertion order.
class RootRegistry {
 public:
  explicit RootRegistry(double rel_radius = 1e-6) : rel_radius_(rel_radius) {}

  /// Index of the registered root matching z, or -1.
  int find(cplx z) const noexcept;
  /// Registers z (or refreshes its entry) and returns its current index.
  int insert(const RootEntry& entry);
  int insert(cplx z, double residual = 0.0) { return insert(RootEntry{z, residual, false}); }
  void merge(const RootRegistry& other);

  const std::vector<RootEntry>& roots() const noexcept { return roots_; }
  size_t size() const noexcept { return roots_.size(); }
  bool empty() const noexcept { return roots_.empty(); }
  double rel_radius() const noexcept { return rel_radius_; }
  double match_radius(cplx z) const noexcept { return rel_radius_ * (1.0 + std::abs(z)); }

 private:
  double rel_radius_;
  std::vector<RootEntry> roots_;
};

struct ZeroAnchor {
  int j = 1;
  long k = 0;
  cplx v;
};

/// Predicted image q(z) of the zero of g indexed by (j, k): a point of
/// Gamma(lambda, 1/|c_j|) with the lattice imaginary part y_anchor(j, k).
/// Throws AnchorTooLow when |Im v| < 2|lambda|.
ZeroAnchor v_anchor(const Problem& prob, int j, long k);

double y_anchor(const Problem& prob, int j, long n);

struct RefineOptions {
  double tol = 1e-13;
  int max_iterations = 50;
  double max_drift = 2.0;
};

/// Damped Newton on g from guess. The step is halved while it does not
/// decrease |g e^{-q}/p|. Throws MaxIterations or DivergedFromSeed.
cplx refine_zero(const Problem& prob, cplx guess, const RefineOptions& opts = {});
cplx refine_zero(const Problem& prob, cplx guess, RootRegistry& registry, const RefineOptions& opts = {});

inline constexpr double kDefaultBasinThreshold = 10.0;

/// 1 / (3 d |z0|^{d-1}); throws BelowThreshold for |z0| < r1.
double basin_disk_radius(const Problem& prob, cplx z0, double r1 = kDefaultBasinThreshold);

/// Zeros of p q' + p' (the zeros of g'' = (p q' + p') e^q), with those where
/// g or p is numerically zero removed.
std::vector<cplx> critical_points(const Problem& prob, double tol = 1e-10);

/// Roots of p q' + p' before filtering, with multiplicity.
std::vector<cplx> critical_point_candidates(const Problem& prob);

}  // namespace nmeasure
