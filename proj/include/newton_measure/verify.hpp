#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "newton_measure/asym.hpp"
#include "newton_measure/dynamics.hpp"

namespace nmeasure {

/// Outcome of one verification suite: a verdict, named metrics for the
/// report line, free-form notes, and an optional CSV table.
struct SuiteResult {
  std::string name;
  bool pass = true;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> notes;
  std::string csv;

  void fail(std::string why) {
    pass = false;
    notes.push_back(std::move(why));
  }
  double metric(const std::string& key) const;
};

/// gamma_solve residuals, the slope bound |gamma'(y)| <= 2|mu|/|y| (by
/// central differences) and the alpha-shift band and limit, for `pairs`
/// random (mu, alpha) on a log grid of |y| up to 1e6.
SuiteResult verify_gamma(std::uint64_t seed, int pairs = 20, int grid = 48);

/// Decay scans of the Newton-map expansion and of h_j in the right zone on
/// horizontal rays |w| in [50, 5000], for every sector.
SuiteResult verify_asymptotics(const Problem& prob, int samples = 40);

/// Seeds phi_j(v_{j,k}) for |k| in [k_lo, k_hi] refined into the registry.
/// Passes when every seed gives a distinct root and the median anchor
/// distance over the top band is at most half that of the bottom band.
SuiteResult verify_zeros(const Problem& prob, RootRegistry& registry, int k_lo = 5, int k_hi = 40);

/// Samples the basin disks of the `count` largest registered roots, in the
/// z-plane and through q, and requires every orbit to converge to that root.
SuiteResult verify_basins(const Problem& prob, const RootRegistry& registry, int count = 10, int samples = 100,
                          std::uint64_t seed = 1, const OrbitOptions& opts = {});

/// Pullback orbits psi_j^n from `starts` random points of
/// H(lambda, alpha/|c_j|, nu), with nu doubled until containment holds.
SuiteResult verify_preimages(const Problem& prob, std::uint64_t seed, int starts = 50, int steps = 100,
                             double alpha = 0.8, double eps = 0.1);

}  // namespace nmeasure
