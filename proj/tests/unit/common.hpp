#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "newton_measure/asym.hpp"
#include "newton_measure/problem.hpp"

namespace testing {

using nmeasure::cplx;
using nmeasure::Polynomial;
using nmeasure::Problem;

inline const double kHalfSqrtPi = 0.5 * std::sqrt(std::numbers::pi);

// g = int_0^z e^{-t^2} dt + c in its normalized form.
inline Problem erf_problem(double c, bool with_constants = true) {
  auto [prob, rec] = nmeasure::normalize(Polynomial{1.0}, Polynomial{0.0, 0.0, -1.0}, c);
  if (with_constants) nmeasure::ensure_sector_constants(prob);
  return prob;
}

inline cplx random_in_disk(std::mt19937_64& rng, cplx center, double r) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double rho = r * std::sqrt(u(rng));
  const double t = 2.0 * std::numbers::pi * u(rng);
  return center + std::polar(rho, t);
}

inline double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace testing
