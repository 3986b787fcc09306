#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "newton_measure/polynomial.hpp"

namespace nmeasure {

/// Exponent ceiling for e^{Re q}; beyond it direct evaluation refuses and the
/// caller must switch to the asymptotic forms.
inline constexpr double kOverflowGuard = 700.0;

struct Rational {
  long num = 0;
  long den = 1;

  static Rational reduced(long num, long den);
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// The triple (p, q, c) defining g(z) = int_0^z p(t) e^{q(t)} dt + c together
/// with its derived constants. A normalized problem has q monic and p with
/// leading coefficient d = deg q.
struct Problem {
  Polynomial p;
  Polynomial q;
  cplx c{};
  int d = 0;
  int m = 0;
  Rational lambda;
  double R = 1.0;
  /// Sector constants c_1..c_d (index j-1), filled lazily by estimate_cj.
  std::vector<std::optional<cplx>> cj;

  // Cached derivatives of p and q; populated by the factories below.
  Polynomial dp;
  Polynomial dq;
  Polynomial d2q;

  double lambda_value() const noexcept { return lambda.value(); }
  bool has_sector_constants() const noexcept;
};

struct ConformalMapRecord {
  cplx alpha{1.0, 0.0};
  cplx b{1.0, 0.0};
};

/// Builds a problem from (p, q, c) verbatim, without normalization. Rejects
/// constant q or p identically zero.
Problem make_problem(Polynomial p, Polynomial q, cplx c);

/// Conjugates (p_raw, q_raw, c_raw) to the normalized form: z -> alpha z with
/// alpha the principal d-th root of lead(q_raw), and g -> b g so that p gains
/// leading coefficient d.
std::pair<Problem, ConformalMapRecord> normalize(const Polynomial& p_raw, const Polynomial& q_raw,
                                                 cplx c_raw);

}  // namespace nmeasure
