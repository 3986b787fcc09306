#include "newton_measure/problem.hpp"

#include <cmath>
#include <numeric>

#include "newton_measure/errors.hpp"
#include "newton_measure/sectors.hpp"

namespace nmeasure {

namespace {

cplx snap(cplx z) {
  const double tiny = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(z);
  return {std::abs(z.real()) <= tiny ? 0.0 : z.real(), std::abs(z.imag()) <= tiny ? 0.0 : z.imag()};
}

Polynomial with_leading(const Polynomial& poly, cplx lead) {
  std::vector<cplx> c(poly.coeffs().begin(), poly.coeffs().end());
  c.back() = lead;
  return Polynomial(std::move(c));
}

}  // namespace

Rational Rational::reduced(long num, long den) {
  if (den == 0) throw NumericError(ErrorKind::InvalidInput, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

bool Problem::has_sector_constants() const noexcept {
  if (static_cast<int>(cj.size()) != d) return false;
  for (const auto& v : cj)
    if (!v) return false;
  return true;
}

Problem make_problem(Polynomial p, Polynomial q, cplx c) {
  if (q.degree() < 1) throw NumericError(ErrorKind::InvalidInput, "q must be non-constant");
  if (p.is_zero()) throw NumericError(ErrorKind::InvalidInput, "p must not vanish identically");

  Problem prob;
  prob.d = q.degree();
  prob.m = p.degree();
  prob.lambda = Rational::reduced(prob.d - 1 - prob.m, prob.d);
  prob.c = c;
  prob.dp = p.derivative();
  prob.dq = q.derivative();
  prob.d2q = prob.dq.derivative();
  prob.p = std::move(p);
  prob.q = std::move(q);
  prob.cj.assign(static_cast<size_t>(prob.d), std::nullopt);

  // The sampled |q| bound can only hold when |lead q| lies in [2^-d, 2^d];
  // un-normalized problems outside that range carry no sector structure.
  const double lead = std::abs(prob.q.leading());
  const double slack = std::ldexp(1.0, prob.d);
  prob.R = (lead >= 1.0 / slack && lead <= slack) ? choose_R(prob.q) : 0.0;
  return prob;
}

std::pair<Problem, ConformalMapRecord> normalize(const Polynomial& p_raw, const Polynomial& q_raw,
                                                 cplx c_raw) {
  if (q_raw.degree() < 1) throw NumericError(ErrorKind::InvalidInput, "q must be non-constant");
  if (p_raw.is_zero()) throw NumericError(ErrorKind::InvalidInput, "p must not vanish identically");

  const int d = q_raw.degree();
  const int m = p_raw.degree();
  ConformalMapRecord rec;
  rec.alpha = snap(std::pow(q_raw.leading(), 1.0 / d));
  rec.b = snap(static_cast<double>(d) * std::pow(rec.alpha, m + 1) / p_raw.leading());

  // g_new(z) = b g_raw(z / alpha)  =>  p_new(t) = (b/alpha) p_raw(t/alpha), q_new(t) = q_raw(t/alpha).
  const cplx inv_alpha = 1.0 / rec.alpha;
  Polynomial q_new = with_leading(q_raw.scaled_argument(inv_alpha), 1.0);
  Polynomial p_new = with_leading((rec.b * inv_alpha) * p_raw.scaled_argument(inv_alpha), static_cast<double>(d));
  return {make_problem(std::move(p_new), std::move(q_new), rec.b * c_raw), rec};
}

}  // namespace nmeasure
