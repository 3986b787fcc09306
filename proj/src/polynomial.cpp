#include "newton_measure/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

#include "newton_measure/errors.hpp"

namespace nmeasure {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(std::initializer_list<cplx> coeffs) : coeffs_(coeffs) { trim(); }

Polynomial Polynomial::monomial(int degree, cplx coeff) {
  std::vector<cplx> c(static_cast<size_t>(degree) + 1, cplx{});
  c.back() = coeff;
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
}

cplx Polynomial::coeff(int k) const noexcept {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return {};
  return coeffs_[static_cast<size_t>(k)];
}

cplx Polynomial::operator()(cplx z) const noexcept {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<cplx> out(coeffs_.size() - 1);
  for (size_t k = 1; k < coeffs_.size(); ++k) out[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::scaled_argument(cplx s) const {
  std::vector<cplx> out(coeffs_);
  cplx power = 1.0;
  for (auto& c : out) {
    c *= power;
    power *= s;
  }
  return Polynomial(std::move(out));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> out(std::max(a.coeffs_.size(), b.coeffs_.size()), cplx{});
  for (size_t k = 0; k < a.coeffs_.size(); ++k) out[k] += a.coeffs_[k];
  for (size_t k = 0; k < b.coeffs_.size(); ++k) out[k] += b.coeffs_[k];
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> out(a.coeffs_.size() + b.coeffs_.size() - 1, cplx{});
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    for (size_t k = 0; k < b.coeffs_.size(); ++k) out[i + k] += a.coeffs_[i] * b.coeffs_[k];
  return Polynomial(std::move(out));
}

Polynomial operator*(cplx s, const Polynomial& a) {
  std::vector<cplx> out(a.coeffs_);
  for (auto& c : out) c *= s;
  return Polynomial(std::move(out));
}

ValueAndSlope eval_with_derivative(const Polynomial& poly, cplx z) noexcept {
  cplx value{};
  cplx slope{};
  const auto c = poly.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    slope = slope * z + value;
    value = value * z + *it;
  }
  return {value, slope};
}

std::vector<cplx> polynomial_roots(const Polynomial& poly) {
  const int n = poly.degree();
  if (poly.is_zero() || n < 1) throw NumericError(ErrorKind::InvalidInput, "root finding needs degree >= 1");

  std::vector<cplx> roots;
  const cplx lead = poly.leading();
  if (n == 1) {
    roots.push_back(-poly.coeff(0) / lead);
  } else {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -poly.coeff(i) / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    const auto& ev = solver.eigenvalues();
    for (int i = 0; i < n; ++i) roots.push_back(ev(i));

    for (auto& r : roots) {
      const auto [value, slope] = eval_with_derivative(poly, r);
      if (std::abs(slope) > 0.0) {
        const cplx polished = r - value / slope;
        if (std::abs(poly(polished)) <= std::abs(value)) r = polished;
      }
    }
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

}  // namespace nmeasure
