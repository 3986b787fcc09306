#pragma once

#include <complex>
#include <initializer_list>
#include <span>
#include <vector>

namespace nmeasure {

using cplx = std::complex<double>;

/// Dense polynomial with complex coefficients stored in ascending degree.
/// Trailing zero coefficients are trimmed on construction, so the leading
/// coefficient is nonzero unless the polynomial is identically zero.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs);
  Polynomial(std::initializer_list<cplx> coeffs);

  static Polynomial constant(cplx value) { return Polynomial({value}); }
  static Polynomial monomial(int degree, cplx coeff = 1.0);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree of the polynomial; the zero polynomial reports 0.
  int degree() const noexcept { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }
  cplx leading() const noexcept { return coeffs_.empty() ? cplx{} : coeffs_.back(); }
  cplx coeff(int k) const noexcept;
  std::span<const cplx> coeffs() const noexcept { return coeffs_; }

  cplx operator()(cplx z) const noexcept;
  Polynomial derivative() const;
  /// Coefficients of t -> p(s*t).
  Polynomial scaled_argument(cplx s) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(cplx s, const Polynomial& a);
  friend bool operator==(const Polynomial& a, const Polynomial& b) = default;

 private:
  void trim();
  std::vector<cplx> coeffs_;
};

/// Horner evaluation of `poly` at `z`.
inline cplx poly_eval(const Polynomial& poly, cplx z) noexcept { return poly(z); }

/// Value and first derivative in a single Horner pass.
struct ValueAndSlope {
  cplx value;
  cplx slope;
};
ValueAndSlope eval_with_derivative(const Polynomial& poly, cplx z) noexcept;

/// All roots of a polynomial of degree >= 1, via companion-matrix eigenvalues
/// followed by one Newton polish per root. Order is canonical (Re, then Im).
std::vector<cplx> polynomial_roots(const Polynomial& poly);

}  // namespace nmeasure
