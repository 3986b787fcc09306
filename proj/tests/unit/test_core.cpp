#include <random>

#include "common.hpp"
#include "doctest.h"
#include "newton_measure/errors.hpp"
#include "newton_measure/newton_map.hpp"

using namespace nmeasure;
using testing::rel_err;

namespace {

// Maclaurin series of int_0^x e^{-t^2} dt.
double erf_integral_series(double x, int terms = 20) {
  double sum = 0.0, fact = 1.0;
  for (int n = 0; n < terms; ++n) {
    if (n > 0) fact *= n;
    sum += ((n % 2) ? -1.0 : 1.0) * std::pow(x, 2 * n + 1) / (fact * (2 * n + 1));
  }
  return sum;
}

}  // namespace

TEST_CASE("poly_eval examples") {
  const Polynomial a{1.0, 0.0, 1.0};
  CHECK(std::abs(poly_eval(a, {0.0, 1.0})) == 0.0);
  CHECK(poly_eval(a, 0.0) == cplx(1.0));
  CHECK(poly_eval(Polynomial{0.0, -1.0, 0.0, 2.0}, 2.0) == cplx(14.0));
}

TEST_CASE("formal derivative matches central differences") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<cplx> coeffs;
    for (int k = 0; k <= 1 + trial % 5; ++k) coeffs.emplace_back(n(rng), n(rng));
    const Polynomial p(coeffs);
    const Polynomial dp = p.derivative();
    for (int i = 0; i < 100; ++i) {
      const cplx z = testing::random_in_disk(rng, 0.0, 2.0);
      const double h = 1e-5;
      const cplx fd = (p(z + h) - p(z - h)) / (2.0 * h);
      CHECK(std::abs(fd - dp(z)) <= 1e-6 * std::max(1.0, std::abs(dp(z))));
      const auto vs = eval_with_derivative(p, z);
      CHECK(std::abs(vs.slope - dp(z)) <= 1e-12 * std::max(1.0, std::abs(dp(z))));
    }
  }
}

TEST_CASE("polynomial_roots finds the roots of a product") {
  const Polynomial p = Polynomial{-1.0, 1.0} * Polynomial{cplx(0, -2), 1.0} * Polynomial{3.0, 1.0};
  const auto roots = polynomial_roots(p);
  REQUIRE(roots.size() == 3);
  CHECK(std::abs(roots[0] - cplx(-3.0)) < 1e-12);
  CHECK(std::abs(roots[1] - cplx(0.0, 2.0)) < 1e-12);
  CHECK(std::abs(roots[2] - cplx(1.0)) < 1e-12);
}

TEST_CASE("normalize the erf problem") {
  const auto [prob, rec] = normalize(Polynomial{1.0}, Polynomial{0.0, 0.0, -1.0}, 0.3);
  CHECK(prob.q == Polynomial({0.0, 0.0, 1.0}));
  CHECK(prob.p == Polynomial({2.0}));
  CHECK(std::abs(prob.c - cplx(0.0, 0.6)) < 1e-15);
  CHECK(prob.d == 2);
  CHECK(prob.m == 0);
  CHECK(prob.lambda == Rational{1, 2});
  CHECK(rec.alpha == cplx(0.0, 1.0));
  CHECK(rec.b == cplx(0.0, 2.0));
}

TEST_CASE("normalize is the identity on normalized input") {
  const Polynomial p{0.0, 3.0};
  const Polynomial q{1.0, 0.5, 0.0, 1.0};
  const auto [prob, rec] = normalize(p, q, cplx(0.2, -0.1));
  CHECK(rec.alpha == cplx(1.0));
  CHECK(rec.b == cplx(1.0));
  CHECK(prob.p == p);
  CHECK(prob.q == q);
  CHECK(prob.c == cplx(0.2, -0.1));
}

TEST_CASE("normalize with d = 1, m = 0") {
  const auto [prob, rec] = normalize(Polynomial{1.0}, Polynomial{0.0, 1.0}, 1.0);
  CHECK(prob.d == 1);
  CHECK(prob.p.leading() == cplx(1.0));
  CHECK(rec.b == cplx(1.0));
  CHECK(prob.lambda == Rational{0, 1});
}

TEST_CASE("make_problem rejects degenerate input") {
  CHECK_THROWS_AS(make_problem(Polynomial{1.0}, Polynomial{2.0}, 0.0), NumericError);
  CHECK_THROWS_AS(make_problem(Polynomial{}, Polynomial{0.0, 1.0}, 0.0), NumericError);
}

TEST_CASE("eval_g oracles") {
  const Problem raw = make_problem(Polynomial{1.0}, Polynomial{0.0, 0.0, -1.0}, 0.0);
  const double oracle = erf_integral_series(1.0);
  CHECK(std::abs(oracle - 0.746824132812427) < 1e-14);
  CHECK(std::abs(eval_g(raw, 1.0) - oracle) < 1e-12);

  const Problem shifted = make_problem(Polynomial{1.0}, Polynomial{0.0, 0.0, -1.0}, cplx(0.4, -2.0));
  CHECK(eval_g(shifted, 0.0) == cplx(0.4, -2.0));

  const Problem exact = make_problem(Polynomial{0.0, 2.0}, Polynomial{0.0, 0.0, 1.0}, 0.0);
  CHECK(std::abs(eval_g(exact, 1.0) - (std::exp(1.0) - 1.0)) < 1e-12);
}

TEST_CASE("eval_g is path independent") {
  const Problem prob = testing::erf_problem(0.3, false);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20; ++i) {
    const cplx z = testing::random_in_disk(rng, 0.0, 4.0);
    const cplx detour[] = {z / 2.0 + cplx(0.0, 1.0), z};
    const cplx straight = eval_g(prob, z);
    CHECK(std::abs(eval_g_path(prob, detour) - straight) <= 1e-10 * (1.0 + std::abs(straight)));
  }
}

TEST_CASE("eval_f oracles") {
  const Problem raw = make_problem(Polynomial{1.0}, Polynomial{0.0, 0.0, -1.0}, 0.0);
  const cplx f1 = eval_f(raw, 1.0);
  CHECK(std::abs(f1 - (1.0 - erf_integral_series(1.0) * std::exp(1.0))) < 1e-11);
  CHECK(std::abs(f1 - cplx(-1.0300785)) < 1e-7);
  CHECK(std::abs(eval_f(raw, 0.0)) < 1e-15);

  // p vanishes at 0 while g(0) = c does not.
  const Problem pole = make_problem(Polynomial{0.0, 1.0}, Polynomial{0.0, 1.0}, 1.0);
  CHECK_THROWS_AS(eval_f(pole, 0.0), NumericError);
  try {
    (void)eval_f(pole, 0.0);
  } catch (const NumericError& e) {
    CHECK(e.kind() == ErrorKind::PoleHit);
  }
}

TEST_CASE("Newton map conjugation under normalization") {
  const Polynomial p_raw{1.0, 0.5};
  const Polynomial q_raw{0.0, 0.3, -2.0};
  const cplx c_raw(0.3, 0.1);
  const Problem raw = make_problem(p_raw, q_raw, c_raw);
  const auto [norm, rec] = normalize(p_raw, q_raw, c_raw);
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const cplx z = testing::random_in_disk(rng, 0.0, 3.0);
    if (std::abs(p_raw(z)) < 1e-3) continue;
    const cplx lhs = rec.alpha * eval_f(raw, z);
    const cplx rhs = eval_f(norm, rec.alpha * z);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("eval_f agrees with the logarithmic derivative of eval_g") {
  const Problem prob = testing::erf_problem(0.3, false);
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int i = 0; i < 40; ++i) {
    const cplx z = testing::random_in_disk(rng, 0.0, 3.0);
    const cplx g = eval_g(prob, z);
    if (std::abs(g) < 1e-2) continue;
    const double h = 1e-5;
    const cplx dg = (eval_g(prob, z + h) - eval_g(prob, z - h)) / (2.0 * h);
    const cplx fd = z - g / dg;
    CHECK(std::abs(eval_f(prob, z) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("eval_f_prime vanishes at a simple root") {
  const Problem prob = testing::erf_problem(0.0, false);
  CHECK(std::abs(eval_f_prime(prob, 0.0)) < 1e-12);
}

TEST_CASE("eval_g refuses past the overflow guard") {
  const Problem prob = testing::erf_problem(0.3, false);
  CHECK_THROWS_AS(eval_g(prob, 40.0), NumericError);
}
