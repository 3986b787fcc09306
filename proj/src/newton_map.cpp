#include "newton_measure/newton_map.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "newton_measure/errors.hpp"

namespace nmeasure {

namespace {

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                       0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

constexpr int kMaxDepth = 40;
constexpr int kMaxIntervals = 4000;
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Piece {
  double u0, u1;
  cplx value;
  double error;
  int depth;
  bool settled;  // estimate already at the roundoff level
};

struct ByError {
  bool operator()(const Piece& a, const Piece& b) const { return a.error < b.error; }
};

// |z|, skipping hypot's scaling unless the plain sum of squares misbehaves.
inline double mag(cplx z) {
  const double n = z.real() * z.real() + z.imag() * z.imag();
  return n > 1e-290 && n < 1e290 ? std::sqrt(n) : std::abs(z);
}

Piece gk15(const std::function<cplx(double)>& f, double u0, double u1, int depth) {
  const double centre = 0.5 * (u0 + u1);
  const double half = 0.5 * (u1 - u0);
  std::array<cplx, 15> fv;
  fv[7] = f(centre);
  for (int k = 0; k < 7; ++k) {
    const double dx = half * kXgk[static_cast<size_t>(k)];
    fv[static_cast<size_t>(k)] = f(centre - dx);
    fv[static_cast<size_t>(14 - k)] = f(centre + dx);
  }
  cplx resk = kWgk[7] * fv[7];
  cplx resg = kWg[3] * fv[7];
  double resabs = kWgk[7] * mag(fv[7]);
  for (int k = 0; k < 7; ++k) {
    const cplx pair = fv[static_cast<size_t>(k)] + fv[static_cast<size_t>(14 - k)];
    resk += kWgk[static_cast<size_t>(k)] * pair;
    resabs += kWgk[static_cast<size_t>(k)] *
              (mag(fv[static_cast<size_t>(k)]) + mag(fv[static_cast<size_t>(14 - k)]));
    if (k % 2 == 1) resg += kWg[static_cast<size_t>(k / 2)] * pair;
  }
  const cplx mean = 0.5 * resk;
  double resasc = kWgk[7] * mag(fv[7] - mean);
  for (int k = 0; k < 7; ++k)
    resasc += kWgk[static_cast<size_t>(k)] *
              (mag(fv[static_cast<size_t>(k)] - mean) + mag(fv[static_cast<size_t>(14 - k)] - mean));

  resk *= half;
  resabs *= half;
  resasc *= half;
  double err = mag(resk - resg * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const bool settled = err <= 50.0 * kEps * resabs;
  return {u0, u1, resk, err, depth, settled};
}

// Coefficients of s -> q(a + s*delta).
std::vector<double> re_q_along(const Polynomial& q, cplx a, cplx delta) {
  std::vector<cplx> c(q.coeffs().begin(), q.coeffs().end());
  const size_t n = c.size();
  // Taylor shift to a by repeated synthetic division.
  for (size_t k = 0; k + 1 < n; ++k)
    for (size_t i = n - 1; i > k; --i) c[i - 1] += a * c[i];
  std::vector<double> re(n);
  cplx power = 1.0;
  for (size_t k = 0; k < n; ++k) {
    re[k] = (c[k] * power).real();
    power *= delta;
  }
  return re;
}

double eval_real(const std::vector<double>& c, double u) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * u + *it;
  return acc;
}

int initial_pieces(const Problem& prob, cplx a, cplx b) {
  constexpr int kSamples = 65;
  double variation = 0.0;
  double prev = prob.q(a).imag();
  for (int k = 1; k < kSamples; ++k) {
    const double cur = prob.q(a + (b - a) * (static_cast<double>(k) / (kSamples - 1))).imag();
    variation += std::abs(cur - prev);
    prev = cur;
  }
  return std::clamp(static_cast<int>(std::ceil(variation / (2.0 * M_PI))), 1, kMaxIntervals / 4);
}

}  // namespace

double max_re_q_on_segment(const Problem& prob, cplx a, cplx b) {
  const auto re = re_q_along(prob.q, a, b - a);
  double best = std::max(re.empty() ? 0.0 : eval_real(re, 0.0), eval_real(re, 1.0));
  if (re.size() <= 2) return best;
  // Interior maxima sit at real roots of the derivative.
  std::vector<cplx> dre(re.size() - 1);
  for (size_t k = 1; k < re.size(); ++k) dre[k - 1] = static_cast<double>(k) * re[k];
  const Polynomial slope{std::move(dre)};
  if (slope.degree() < 1) return best;
  for (const cplx r : polynomial_roots(slope)) {
    if (std::abs(r.imag()) > 1e-8 * (1.0 + std::abs(r))) continue;
    const double u = r.real();
    if (u > 0.0 && u < 1.0) best = std::max(best, eval_real(re, u));
  }
  return best;
}

QuadratureResult gk_adaptive(const std::function<cplx(double)>& f, double a, double b, double tol, cplx offset,
                             double scale, int pieces) {
  if (a == b) {
    if (!(tol > 0.0)) throw NumericError(ErrorKind::InvalidInput, "tolerance must be positive");
    return {};
  }
  pieces = std::clamp(pieces, 1, kMaxIntervals / 4);
  std::vector<double> breaks(static_cast<size_t>(pieces) + 1);
  const double width = (b - a) / pieces;
  for (int k = 0; k < pieces; ++k) breaks[static_cast<size_t>(k)] = a + k * width;
  breaks.back() = b;
  return gk_adaptive(f, breaks, tol, offset, scale);
}

QuadratureResult gk_adaptive(const std::function<cplx(double)>& f, std::span<const double> breaks, double tol,
                             cplx offset, double scale) {
  if (!(tol > 0.0)) throw NumericError(ErrorKind::InvalidInput, "tolerance must be positive");
  if (breaks.size() < 2) throw NumericError(ErrorKind::InvalidInput, "quadrature needs at least two breakpoints");
  QuadratureResult out;
  const int pieces = static_cast<int>(breaks.size()) - 1;

  std::priority_queue<Piece, std::vector<Piece>, ByError> open;
  std::vector<Piece> closed;
  cplx total{};
  double err_total = 0.0;
  for (size_t k = 0; k + 1 < breaks.size(); ++k) {
    Piece piece = gk15(f, breaks[k], breaks[k + 1], 0);
    total += piece.value;
    err_total += piece.error;
    (piece.settled ? closed.push_back(piece) : open.push(piece));
  }

  int count = pieces;
  auto target = [&] { return tol * (scale + std::abs(total + offset)); };
  bool exhausted = false;
  while (err_total > target() && !open.empty()) {
    Piece worst = open.top();
    open.pop();
    if (worst.depth >= kMaxDepth || count >= kMaxIntervals) {
      exhausted = true;
      closed.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.u0 + worst.u1);
    Piece left = gk15(f, worst.u0, mid, worst.depth + 1);
    Piece right = gk15(f, mid, worst.u1, worst.depth + 1);
    total += left.value + right.value - worst.value;
    err_total += left.error + right.error - worst.error;
    ++count;
    for (auto* piece : {&left, &right}) (piece->settled ? closed.push_back(*piece) : open.push(*piece));
  }

  // Re-sum from the pieces to shed the running-update drift.
  total = {};
  err_total = 0.0;
  for (const auto& piece : closed) {
    total += piece.value;
    err_total += piece.error;
  }
  while (!open.empty()) {
    total += open.top().value;
    err_total += open.top().error;
    open.pop();
  }
  out.value = total;
  out.error = err_total;
  out.intervals = count;
  if (exhausted && err_total > target())
    throw NumericError(ErrorKind::ToleranceNotMet, "quadrature subdivision limit reached");
  return out;
}

SegmentIntegral integrate_segment(const Problem& prob, cplx a, cplx b, double tol, double shift, cplx offset,
                                  double scale) {
  SegmentIntegral out;
  out.shift = shift;
  if (a == b) return out;
  const cplx delta = b - a;
  auto integrand = [&](double u) -> cplx {
    const cplx t = a + u * delta;
    const cplx qt = prob.q(t);
    const double re = qt.real() - shift;
    if (re < -745.0) return {};
    return prob.p(t) * std::exp(cplx(re, qt.imag())) * delta;
  };
  const auto res = gk_adaptive(integrand, 0.0, 1.0, tol, offset, scale, initial_pieces(prob, a, b));
  out.value = res.value;
  out.error = res.error;
  out.intervals = res.intervals;
  return out;
}

cplx eval_g(const Problem& prob, cplx z, double tol) {
  const double peak = max_re_q_on_segment(prob, 0.0, z);
  if (peak > kOverflowGuard) throw NumericError(ErrorKind::OverflowRegion, "Re q exceeds the overflow guard on [0, z]");
  const double shift = std::max(0.0, peak - 500.0);
  const double scale = std::exp(-shift);
  const auto seg = integrate_segment(prob, 0.0, z, tol, shift, prob.c * scale, scale);
  return seg.value * std::exp(shift) + prob.c;
}

cplx eval_g_path(const Problem& prob, std::span<const cplx> vertices, double tol) {
  cplx start = 0.0;
  double peak = -std::numeric_limits<double>::infinity();
  for (const cplx v : vertices) {
    peak = std::max(peak, max_re_q_on_segment(prob, start, v));
    start = v;
  }
  if (peak > kOverflowGuard) throw NumericError(ErrorKind::OverflowRegion, "Re q exceeds the overflow guard on the path");
  const double shift = std::max(0.0, peak - 500.0);
  const double scale = std::exp(-shift);
  cplx sum{};
  start = 0.0;
  for (const cplx v : vertices) {
    sum += integrate_segment(prob, start, v, tol, shift, prob.c * scale + sum, scale).value;
    start = v;
  }
  return sum * std::exp(shift) + prob.c;
}

bool is_pole(const Problem& prob, cplx z) noexcept {
  return std::abs(prob.p(z)) < 1e-300 * std::pow(1.0 + std::abs(z), prob.m);
}

cplx newton_correction(const Problem& prob, cplx z, double tol) {
  if (is_pole(prob, z)) throw NumericError(ErrorKind::PoleHit, "p vanishes at z");
  const cplx qz = prob.q(z);
  if (std::abs(qz.real()) > kOverflowGuard) throw NumericError(ErrorKind::OverflowRegion, "|Re q(z)| exceeds the overflow guard");
  const double peak = max_re_q_on_segment(prob, 0.0, z);
  if (peak > kOverflowGuard) throw NumericError(ErrorKind::OverflowRegion, "Re q exceeds the overflow guard on [0, z]");
  const double shift = std::max(0.0, peak - 500.0);
  const double scale = std::exp(-shift);
  const auto seg = integrate_segment(prob, 0.0, z, tol, shift, prob.c * scale, scale);
  // g e^{-q} assembled before dividing by p; each factor stays representable.
  const cplx ratio = seg.value * std::exp(cplx(shift, 0.0) - qz) + prob.c * std::exp(-qz);
  return ratio / prob.p(z);
}

cplx eval_f(const Problem& prob, cplx z, double tol) { return z - newton_correction(prob, z, tol); }

cplx eval_f_prime(const Problem& prob, cplx z, double tol) {
  // f' = (g e^{-q} / p) (q' + p'/p).
  const cplx corr = newton_correction(prob, z, tol);
  return corr * (prob.dq(z) + prob.dp(z) / prob.p(z));
}

}  // namespace nmeasure
