#include "newton_measure/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <random>

#include "newton_measure/asym.hpp"
#include "newton_measure/errors.hpp"

namespace nmeasure {

namespace {

double unit_from_bits(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

void require_n(long n) {
  if (n < 1) throw NumericError(ErrorKind::InvalidInput, "sample count must be positive");
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

DensityReport tally(const Shape& shape, std::uint64_t seed, const std::vector<OrbitResult>& results) {
  DensityReport rep;
  rep.shape = shape;
  rep.seed = seed;
  rep.n = static_cast<long>(results.size());
  for (const auto& r : results) {
    if (r.fatou()) ++rep.fatou;
    if (r.verdict == Verdict::Unresolved) ++rep.unresolved;
  }
  rep.refresh();
  return rep;
}

}  // namespace

Shape Shape::disk(cplx center, double r) {
  if (!(r > 0.0)) throw NumericError(ErrorKind::InvalidInput, "disk radius must be positive");
  Shape s;
  s.kind = Kind::Disk;
  s.center = center;
  s.r = r;
  return s;
}

Shape Shape::rect(cplx lo, cplx hi) {
  if (!(hi.real() > lo.real() && hi.imag() > lo.imag()))
    throw NumericError(ErrorKind::InvalidInput, "rectangle needs lo < hi in both coordinates");
  Shape s;
  s.kind = Kind::Rect;
  s.lo = lo;
  s.hi = hi;
  s.center = 0.5 * (lo + hi);
  return s;
}

double Shape::area() const noexcept {
  if (kind == Kind::Disk) return M_PI * r * r;
  return (hi.real() - lo.real()) * (hi.imag() - lo.imag());
}

bool Shape::contains(cplx z) const noexcept {
  if (kind == Kind::Disk) return std::abs(z - center) <= r;
  return z.real() >= lo.real() && z.real() <= hi.real() && z.imag() >= lo.imag() && z.imag() <= hi.imag();
}

cplx Shape::from_unit(double u, double v) const noexcept {
  if (kind == Kind::Disk) return center + std::polar(r * std::sqrt(u), 2.0 * M_PI * v);
  return {lo.real() + u * (hi.real() - lo.real()), lo.imag() + v * (hi.imag() - lo.imag())};
}

R2Sampler::R2Sampler(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  shift_[0] = unit_from_bits(rng());
  shift_[1] = unit_from_bits(rng());
}

std::pair<double, double> R2Sampler::operator()(std::uint64_t index) const noexcept {
  // 1/g and 1/g^2 for the plastic number g, the d = 2 generalised golden ratio.
  constexpr double a1 = 0.7548776662466927600495;
  constexpr double a2 = 0.5698402909980532659114;
  const double n = static_cast<double>(index);
  double u = shift_[0] + std::fmod(n * a1, 1.0);
  double v = shift_[1] + std::fmod(n * a2, 1.0);
  if (u >= 1.0) u -= 1.0;
  if (v >= 1.0) v -= 1.0;
  return {u, v};
}

double wilson_half_width(long successes, long n) noexcept {
  if (n <= 0) return 0.0;
  constexpr double z = 1.959963984540054;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  return z / (1.0 + z * z / nn) * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn));
}

void DensityReport::refresh() noexcept {
  density = n > 0 ? static_cast<double>(fatou) / static_cast<double>(n) : 0.0;
  half_width = wilson_half_width(fatou, n);
}

DensityReport& DensityReport::merge(const DensityReport& other) {
  n += other.n;
  fatou += other.fatou;
  unresolved += other.unresolved;
  refresh();
  return *this;
}

DensityReport density_shard(const Problem& prob, const Shape& shape, long first, long count, std::uint64_t seed,
                            const MeasureOptions& opts) {
  require_n(count);
  const R2Sampler sampler(seed);
  RootRegistry registry;
  const auto results = classify_generated(
      prob, static_cast<size_t>(count),
      [&](size_t i) {
        const auto [u, v] = sampler(static_cast<std::uint64_t>(first) + i);
        return opts.frame.to_problem(shape.from_unit(u, v));
      },
      opts.orbit, registry, opts.threads);
  return tally(shape, seed, results);
}

DensityReport density(const Problem& prob, const Shape& shape, long n, std::uint64_t seed,
                      const MeasureOptions& opts) {
  return density_shard(prob, shape, 0, n, seed, opts);
}

DensityReport wplane_density(const Problem& prob, int j, const Shape& square, long n, std::uint64_t seed,
                             const MeasureOptions& opts) {
  require_n(n);
  const R2Sampler sampler(seed);
  std::vector<cplx> points(static_cast<size_t>(n));
  for (long i = 0; i < n; ++i) {
    const auto [u, v] = sampler(static_cast<std::uint64_t>(i));
    points[static_cast<size_t>(i)] = phi(prob, j, square.from_unit(u, v));
  }
  RootRegistry registry;
  return tally(square, seed, classify_points(prob, points, opts.orbit, registry, opts.threads));
}

ThinnessScan thin_at_infinity_scan(const Problem& prob, double R0, cplx window_lo, cplx window_hi, int grid,
                                   long n_per_disk, std::uint64_t seed, const MeasureOptions& opts) {
  if (grid < 1) throw NumericError(ErrorKind::InvalidInput, "centre grid must be at least 1 x 1");
  ThinnessScan scan;
  scan.R0 = R0;
  const double span = grid > 1 ? 1.0 / (grid - 1) : 0.0;
  for (int iy = 0; iy < grid; ++iy) {
    for (int ix = 0; ix < grid; ++ix) {
      const cplx c{window_lo.real() + (window_hi.real() - window_lo.real()) * ix * span,
                   window_lo.imag() + (window_hi.imag() - window_lo.imag()) * iy * span};
      scan.rows.push_back(density(prob, Shape::disk(c, R0), n_per_disk, seed, opts));
      scan.min_density = std::min(scan.min_density, scan.rows.back().density);
    }
  }
  return scan;
}

PostsingularReport postsingular_check(const Problem& prob, const OrbitOptions& opts) {
  PostsingularReport rep;
  for (const cplx z : critical_points(prob)) {
    CriticalOrbit entry;
    entry.point = z;
    entry.orbit = iterate_orbit(prob, z, opts);
    entry.pass = entry.orbit.fatou();
    rep.pass = rep.pass && entry.pass;
    rep.orbits.push_back(entry);
  }
  return rep;
}

int anchor_roots(const Problem& prob, long lo, long hi, RootRegistry& registry) {
  int refined = 0;
  for (int j = 1; j <= prob.d; ++j) {
    for (long k = -hi; k <= hi; ++k) {
      if (std::abs(k) < lo) continue;
      try {
        const ZeroAnchor a = v_anchor(prob, j, k);
        refine_zero(prob, phi(prob, j, a.v), registry);
        ++refined;
      } catch (const NumericError&) {
        // anchors below the lattice floor or seeds that wander are skipped
      }
    }
  }
  return refined;
}

UniformThinness uniform_thinness_check(const Problem& prob, const RootRegistry& registry, double R1,
                                       const std::vector<double>& deltas, long n, std::uint64_t seed,
                                       const MeasureOptions& opts, int max_roots, int ring_points) {
  UniformThinness rep;
  rep.R1 = R1;
  rep.deltas = deltas;
  for (const auto& e : registry.roots()) {
    const cplx u = opts.frame.to_user(e.z);
    if (std::abs(u) > R1) rep.roots.push_back(u);
  }
  // Smallest modulus first; ties by (Re, Im) so the order is total.
  std::sort(rep.roots.begin(), rep.roots.end(), [](cplx a, cplx b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  if (static_cast<int>(rep.roots.size()) > max_roots) rep.roots.resize(static_cast<size_t>(max_roots));

  for (const cplx z0 : rep.roots) {
    for (const double delta : deltas) {
      for (int k = 0; k < ring_points; ++k) {
        const cplx z = z0 + std::polar(delta, 2.0 * M_PI * (k + 0.5) / ring_points);
        rep.rows.push_back(density(prob, Shape::disk(z, delta), n, seed, opts));
        rep.min_density = std::min(rep.min_density, rep.rows.back().density);
      }
    }
  }
  return rep;
}

std::vector<double> AreaStudy::diagonal() const {
  std::vector<double> out;
  for (size_t i = 0; i < std::min(resolutions.size(), budgets.size()); ++i) out.push_back(fractions[i][i]);
  return out;
}

bool AreaStudy::diagonal_strictly_decreasing() const {
  const auto diag = diagonal();
  for (size_t i = 1; i < diag.size(); ++i)
    if (!(diag[i] < diag[i - 1])) return false;
  return true;
}

AreaStudy julia_area_study(const Problem& prob, cplx lo, cplx hi, const std::vector<int>& resolutions,
                           const std::vector<int>& budgets, const MeasureOptions& opts) {
  if (resolutions.empty() || budgets.empty())
    throw NumericError(ErrorKind::InvalidInput, "area study needs resolutions and budgets");
  for (size_t i = 1; i < resolutions.size(); ++i)
    if (resolutions[i] <= resolutions[i - 1]) throw NumericError(ErrorKind::InvalidInput, "resolutions must increase");
  for (size_t i = 1; i < budgets.size(); ++i)
    if (budgets[i] <= budgets[i - 1]) throw NumericError(ErrorKind::InvalidInput, "budgets must increase");
  if (resolutions.front() < 1 || budgets.front() < 1)
    throw NumericError(ErrorKind::InvalidInput, "resolutions and budgets must be positive");

  AreaStudy study;
  study.lo = lo;
  study.hi = hi;
  study.resolutions = resolutions;
  study.budgets = budgets;

  OrbitOptions orbit = opts.orbit;
  orbit.budget = budgets.back();
  // Iteration counts at the largest budget, per classified lattice.
  std::map<int, std::vector<OrbitResult>> lattices;
  auto classify = [&](int N) -> const std::vector<OrbitResult>& {
    auto it = lattices.find(N);
    if (it != lattices.end()) return it->second;
    RootRegistry registry;
    auto res = classify_generated(
        prob, static_cast<size_t>(N) * static_cast<size_t>(N),
        [&](size_t i) {
          const double x = lo.real() + (hi.real() - lo.real()) * static_cast<double>(i % N) / N;
          const double y = lo.imag() + (hi.imag() - lo.imag()) * static_cast<double>(i / N) / N;
          return opts.frame.to_problem({x, y});
        },
        orbit, registry, opts.threads);
    return lattices.emplace(N, std::move(res)).first->second;
  };

  const int finest = resolutions.back();
  for (const int N : resolutions) {
    const bool nested = finest % N == 0;
    const auto& base = nested ? classify(finest) : classify(N);
    const int stride = nested ? finest / N : 1;
    const int width = nested ? finest : N;
    std::vector<double> row;
    for (const int b : budgets) {
      long unresolved = 0;
      for (int iy = 0; iy < N; ++iy)
        for (int ix = 0; ix < N; ++ix) {
          const auto& r = base[static_cast<size_t>(iy) * stride * width + static_cast<size_t>(ix) * stride];
          if (r.truncated(b).verdict == Verdict::Unresolved) ++unresolved;
        }
      row.push_back(static_cast<double>(unresolved) / (static_cast<double>(N) * N));
    }
    study.fractions.push_back(std::move(row));
  }
  study.finest = std::move(lattices.at(finest));
  return study;
}

void write_density_csv(std::ostream& os, const std::vector<DensityReport>& rows) {
  os << "center_re,center_im,r,n,fatou,unresolved,density,halfwidth\n";
  for (const auto& r : rows) {
    const double radius =
        r.shape.kind == Shape::Kind::Disk ? r.shape.r : 0.5 * std::abs(r.shape.hi - r.shape.lo);
    os << fmt(r.shape.center.real()) << ',' << fmt(r.shape.center.imag()) << ',' << fmt(radius) << ',' << r.n << ','
       << r.fatou << ',' << r.unresolved << ',' << fmt(r.density) << ',' << fmt(r.half_width) << '\n';
  }
}

void write_area_csv(std::ostream& os, const AreaStudy& study) {
  os << "resolution,budget,unresolved_fraction\n";
  for (size_t i = 0; i < study.resolutions.size(); ++i)
    for (size_t k = 0; k < study.budgets.size(); ++k)
      os << study.resolutions[i] << ',' << study.budgets[k] << ',' << fmt(study.fractions[i][k]) << '\n';
}

}  // namespace nmeasure
