#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "newton_measure/dynamics.hpp"

namespace nmeasure {

/// Maps user coordinates to problem coordinates: z_problem = alpha * z_user.
/// For a problem produced by normalize() pass the record's alpha so that
/// windows and disks are given in the coordinates of the original g.
struct Frame {
  cplx alpha{1.0, 0.0};
  cplx to_problem(cplx z) const noexcept { return alpha * z; }
  cplx to_user(cplx z) const noexcept { return z / alpha; }
};

struct Shape {
  enum class Kind { Disk, Rect };
  Kind kind = Kind::Disk;
  cplx center{};
  double r = 1.0;
  cplx lo{}, hi{};  // Rect corners

  static Shape disk(cplx center, double r);
  static Shape rect(cplx lo, cplx hi);
  double area() const noexcept;
  bool contains(cplx z) const noexcept;
  /// Area-preserving image of the unit square.
  cplx from_unit(double u, double v) const noexcept;
};

/// Additive R2 sequence (plastic-number lattice) with a Cranley-Patterson
/// shift drawn from the seed.
class R2Sampler {
 public:
  explicit R2Sampler(std::uint64_t seed);
  std::pair<double, double> operator()(std::uint64_t index) const noexcept;

 private:
  double shift_[2];
};

struct DensityReport {
  Shape shape;
  long n = 0;
  long fatou = 0;
  long unresolved = 0;
  double density = 0.0;
  double half_width = 0.0;  // Wilson 95% interval
  std::uint64_t seed = 0;

  /// Adds the counts of another shard over the same shape and seed.
  DensityReport& merge(const DensityReport& other);
  void refresh() noexcept;
};

double wilson_half_width(long successes, long n) noexcept;

struct MeasureOptions {
  OrbitOptions orbit;
  Frame frame;
  int threads = 0;
};

/// Fatou density of the shape (user coordinates) estimated from n sampler
/// points; Unresolved orbits are counted separately and never as Fatou.
DensityReport density(const Problem& prob, const Shape& shape, long n, std::uint64_t seed,
                      const MeasureOptions& opts = {});

/// One shard of the above: sampler indices [first, first + count).
DensityReport density_shard(const Problem& prob, const Shape& shape, long first, long count, std::uint64_t seed,
                            const MeasureOptions& opts = {});

/// Fatou density of the square of w-plane points classified through phi_j.
DensityReport wplane_density(const Problem& prob, int j, const Shape& square, long n, std::uint64_t seed,
                             const MeasureOptions& opts = {});

struct ThinnessScan {
  double R0 = 0.0;
  std::vector<DensityReport> rows;
  double min_density = 1.0;
};

/// Densities in D(center, R0) over a grid x grid lattice of centres filling
/// the window (corners included).
ThinnessScan thin_at_infinity_scan(const Problem& prob, double R0, cplx window_lo, cplx window_hi, int grid,
                                   long n_per_disk, std::uint64_t seed, const MeasureOptions& opts = {});

struct CriticalOrbit {
  cplx point;  // problem coordinates
  OrbitResult orbit;
  bool pass = false;
};

struct PostsingularReport {
  std::vector<CriticalOrbit> orbits;
  bool pass = true;
};

/// Iterates every critical point of f that is not a zero of g or g'. Passes
/// when each one converges to a root or to an attracting cycle.
PostsingularReport postsingular_check(const Problem& prob, const OrbitOptions& opts = {});

/// Refines phi_j(v_{j,k}) for all j and lo <= |k| <= hi into the registry.
/// Returns the number of seeds that refined.
int anchor_roots(const Problem& prob, long lo, long hi, RootRegistry& registry);

struct UniformThinness {
  double R1 = 0.0;
  std::vector<double> deltas;
  std::vector<cplx> roots;  // user coordinates
  std::vector<DensityReport> rows;
  double min_density = 1.0;
};

/// For the registered roots with R1 < |z0| (user coordinates; at most
/// max_roots of them, smallest modulus first) and each delta, samples
/// dens(Fatou, D(z, delta)) for ring_points points z on |z - z0| = delta.
UniformThinness uniform_thinness_check(const Problem& prob, const RootRegistry& registry, double R1,
                                       const std::vector<double>& deltas, long n, std::uint64_t seed,
                                       const MeasureOptions& opts = {}, int max_roots = 8, int ring_points = 4);

struct AreaStudy {
  cplx lo, hi;  // window, user coordinates
  std::vector<int> resolutions;
  std::vector<int> budgets;
  std::vector<std::vector<double>> fractions;  // [resolution][budget]
  /// Verdicts on the finest lattice at the largest budget, row 0 at Im = lo.
  std::vector<OrbitResult> finest;

  std::vector<double> diagonal() const;
  bool diagonal_strictly_decreasing() const;
};

/// Unresolved fraction for every (resolution, budget) pair on the lattice
/// x_i = lo + (hi - lo) i / N, i < N. Lattices that divide the finest one are
/// read off it, and smaller budgets come from truncating the verdicts of the
/// largest, which gives the same answers as separate runs.
AreaStudy julia_area_study(const Problem& prob, cplx lo, cplx hi, const std::vector<int>& resolutions,
                           const std::vector<int>& budgets, const MeasureOptions& opts = {});

void write_density_csv(std::ostream& os, const std::vector<DensityReport>& rows);
void write_area_csv(std::ostream& os, const AreaStudy& study);

}  // namespace nmeasure
