#include <random>
#include <sstream>

#include "common.hpp"
#include "doctest.h"
#include "newton_measure/errors.hpp"
#include "newton_measure/measure.hpp"
#include "newton_measure/roots.hpp"
#include "newton_measure/sectors.hpp"

using namespace nmeasure;

namespace {

const Problem& erf03() {
  static const Problem prob = testing::erf_problem(0.3);
  return prob;
}

cplx anchored_root(long k) {
  const Problem& prob = erf03();
  return refine_zero(prob, phi(prob, 1, v_anchor(prob, 1, k).v));
}

MeasureOptions quick(int budget = 60) {
  MeasureOptions o;
  o.orbit.budget = budget;
  return o;
}

}  // namespace

TEST_CASE("R2 sampler") {
  const R2Sampler a(5), b(5), c(6);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto [u, v] = a(i);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    CHECK(a(i) == b(i));
  }
  CHECK(a(0) != c(0));
}

TEST_CASE("shapes") {
  const Shape d = Shape::disk({1.0, 2.0}, 3.0);
  CHECK(d.area() == doctest::Approx(9.0 * std::numbers::pi));
  const Shape r = Shape::rect({-1.0, -2.0}, {3.0, 0.0});
  CHECK(r.area() == doctest::Approx(8.0));
  for (double u : {0.0, 0.3, 0.999})
    for (double v : {0.0, 0.5, 0.999}) {
      CHECK(d.contains(d.from_unit(u, v)));
      CHECK(r.contains(r.from_unit(u, v)));
    }
}

TEST_CASE("Wilson half width") {
  CHECK(wilson_half_width(50, 100) == doctest::Approx(0.0962).epsilon(2e-3));
  CHECK(wilson_half_width(100, 100) > 0.0);
  CHECK(wilson_half_width(0, 0) == 0.0);
}

TEST_CASE("density inside a basin disk") {
  const Problem& prob = erf03();
  const cplx root = anchored_root(20);
  const Shape inner = Shape::disk(root, 0.9 * basin_disk_radius(prob, root));
  const DensityReport rep = density(prob, inner, 200, 3, quick());
  CHECK(rep.n == 200);
  CHECK(rep.density == 1.0);
  CHECK(rep.unresolved == 0);
}

TEST_CASE("density is deterministic and merges across shards") {
  const Problem& prob = erf03();
  const Shape shape = Shape::disk({0.5, 0.5}, 1.5);
  const auto opts = quick();
  const DensityReport a = density(prob, shape, 300, 42, opts);
  const DensityReport b = density(prob, shape, 300, 42, opts);
  CHECK(a.fatou == b.fatou);
  CHECK(a.unresolved == b.unresolved);
  CHECK(a.density == b.density);
  CHECK(a.half_width == b.half_width);

  DensityReport merged = density_shard(prob, shape, 0, 100, 42, opts);
  DensityReport tail = density_shard(prob, shape, 100, 150, 42, opts);
  tail.merge(density_shard(prob, shape, 250, 50, 42, opts));
  merged.merge(tail);
  CHECK(merged.n == a.n);
  CHECK(merged.fatou == a.fatou);
  CHECK(merged.unresolved == a.unresolved);
  CHECK(merged.density == a.density);

  std::ostringstream s1, s2;
  write_density_csv(s1, {a});
  write_density_csv(s2, {b});
  CHECK(s1.str() == s2.str());
  CHECK(s1.str().rfind("center_re,center_im,r,n,fatou,unresolved,density,halfwidth\n", 0) == 0);
}

TEST_CASE("nested shapes") {
  const Problem& prob = erf03();
  const auto opts = quick();
  const DensityReport inner = density(prob, Shape::disk({0.0, 0.0}, 1.0), 400, 8, opts);
  const DensityReport outer = density(prob, Shape::disk({0.0, 0.0}, 2.0), 400, 8, opts);
  CHECK(inner.density * 0.25 <= outer.density * (1.0 + 3.0 * outer.half_width));
}

TEST_CASE("postsingular check") {
  CHECK(postsingular_check(erf03()).pass);
  const PostsingularReport vacuous = postsingular_check(testing::erf_problem(0.0));
  CHECK(vacuous.pass);
  CHECK(vacuous.orbits.empty());
  OrbitOptions starved;
  starved.budget = 1;
  const PostsingularReport fail = postsingular_check(erf03(), starved);
  CHECK_FALSE(fail.pass);
  REQUIRE(fail.orbits.size() == 1);
  CHECK(fail.orbits[0].orbit.verdict == Verdict::Unresolved);
}

TEST_CASE("thin-at-infinity scan on an all-Fatou window") {
  const Problem& prob = erf03();
  const cplx root = anchored_root(20);
  const double r = basin_disk_radius(prob, root);
  const ThinnessScan scan =
      thin_at_infinity_scan(prob, r / 4.0, root - cplx(r, r) / 4.0, root + cplx(r, r) / 4.0, 3, 100, 1, quick());
  CHECK(scan.R0 == r / 4.0);
  CHECK(scan.rows.size() == 9);
  CHECK(scan.min_density == 1.0);
}

TEST_CASE("uniform thinness is monotone-safe") {
  const Problem& prob = erf03();
  RootRegistry registry;
  anchor_roots(prob, 5, 6, registry);
  REQUIRE(registry.size() >= 2);
  const auto opts = quick();
  const UniformThinness one = uniform_thinness_check(prob, registry, 1.0, {0.05}, 100, 1, opts, 2, 4);
  const UniformThinness two = uniform_thinness_check(prob, registry, 1.0, {0.05, 0.8}, 100, 1, opts, 2, 4);
  CHECK(one.roots.size() == 2);
  CHECK(two.rows.size() == 2 * one.rows.size());
  CHECK(two.min_density <= one.min_density);
  CHECK(one.min_density > 0.0);
}

TEST_CASE("uniform thinness inside the basin disk is bounded by the overlap") {
  const Problem& prob = erf03();
  RootRegistry registry;
  const cplx root = anchored_root(20);
  registry.insert(root);
  const double r = basin_disk_radius(prob, root);
  const UniformThinness u = uniform_thinness_check(prob, registry, 1.0, {0.5 * r}, 200, 2, quick(), 1, 4);
  // D(z, r/2) with |z - z0| = r/2 lies inside the basin disk.
  CHECK(u.min_density == 1.0);
}

TEST_CASE("area study") {
  const Problem& prob = erf03();
  const cplx root = anchored_root(20);
  const double r = basin_disk_radius(prob, root) / 3.0;
  const AreaStudy inside = julia_area_study(prob, root - cplx(r, r), root + cplx(r, r), {8, 16}, {5, 20}, quick(20));
  for (const auto& row : inside.fractions)
    for (double f : row) CHECK(f == 0.0);

  const AreaStudy study = julia_area_study(prob, {-4.0, -4.0}, {4.0, 4.0}, {16, 32}, {10, 20, 40}, quick(40));
  REQUIRE(study.fractions.size() == 2);
  for (const auto& row : study.fractions)
    for (size_t b = 1; b < row.size(); ++b) CHECK(row[b] <= row[b - 1]);
  std::ostringstream s1, s2;
  write_area_csv(s1, study);
  write_area_csv(s2, julia_area_study(prob, {-4.0, -4.0}, {4.0, 4.0}, {16, 32}, {10, 20, 40}, quick(40)));
  CHECK(s1.str() == s2.str());
  CHECK(s1.str().rfind("resolution,budget,unresolved_fraction\n", 0) == 0);

  AreaStudy synthetic;
  synthetic.resolutions = {8, 16};
  synthetic.budgets = {10, 20};
  synthetic.fractions = {{0.3, 0.2}, {0.25, 0.1}};
  CHECK(synthetic.diagonal() == std::vector<double>{0.3, 0.1});
  CHECK(synthetic.diagonal_strictly_decreasing());
  synthetic.fractions[1][1] = 0.3;
  CHECK_FALSE(synthetic.diagonal_strictly_decreasing());
}

TEST_CASE("w-plane squares carry Fatou density") {
  const Problem& prob = erf03();
  for (long k : {6L, 15L}) {
    const cplx v = v_anchor(prob, 1, k).v;
    const DensityReport rep = wplane_density(prob, 1, Shape::rect(v - cplx(2.0, 2.0), v + cplx(2.0, 2.0)), 200, 4, quick());
    CHECK(rep.density > 0.0);
  }
}
