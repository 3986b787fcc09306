#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "common.hpp"
#include "doctest.h"
#include "newton_measure/app.hpp"
#include "newton_measure/errors.hpp"
#include "newton_measure/render.hpp"
#include "newton_measure/roots.hpp"

using namespace nmeasure;
namespace fs = std::filesystem;

namespace {

const Problem& erf03() {
  static const Problem prob = testing::erf_problem(0.3);
  return prob;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / ("nmeasure_app_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
  const fs::path path = scratch_dir() / name;
  std::ofstream(path) << text;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int run_cli(RunConfig cfg, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int code = run(cfg, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

const char* kErfConfig = R"({"p": [[1, 0]], "q": [[0, 0], [0, 0], [-1, 0]], "c": [0.3, 0]})";

}  // namespace

TEST_CASE("problem documents") {
  const ProblemSpec spec = parse_problem_json(
      R"({"p": ["1", [0, "0.5"]], "q": [0, 0, -1], "c": ["0.886226925452758013649", "0"], "tol": 1e-11,
          "zone": {"nu": 30}})");
  CHECK(spec.p == Polynomial({1.0, cplx(0.0, 0.5)}));
  CHECK(spec.q.degree() == 2);
  CHECK(spec.c.real() == doctest::Approx(testing::kHalfSqrtPi).epsilon(1e-16));
  CHECK(*spec.tol == 1e-11);
  CHECK(*spec.nu == 30.0);
  CHECK_FALSE(spec.beta1.has_value());

  for (const char* bad : {"{", "[]", R"({"q": [1, 1], "c": 0})", R"({"p": [1], "q": [1, 1]})",
                          R"({"p": ["x"], "q": [1, 1], "c": 0})", R"({"p": [[1, 2, 3]], "q": [1, 1], "c": 0})",
                          R"({"p": [1], "q": [1, 1], "c": 0, "tol": -1})"}) {
    try {
      (void)parse_problem_json(bad);
      FAIL("accepted " << bad);
    } catch (const NumericError& e) {
      CHECK(e.kind() == ErrorKind::ConfigError);
    }
  }
}

TEST_CASE("exit codes") {
  RunConfig cfg;
  cfg.command = "info";
  cfg.config_path = write_file("erf.json", kErfConfig).string();
  std::string out, err;
  CHECK(run_cli(cfg, &out) == kExitOk);
  CHECK(out.find("lambda = 1/2") != std::string::npos);

  cfg.config_path = write_file("broken.json", "{\"p\": [1,").string();
  CHECK(run_cli(cfg) == kExitConfig);
  cfg.config_path = (scratch_dir() / "missing.json").string();
  CHECK(run_cli(cfg) == kExitConfig);

  cfg.config_path =
      write_file("baker.json", R"({"p": [1], "q": [0, 0, -1], "c": ["0.886226925452758013649", "0"]})").string();
  CHECK(run_cli(cfg, &out, &err) == kExitNumeric);
  CHECK(err.find("Baker domain likely") != std::string::npos);

  RunConfig unknown;
  unknown.command = "frobnicate";
  CHECK(run_cli(unknown) == kExitConfig);

  RunConfig gamma;
  gamma.command = "verify";
  gamma.target = "gamma";
  CHECK(run_cli(gamma, &out) == kExitOk);
  CHECK(out.rfind("PASS", 0) == 0);
}

TEST_CASE("render files are byte-identical across runs") {
  RunConfig cfg;
  cfg.command = "render";
  cfg.config_path = write_file("erf.json", kErfConfig).string();
  cfg.res = 16;
  cfg.budget = 40;
  cfg.out = (scratch_dir() / "a.ppm").string();
  REQUIRE(run_cli(cfg) == kExitOk);
  cfg.out = (scratch_dir() / "b.ppm").string();
  REQUIRE(run_cli(cfg) == kExitOk);
  const std::string a = slurp(scratch_dir() / "a.ppm");
  CHECK(a.rfind("P6\n16 16\n255\n", 0) == 0);
  CHECK(a.size() == std::string("P6\n16 16\n255\n").size() + 16 * 16 * 3);
  CHECK(a == slurp(scratch_dir() / "b.ppm"));
  if (png_available()) CHECK(slurp(scratch_dir() / "a.png") == slurp(scratch_dir() / "b.png"));
}

TEST_CASE("basin render of a window inside one basin") {
  const Problem& prob = erf03();
  const cplx root = refine_zero(prob, phi(prob, 1, v_anchor(prob, 1, 20).v));
  const double r = 0.5 * basin_disk_radius(prob, root);
  MeasureOptions opts;
  const ImageBuffer img = render_basins(prob, root - cplx(r, r), root + cplx(r, r), 16, 16, opts);
  for (int l : img.label) CHECK(l == img.label[0]);
  CHECK(img.label[0] >= 0);
  const auto rgb = img.rgb();
  for (size_t i = 0; i < rgb.size(); i += 3) CHECK(rgb[i] + rgb[i + 1] + rgb[i + 2] > 0);
}

TEST_CASE("w-plane window must lie in G") {
  MeasureOptions opts;
  const ZoneParams zp = ZoneParams::defaults_for(erf03());
  CHECK_THROWS_AS(render_wplane(erf03(), 1, {1.0, -1.0}, {5.0, 1.0}, 16, 16, opts, zp), NumericError);
  CHECK_THROWS_AS(render_wplane(erf03(), 1, {-0.5, 0.1}, {0.5, 0.6}, 16, 16, opts, zp), NumericError);
}

TEST_CASE("anchors lie on the Gamma overlay") {
  const Problem& prob = erf03();
  const ZoneParams zp = ZoneParams::defaults_for(prob);
  MeasureOptions opts;
  opts.orbit.budget = 20;
  const cplx lo(-10.0, 30.0), hi(10.0, 90.0);
  const ImageBuffer img = render_wplane(prob, 1, lo, hi, 64, 96, opts, zp);
  int anchors = 0;
  for (long k = 1; k < 20; ++k) {
    const cplx v = v_anchor(prob, 1, k).v;
    if (v.imag() <= lo.imag() || v.imag() >= hi.imag()) continue;
    const int ix = static_cast<int>((v.real() - lo.real()) / (hi.real() - lo.real()) * img.width);
    const int iy = static_cast<int>((hi.imag() - v.imag()) / (hi.imag() - lo.imag()) * img.height);
    bool hit = false;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const int x = ix + dx, y = iy + dy;
        if (x >= 0 && y >= 0 && x < img.width && y < img.height && img.overlay[img.index(x, y)]) hit = true;
      }
    CHECK(hit);
    ++anchors;
  }
  CHECK(anchors >= 5);
}

TEST_CASE("anchor disks render fully Fatou") {
  const Problem& prob = erf03();
  const ZoneParams zp = ZoneParams::defaults_for(prob);
  MeasureOptions opts;
  for (long k : {5L, 12L, 30L}) {
    const cplx c = v_anchor(prob, 1, k).v + 1.0 / 26.0;
    const double h = 0.7 / 27.0;  // square inscribed in D(c, 1/27)
    const ImageBuffer img = render_wplane(prob, 1, c - cplx(h, h), c + cplx(h, h), 16, 16, opts, zp);
    for (int l : img.label) CHECK(l >= 0);
  }
}

TEST_CASE("right-zone pixels drift by one") {
  const Problem& prob = erf03();
  const ZoneParams zp = ZoneParams::defaults_for(prob);
  MeasureOptions opts;
  opts.orbit.budget = 300;
  RootRegistry registry;
  const ImageBuffer img = render_wplane(prob, 1, {40.0, 200.0}, {60.0, 220.0}, 20, 20, opts, zp, &registry);
  int same = 0, total = 0;
  for (int iy = 0; iy < img.height; ++iy)
    for (int ix = 1; ix < img.width; ++ix) {
      same += img.label[img.index(ix, iy)] == img.label[img.index(ix - 1, iy)];
      ++total;
    }
  CHECK(same >= 0.95 * total);
}

TEST_CASE("z-plane and w-plane classifications agree") {
  const Problem& prob = erf03();
  const ZoneParams zp = ZoneParams::defaults_for(prob);
  MeasureOptions opts;
  opts.orbit.budget = 80;
  RootRegistry wreg;
  const ImageBuffer img = render_wplane(prob, 1, {-20.0, 25.0}, {10.0, 55.0}, 40, 40, opts, zp, &wreg);
  const std::vector<RootEntry> wroots = wreg.roots();
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<size_t> pick(0, img.label.size() - 1);
  RootRegistry zreg;
  for (int s = 0; s < 500; ++s) {
    const size_t i = pick(rng);
    const cplx w = img.pixel_center(static_cast<int>(i % img.width), static_cast<int>(i / img.width));
    const OrbitResult o = iterate_orbit(prob, phi(prob, 1, w), zreg, opts.orbit);
    const int l = img.label[i];
    if (o.verdict == Verdict::Converged) {
      REQUIRE(l >= 0);
      CHECK(std::abs(wroots[static_cast<size_t>(l)].z - o.root) <= 1e-6 * (1.0 + std::abs(o.root)));
    } else {
      CHECK(l < 0);
    }
  }
}
