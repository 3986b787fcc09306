// Acceptance run: one PASS/FAIL line per criterion, artifacts under --outdir.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "newton_measure/asym.hpp"
#include "newton_measure/measure.hpp"
#include "newton_measure/render.hpp"
#include "newton_measure/verify.hpp"

using namespace nmeasure;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 1;

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail += (detail.empty() ? "" : "; ") + std::string(ok ? "" : "FAILED ") + what;
  }
};

struct Env {
  fs::path dir;
  int threads = 0;
  Problem prob;
  Frame frame;
  bool echo = true;
};

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  os << text;
  if (!os) throw std::runtime_error("cannot write " + path.string());
}

std::string metrics(const SuiteResult& r) {
  std::string s;
  for (const auto& [k, v] : r.metrics) s += (s.empty() ? "" : " ") + k + "=" + num(v);
  return s;
}

// The erf problem g(z) = int_0^z e^{-t^2} dt + 0.3, normalized.
void setup(Env& env) {
  auto [prob, rec] = normalize(Polynomial{1.0}, Polynomial{0.0, 0.0, -1.0}, 0.3);
  ensure_sector_constants(prob);
  env.prob = std::move(prob);
  env.frame.alpha = rec.alpha;
}

MeasureOptions measure_options(const Env& env, int budget) {
  MeasureOptions o;
  o.orbit.budget = budget;
  o.frame = env.frame;
  o.threads = env.threads;
  return o;
}

Outcome criterion1(Env& env) {
  Outcome o;
  const SuiteResult r = verify_gamma(kSeed, 20, 48);
  write_text(env.dir / "c1_gamma.csv", r.csv);
  o.require(r.pass, "gamma suite " + metrics(r));
  for (const auto& n : r.notes) o.detail += "; " + n;
  return o;
}

Outcome criterion2(Env& env) {
  Outcome o;
  const SuiteResult r = verify_asymptotics(env.prob, 40);
  write_text(env.dir / "c2_asymptotics.csv", r.csv);
  o.require(r.pass, "decay scans " + metrics(r));
  for (const auto& n : r.notes) o.detail += "; " + n;
  return o;
}

Outcome criterion3(Env& env, RootRegistry& registry) {
  Outcome o;
  const SuiteResult r = verify_zeros(env.prob, registry, 5, 40);
  write_text(env.dir / "c3_zeros.csv", r.csv);
  o.require(r.pass, "anchored zeros " + metrics(r));
  for (const auto& n : r.notes) o.detail += "; " + n;
  return o;
}

Outcome criterion4(Env& env, const RootRegistry& registry) {
  Outcome o;
  OrbitOptions opts;
  const SuiteResult r = verify_basins(env.prob, registry, 10, 100, kSeed, opts);
  write_text(env.dir / "c4_basins.csv", r.csv);
  o.require(r.pass, "basin disks " + metrics(r));
  for (const auto& n : r.notes) o.detail += "; " + n;
  return o;
}

Outcome criterion5(Env& env) {
  Outcome o;
  const SuiteResult r = verify_preimages(env.prob, kSeed, 50, 100, 0.8, 0.1);
  write_text(env.dir / "c5_preimages.csv", r.csv);
  o.require(r.pass, "pullbacks " + metrics(r));
  for (const auto& n : r.notes) o.detail += "; " + n;
  return o;
}

Outcome criterion6(Env& env) {
  Outcome o;
  const auto opts = measure_options(env, 200);

  const PostsingularReport post = postsingular_check(env.prob, opts.orbit);
  o.require(post.pass, "postsingular (" + std::to_string(post.orbits.size()) + " critical point)");

  const AreaStudy study = julia_area_study(env.prob, {-4.0, -4.0}, {4.0, 4.0}, {256, 512, 1024}, {50, 100, 200}, opts);
  {
    std::ostringstream csv;
    write_area_csv(csv, study);
    write_text(env.dir / "c6_area.csv", csv.str());
    const ImageBuffer img = area_study_image(study);
    write_ppm((env.dir / "c6_basins_1024.ppm").string(), img);
    write_png((env.dir / "c6_basins_1024.png").string(), img);
  }
  const auto diag = study.diagonal();
  std::string dstr;
  for (double f : diag) dstr += (dstr.empty() ? "" : ",") + num(f);
  o.require(study.diagonal_strictly_decreasing(), "diagonal strictly decreasing [" + dstr + "]");
  o.require(!diag.empty() && diag.back() <= 0.005, "final unresolved fraction " + num(diag.back()) + " <= 0.005");

  const long n = 100;
  const ThinnessScan thin = thin_at_infinity_scan(env.prob, 3.0, {-20.0, -20.0}, {20.0, 20.0}, 15, n, kSeed, opts);
  {
    std::ostringstream csv;
    write_density_csv(csv, thin.rows);
    write_text(env.dir / "c6_thin.csv", csv.str());
  }
  o.require(thin.min_density > 0.0, "thin at infinity min density " + num(thin.min_density) + " > 0");

  RootRegistry registry;
  anchor_roots(env.prob, 0, 12, registry);
  const UniformThinness uni = uniform_thinness_check(env.prob, registry, 5.0, {0.05, 0.2, 0.8}, n, kSeed, opts);
  {
    std::ostringstream csv;
    write_density_csv(csv, uni.rows);
    write_text(env.dir / "c6_uniform.csv", csv.str());
  }
  o.require(!uni.roots.empty() && uni.min_density > 0.0,
            "uniform thinness min density " + num(uni.min_density) + " > 0 over " + std::to_string(uni.roots.size()) +
                " roots");

  std::ostringstream base;
  base << "quantity,value\n"
       << "thin_min_density," << num(thin.min_density) << '\n'
       << "uniform_min_density," << num(uni.min_density) << '\n';
  for (size_t i = 0; i < diag.size(); ++i) base << "diagonal_" << i << ',' << num(diag[i]) << '\n';
  write_text(env.dir / "c6_baseline.csv", base.str());
  return o;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  if (!fs::exists(dir)) return files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const std::string name = e.path().filename().string();
    if (name.rfind("c", 0) != 0 || name.find('_') == std::string::npos) continue;
    std::ifstream is(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    files[name] = ss.str();
  }
  return files;
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
};

constexpr Criterion kCriteria[] = {
    {1, "gamma-curve suite", 10.0},       {2, "asymptotics suite", 60.0},
    {3, "zero localization", 60.0},       {4, "basin disks", 60.0},
    {5, "pullback suite", 120.0},         {6, "hypothesis and measure-zero evidence", 600.0},
    {7, "determinism", 0.0},
};

int run_one(Env& env, int id, RootRegistry& registry) {
  const Criterion& c = kCriteria[id - 1];
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    switch (id) {
      case 1: o = criterion1(env); break;
      case 2: o = criterion2(env); break;
      case 3: o = criterion3(env, registry); break;
      case 4:
        if (registry.empty()) verify_zeros(env.prob, registry, 5, 40);
        o = criterion4(env, registry);
        break;
      case 5: o = criterion5(env); break;
      case 6: o = criterion6(env); break;
      default: break;
    }
  } catch (const std::exception& e) {
    o.require(false, std::string("aborted: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (c.limit_s > 0.0) o.require(secs < c.limit_s, "runtime " + num(secs) + " s < " + num(c.limit_s) + " s");
  if (env.echo)
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << c.title << "): " << o.detail
              << std::endl;
  return o.pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria for newton-measure"};
  std::vector<int> which{1, 2, 3, 4, 5, 6, 7};
  std::string outdir = "acceptance";
  std::string reference;
  int threads = 0;
  app.add_option("--criteria", which, "criteria to run")->delimiter(',');
  app.add_option("--outdir", outdir, "artifact directory");
  app.add_option("--reference", reference, "directory of a previous run (criterion 7)");
  app.add_option("--threads", threads, "worker threads (0: hardware)");
  CLI11_PARSE(app, argc, argv);

  Env env;
  env.dir = outdir;
  env.threads = threads;
  fs::create_directories(env.dir);
  try {
    setup(env);
  } catch (const std::exception& e) {
    std::cout << "FAIL setup: " << e.what() << '\n';
    return 1;
  }

  int failures = 0;
  RootRegistry registry;
  for (const int id : which) {
    if (id < 1 || id > 7) {
      std::cerr << "no criterion " << id << '\n';
      return 2;
    }
    if (id != 7) {
      failures += run_one(env, id, registry);
      continue;
    }
    // Determinism: redo 1-6 into a fresh directory and compare byte for byte
    // with the reference run (or with this run's own artifacts).
    const fs::path ref = reference.empty() ? env.dir : fs::path(reference);
    const auto before = snapshot(ref);
    Env again = env;
    again.dir = env.dir / "rerun";
    again.echo = false;
    fs::remove_all(again.dir);
    fs::create_directories(again.dir);
    RootRegistry fresh;
    for (int k = 1; k <= 6; ++k) run_one(again, k, fresh);
    const auto after = snapshot(again.dir);
    Outcome o;
    o.require(!before.empty(), std::to_string(before.size()) + " reference artifacts in " + ref.string());
    int differing = 0;
    for (const auto& [name, bytes] : after) {
      const auto it = before.find(name);
      if (it == before.end() || it->second != bytes) {
        ++differing;
        o.detail += "; differs: " + name;
      }
    }
    for (const auto& [name, bytes] : before)
      if (!after.count(name)) {
        ++differing;
        o.detail += "; missing on rerun: " + name;
      }
    o.require(differing == 0, std::to_string(after.size()) + " artifacts byte-identical");
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion 7 (determinism): " << o.detail << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
