#include "newton_measure/app.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "json.hpp"

#include "newton_measure/asym.hpp"
#include "newton_measure/errors.hpp"
#include "newton_measure/measure.hpp"
#include "newton_measure/render.hpp"
#include "newton_measure/verify.hpp"

namespace nmeasure {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) { throw NumericError(ErrorKind::ConfigError, what); }

double number(const json& v, const char* where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(x))
      config_error(std::string(where) + ": '" + s + "' is not a decimal number");
    return x;
  }
  config_error(std::string(where) + ": expected a number or decimal string");
}

cplx complex_entry(const json& v, const char* where) {
  if (v.is_array()) {
    if (v.size() != 2) config_error(std::string(where) + ": complex entries are [re, im]");
    return {number(v[0], where), number(v[1], where)};
  }
  return {number(v, where), 0.0};
}

Polynomial polynomial_entry(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array() || doc[key].empty())
    config_error(std::string("\"") + key + "\" must be a non-empty coefficient array");
  std::vector<cplx> coeffs;
  for (const auto& v : doc[key]) coeffs.push_back(complex_entry(v, key));
  return Polynomial{std::move(coeffs)};
}

std::optional<double> optional_positive(const json& doc, const char* key) {
  if (!doc.contains(key)) return std::nullopt;
  const double x = number(doc[key], key);
  if (!(x > 0.0)) config_error(std::string(key) + " must be positive");
  return x;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string cnum(cplx z) { return num(z.real()) + (z.imag() < 0 ? " - " : " + ") + num(std::abs(z.imag())) + "i"; }

// Output sink: the --out file when given, otherwise stdout.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) config_error("cannot open " + path + " for writing");
      os_ = &file_;
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

std::string strip_extension(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot);
  return path;
}

struct Context {
  const RunConfig& cfg;
  std::ostream& out;
  std::ostream& err;
  Problem prob;
  ConformalMapRecord record;
  ProblemSpec spec;
  ZoneParams zone;
  MeasureOptions mopts;
};

void print_suite(std::ostream& out, const SuiteResult& r) {
  out << (r.pass ? "PASS" : "FAIL") << ' ' << r.name;
  for (const auto& [k, v] : r.metrics) out << ' ' << k << '=' << num(v);
  out << '\n';
  for (const auto& n : r.notes) out << "  " << n << '\n';
}

int cmd_info(Context& ctx) {
  auto& out = ctx.out;
  const Problem& p = ctx.prob;
  out << "d = " << p.d << "\nm = " << p.m << "\nlambda = " << p.lambda.num << '/' << p.lambda.den << "\nR = " << num(p.R)
      << "\nalpha = " << cnum(ctx.record.alpha) << "\nb = " << cnum(ctx.record.b) << "\nc = " << cnum(p.c) << '\n';
  out << "p =";
  for (const cplx a : p.p.coeffs()) out << " (" << cnum(a) << ')';
  out << "\nq =";
  for (const cplx a : p.q.coeffs()) out << " (" << cnum(a) << ')';
  out << '\n';
  for (int j = 1; j <= p.d; ++j) {
    const cplx cj = sector_constant(p, j);
    out << "c_" << j << " = " << cnum(cj) << "  |c_" << j << "| = " << num(std::abs(cj)) << '\n';
  }
  return kExitOk;
}

cplx window_lo(const RunConfig& cfg, cplx fallback) {
  return cfg.window ? cplx((*cfg.window)[0], (*cfg.window)[1]) : fallback;
}
cplx window_hi(const RunConfig& cfg, cplx fallback) {
  return cfg.window ? cplx((*cfg.window)[2], (*cfg.window)[3]) : fallback;
}

void save_image(Context& ctx, const ImageBuffer& img, const std::string& default_path) {
  const std::string base = strip_extension(ctx.cfg.out.empty() ? default_path : ctx.cfg.out);
  write_ppm(base + ".ppm", img);
  ctx.out << "wrote " << base << ".ppm\n";
  if (write_png(base + ".png", img)) ctx.out << "wrote " << base << ".png\n";
}

int cmd_render(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const ImageBuffer img = render_basins(ctx.prob, window_lo(cfg, {-4, -4}), window_hi(cfg, {4, 4}), cfg.res, cfg.res,
                                        ctx.mopts);
  save_image(ctx, img, "basins.ppm");
  ctx.out << "unresolved_fraction = " << num(img.fraction(ImageBuffer::kUnresolved)) << '\n';
  return kExitOk;
}

int cmd_render_w(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const double base = 2.0 * ctx.prob.R + 10.0;
  const ImageBuffer img = render_wplane(ctx.prob, cfg.sector, window_lo(cfg, {-30.0, base}),
                                        window_hi(cfg, {30.0, base + 60.0}), cfg.res, cfg.res, ctx.mopts, ctx.zone);
  save_image(ctx, img, "wplane.ppm");
  ctx.out << "unresolved_fraction = " << num(img.fraction(ImageBuffer::kUnresolved)) << '\n';
  return kExitOk;
}

int cmd_zeros(Context& ctx) {
  RootRegistry registry;
  const SuiteResult r = verify_zeros(ctx.prob, registry, ctx.cfg.k_lo, ctx.cfg.k_hi);
  Sink sink(ctx.cfg.out, ctx.out);
  *sink << r.csv;
  print_suite(ctx.cfg.out.empty() ? ctx.err : ctx.out, r);
  return r.pass ? kExitOk : kExitVerifyFail;
}

int cmd_verify(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  SuiteResult r;
  if (cfg.target == "gamma") {
    r = verify_gamma(cfg.seed);
  } else if (cfg.target == "asymptotics") {
    r = verify_asymptotics(ctx.prob);
  } else if (cfg.target == "basins") {
    RootRegistry registry;
    verify_zeros(ctx.prob, registry, cfg.k_lo, cfg.k_hi);
    OrbitOptions o = ctx.mopts.orbit;
    r = verify_basins(ctx.prob, registry, 10, cfg.samples > 0 ? static_cast<int>(cfg.samples) : 100, cfg.seed, o);
  } else if (cfg.target == "preimages") {
    r = verify_preimages(ctx.prob, cfg.seed);
  } else {
    config_error("verify needs one of asymptotics, gamma, basins, preimages");
  }
  if (!cfg.out.empty() && !r.csv.empty()) {
    Sink sink(cfg.out, ctx.out);
    *sink << r.csv;
  }
  print_suite(ctx.out, r);
  return r.pass ? kExitOk : kExitVerifyFail;
}

int cmd_density(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  Shape shape = Shape::disk(0.0, 4.0);
  if (cfg.disk) shape = Shape::disk({(*cfg.disk)[0], (*cfg.disk)[1]}, (*cfg.disk)[2]);
  else if (cfg.window) shape = Shape::rect(window_lo(cfg, {}), window_hi(cfg, {}));
  const long n = cfg.samples > 0 ? cfg.samples : 10000;
  if (n < 100) config_error("density needs at least 100 samples");
  const DensityReport rep = density(ctx.prob, shape, n, cfg.seed, ctx.mopts);
  Sink sink(cfg.out, ctx.out);
  write_density_csv(*sink, {rep});
  return kExitOk;
}

int cmd_area(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const AreaStudy study = julia_area_study(ctx.prob, window_lo(cfg, {-4, -4}), window_hi(cfg, {4, 4}),
                                           cfg.resolutions, cfg.budgets, ctx.mopts);
  {
    Sink sink(cfg.out, ctx.out);
    write_area_csv(*sink, study);
  }
  if (!cfg.out.empty()) save_image(ctx, area_study_image(study), cfg.out);
  const auto diag = study.diagonal();
  const bool decreasing = study.diagonal_strictly_decreasing();
  const bool below = !diag.empty() && diag.back() <= cfg.ceiling;
  std::ostream& log = cfg.out.empty() ? ctx.err : ctx.out;
  log << (decreasing ? "PASS" : "FAIL") << " diagonal strictly decreasing\n"
      << (below ? "PASS" : "FAIL") << " final unresolved fraction " << num(diag.empty() ? 1.0 : diag.back())
      << " <= " << num(cfg.ceiling) << '\n';
  return decreasing && below ? kExitOk : kExitVerifyFail;
}

int cmd_check(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  auto& out = ctx.out;
  const long n = cfg.samples > 0 ? cfg.samples : 100;

  const PostsingularReport post = postsingular_check(ctx.prob, ctx.mopts.orbit);
  out << (post.pass ? "PASS" : "FAIL") << " postsingular: " << post.orbits.size() << " critical point(s)\n";
  for (const auto& o : post.orbits)
    out << "  z = " << cnum(ctx.mopts.frame.to_user(o.point)) << " -> " << to_string(o.orbit.verdict) << " after "
        << o.orbit.iterations << " steps\n";

  const ThinnessScan thin = thin_at_infinity_scan(ctx.prob, cfg.r0, {-20, -20}, {20, 20}, 15, n, cfg.seed, ctx.mopts);
  const bool thin_ok = thin.min_density > 0.0;
  out << (thin_ok ? "PASS" : "FAIL") << " thin at infinity: R0 = " << num(thin.R0)
      << " min density = " << num(thin.min_density) << '\n';

  RootRegistry registry;
  anchor_roots(ctx.prob, 0, 12, registry);
  const double r1 = cfg.r1 ? *cfg.r1 : ctx.spec.r1.value_or(5.0);
  const UniformThinness uni =
      uniform_thinness_check(ctx.prob, registry, r1, {0.05, 0.2, 0.8}, n, cfg.seed, ctx.mopts);
  const bool uni_ok = !uni.roots.empty() && uni.min_density > 0.0;
  out << (uni_ok ? "PASS" : "FAIL") << " uniform thinness: R1 = " << num(r1) << " roots = " << uni.roots.size()
      << " min density = " << num(uni.min_density) << '\n';

  if (!cfg.out.empty()) {
    Sink sink(cfg.out, ctx.out);
    auto rows = thin.rows;
    rows.insert(rows.end(), uni.rows.begin(), uni.rows.end());
    write_density_csv(*sink, rows);
  }
  const bool pass = post.pass && thin_ok && uni_ok;
  out << (pass ? "PASS" : "FAIL") << " check\n";
  return pass ? kExitOk : kExitVerifyFail;
}

int cmd_curve(Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const double mu = cfg.mu.value_or(ctx.prob.lambda_value());
  const double alpha = cfg.alpha.value_or(1.0 / std::abs(sector_constant(ctx.prob, cfg.sector)));
  if (!(alpha > 0.0)) config_error("--alpha must be positive");
  const double y0 = cfg.window ? (*cfg.window)[1] : 2.0 * std::abs(mu) + 1.0;
  const double y1 = cfg.window ? (*cfg.window)[3] : 200.0;
  Sink sink(cfg.out, ctx.out);
  *sink << "y,gamma\n";
  for (int i = 0; i < cfg.res; ++i) {
    const double y = cfg.res > 1 ? y0 + (y1 - y0) * i / (cfg.res - 1) : y0;
    if (std::abs(y) < 2.0 * std::abs(mu)) continue;
    *sink << num(y) << ',' << num(gamma_solve(mu, alpha, y)) << '\n';
  }
  return kExitOk;
}

}  // namespace

ProblemSpec parse_problem_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    config_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) config_error("problem document must be a JSON object");
  ProblemSpec spec;
  spec.p = polynomial_entry(doc, "p");
  spec.q = polynomial_entry(doc, "q");
  if (!doc.contains("c")) config_error("\"c\" is required");
  spec.c = complex_entry(doc["c"], "c");
  spec.tol = optional_positive(doc, "tol");
  spec.r1 = optional_positive(doc, "r1");
  if (doc.contains("zone")) {
    const json& z = doc["zone"];
    if (!z.is_object()) config_error("\"zone\" must be an object");
    spec.alpha1 = optional_positive(z, "alpha1");
    spec.beta1 = optional_positive(z, "beta1");
    spec.beta2 = optional_positive(z, "beta2");
    spec.nu = optional_positive(z, "nu");
  }
  return spec;
}

ProblemSpec load_problem_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) config_error("cannot read config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_problem_json(ss.str());
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  static const char* const kCommands[] = {"info",    "render",     "render-w", "zeros", "verify",
                                          "density", "area-study", "check",    "curve"};
  bool known = false;
  for (const char* c : kCommands) known = known || cfg.command == c;
  if (!known) {
    err << "unknown subcommand '" << cfg.command << "'\n";
    return kExitConfig;
  }

  std::optional<Context> ctx;
  try {
    if (cfg.res < 16 && cfg.command != "curve") config_error("--res must be at least 16");
    if (cfg.budget < 1) config_error("--budget must be positive");
    if (cfg.window && !((*cfg.window)[2] > (*cfg.window)[0] && (*cfg.window)[3] > (*cfg.window)[1]))
      config_error("--window needs x0 < x1 and y0 < y1");
    if (cfg.command == "verify" && cfg.target == "gamma") {
      // Needs no problem.
      const SuiteResult r = verify_gamma(cfg.seed);
      if (!cfg.out.empty()) {
        Sink sink(cfg.out, out);
        *sink << r.csv;
      }
      print_suite(out, r);
      return r.pass ? kExitOk : kExitVerifyFail;
    }
    if (cfg.config_path.empty()) config_error("--config is required");
    ProblemSpec spec = load_problem_file(cfg.config_path);
    auto [prob, record] = normalize(spec.p, spec.q, spec.c);
    ctx.emplace(Context{cfg, out, err, std::move(prob), record, spec, {}, {}});
  } catch (const NumericError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    Context& c = *ctx;
    const double tol = c.spec.tol.value_or(kDefaultTol);
    ensure_sector_constants(c.prob, tol);
    c.zone = ZoneParams::defaults_for(c.prob);
    if (c.spec.alpha1) c.zone.alpha1 = *c.spec.alpha1;
    if (c.spec.beta1) c.zone.beta1 = *c.spec.beta1;
    if (c.spec.beta2) c.zone.beta2 = *c.spec.beta2;
    if (c.spec.nu) c.zone.nu = *c.spec.nu;
    c.mopts.frame.alpha = c.record.alpha;
    c.mopts.threads = cfg.threads;
    c.mopts.orbit.budget = cfg.budget;
    c.mopts.orbit.tol = tol;

    if (cfg.command == "info") return cmd_info(c);
    if (cfg.command == "render") return cmd_render(c);
    if (cfg.command == "render-w") return cmd_render_w(c);
    if (cfg.command == "zeros") return cmd_zeros(c);
    if (cfg.command == "verify") return cmd_verify(c);
    if (cfg.command == "density") return cmd_density(c);
    if (cfg.command == "area-study") return cmd_area(c);
    if (cfg.command == "check") return cmd_check(c);
    return cmd_curve(c);
  } catch (const NumericError& e) {
    if (e.kind() == ErrorKind::ConfigError || e.kind() == ErrorKind::InvalidInput) {
      err << "config error: " << e.what() << '\n';
      return kExitConfig;
    }
    err << "numeric abort: " << e.what() << '\n';
    if (e.kind() == ErrorKind::NonConvergence) err << "a sector constant did not settle: Baker domain likely\n";
    return kExitNumeric;
  }
}

}  // namespace nmeasure
