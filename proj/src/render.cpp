#include "newton_measure/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include "newton_measure/asym.hpp"
#include "newton_measure/errors.hpp"

#ifdef NMEASURE_HAVE_PNG
#include <png.h>
#endif

namespace nmeasure {

namespace {

constexpr std::array<std::array<std::uint8_t, 3>, 16> kPalette = {{
    {230, 25, 75},  {60, 180, 75},   {255, 225, 25}, {0, 130, 200},  {245, 130, 48},  {145, 30, 180},
    {70, 240, 240}, {240, 50, 230},  {210, 245, 60}, {250, 190, 212}, {0, 128, 128},  {220, 190, 255},
    {170, 110, 40}, {255, 250, 200}, {128, 0, 0},    {170, 255, 195},
}};

int label_of(const OrbitResult& r) {
  switch (r.verdict) {
    case Verdict::Converged: return r.root_id;
    case Verdict::Cycle: return r.attracting ? ImageBuffer::kCycle : ImageBuffer::kUnresolved;
    case Verdict::Escaped: return ImageBuffer::kEscaped;
    case Verdict::PoleHit: return ImageBuffer::kPole;
    case Verdict::Unresolved: return ImageBuffer::kUnresolved;
  }
  return ImageBuffer::kUnresolved;
}

ImageBuffer blank(cplx lo, cplx hi, int width, int height, int budget) {
  if (width < 1 || height < 1) throw NumericError(ErrorKind::InvalidInput, "image needs positive dimensions");
  if (!(hi.real() > lo.real() && hi.imag() > lo.imag()))
    throw NumericError(ErrorKind::InvalidInput, "window must have positive area");
  ImageBuffer img;
  img.width = width;
  img.height = height;
  img.lo = lo;
  img.hi = hi;
  img.budget = budget;
  const size_t n = static_cast<size_t>(width) * height;
  img.label.assign(n, ImageBuffer::kUnresolved);
  img.iterations.assign(n, 0);
  img.overlay.assign(n, 0);
  return img;
}

void fill(ImageBuffer& img, const std::vector<OrbitResult>& res) {
  for (size_t i = 0; i < res.size(); ++i) {
    img.label[i] = label_of(res[i]);
    img.iterations[i] = res[i].iterations;
  }
}

// Marks the curve Re w = gamma(Im w) row by row, joining neighbouring rows so
// the polyline has no gaps.
void draw_gamma(ImageBuffer& img, const RegionSpec& spec) {
  const double dx = (img.hi.real() - img.lo.real()) / img.width;
  int prev = -1;
  for (int iy = 0; iy < img.height; ++iy) {
    const double y = img.pixel_center(0, iy).imag();
    if (std::abs(y) < 2.0 * std::abs(spec.mu)) {
      prev = -1;
      continue;
    }
    const double x = gamma_solve(spec, y);
    const int col = static_cast<int>(std::floor((x - img.lo.real()) / dx));
    int a = col, b = col;
    if (prev >= 0) {
      a = std::min(col, prev);
      b = std::max(col, prev);
    }
    for (int ix = std::max(a, 0); ix <= std::min(b, img.width - 1); ++ix) img.overlay[img.index(ix, iy)] = 1;
    prev = std::clamp(col, -1, img.width);
  }
}

}  // namespace

cplx ImageBuffer::pixel_center(int ix, int iy) const noexcept {
  return {lo.real() + (hi.real() - lo.real()) * (ix + 0.5) / width,
          hi.imag() - (hi.imag() - lo.imag()) * (iy + 0.5) / height};
}

double ImageBuffer::fraction(int which) const {
  if (label.empty()) return 0.0;
  return static_cast<double>(std::count(label.begin(), label.end(), which)) / static_cast<double>(label.size());
}

std::vector<std::uint8_t> ImageBuffer::rgb() const {
  std::vector<std::uint8_t> out(label.size() * 3);
  const double top = std::log1p(std::max(budget, 1));
  for (size_t i = 0; i < label.size(); ++i) {
    std::array<std::uint8_t, 3> c{0, 0, 0};
    if (overlay[i]) {
      c = {255, 255, 255};
    } else if (label[i] >= 0) {
      // Fast convergence bright, slow convergence dim.
      const double shade = 1.0 - 0.75 * std::min(1.0, std::log1p(iterations[i]) / top);
      for (int k = 0; k < 3; ++k)
        c[k] = static_cast<std::uint8_t>(std::lround(kPalette[static_cast<size_t>(label[i]) % 16][k] * shade));
    } else if (label[i] == kPole) {
      c = {255, 255, 255};
    } else if (label[i] == kEscaped) {
      c = {64, 64, 64};
    } else if (label[i] == kCycle) {
      c = {128, 128, 128};
    }
    std::copy(c.begin(), c.end(), out.begin() + static_cast<std::ptrdiff_t>(3 * i));
  }
  return out;
}

ImageBuffer render_basins(const Problem& prob, cplx lo, cplx hi, int width, int height, const MeasureOptions& opts,
                          RootRegistry* registry) {
  ImageBuffer img = blank(lo, hi, width, height, opts.orbit.budget);
  RootRegistry local;
  RootRegistry& reg = registry ? *registry : local;
  const auto res = classify_generated(
      prob, img.label.size(),
      [&](size_t i) {
        return opts.frame.to_problem(img.pixel_center(static_cast<int>(i % width), static_cast<int>(i / width)));
      },
      opts.orbit, reg, opts.threads);
  fill(img, res);
  return img;
}

ImageBuffer render_wplane(const Problem& prob, int j, cplx lo, cplx hi, int width, int height,
                          const MeasureOptions& opts, const ZoneParams& zone, RootRegistry* registry) {
  ImageBuffer img = blank(lo, hi, width, height, opts.orbit.budget);
  // Closest point of the window to the origin, and whether it meets [0, inf).
  const double cx = std::clamp(0.0, lo.real(), hi.real());
  const double cy = std::clamp(0.0, lo.imag(), hi.imag());
  if (std::hypot(cx, cy) <= prob.R || (lo.imag() <= 0.0 && hi.imag() >= 0.0 && hi.real() >= 0.0))
    throw NumericError(ErrorKind::NotInG, "w-plane window meets D(0,R) or the slit [0, inf)");

  std::vector<cplx> points(img.label.size());
  for (int iy = 0; iy < height; ++iy)
    for (int ix = 0; ix < width; ++ix) points[img.index(ix, iy)] = phi(prob, j, img.pixel_center(ix, iy));
  RootRegistry local;
  fill(img, classify_points(prob, points, opts.orbit, registry ? *registry : local, opts.threads));

  const double mag = std::abs(sector_constant(prob, j));
  const double lam = prob.lambda_value();
  draw_gamma(img, {lam, 1.0 / mag, zone.nu});
  draw_gamma(img, {lam - 1.0, zone.alpha1 / mag, zone.nu});
  draw_gamma(img, {lam - 1.0, zone.beta2 / mag, zone.nu});
  return img;
}

ImageBuffer area_study_image(const AreaStudy& study) {
  if (study.resolutions.empty() || study.budgets.empty()) throw NumericError(ErrorKind::InvalidInput, "empty study");
  const int n = study.resolutions.back();
  if (study.finest.size() != static_cast<size_t>(n) * n)
    throw NumericError(ErrorKind::InvalidInput, "study carries no finest lattice");
  const cplx half = (study.hi - study.lo) / (2.0 * n);
  ImageBuffer img = blank(study.lo - half, study.hi - half, n, n, study.budgets.back());
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      // Lattice rows run upwards, image rows downwards.
      const OrbitResult& r = study.finest[static_cast<size_t>(iy) * n + ix];
      const size_t k = img.index(ix, n - 1 - iy);
      img.label[k] = label_of(r);
      img.iterations[k] = r.iterations;
    }
  return img;
}

void write_ppm(const std::string& path, const ImageBuffer& img) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw NumericError(ErrorKind::ConfigError, "cannot open " + path + " for writing");
  os << "P6\n" << img.width << ' ' << img.height << "\n255\n";
  const auto data = img.rgb();
  os.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!os) throw NumericError(ErrorKind::ConfigError, "failed writing " + path);
}

bool png_available() noexcept {
#ifdef NMEASURE_HAVE_PNG
  return true;
#else
  return false;
#endif
}

bool write_png(const std::string& path, const ImageBuffer& img) {
#ifdef NMEASURE_HAVE_PNG
  // Everything with a destructor is set up before setjmp.
  const auto data = img.rgb();
  std::unique_ptr<FILE, int (*)(FILE*)> fp(std::fopen(path.c_str(), "wb"), &std::fclose);
  if (!fp) throw NumericError(ErrorKind::ConfigError, "cannot open " + path + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, nullptr);
    throw NumericError(ErrorKind::ConfigError, "libpng initialisation failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw NumericError(ErrorKind::ConfigError, "libpng failed writing " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(img.width), static_cast<png_uint_32>(img.height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  for (int iy = 0; iy < img.height; ++iy) png_write_row(png, const_cast<std::uint8_t*>(data.data()) + static_cast<size_t>(iy) * img.width * 3);
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
#else
  (void)path;
  (void)img;
  return false;
#endif
}

}  // namespace nmeasure
