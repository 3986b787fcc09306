#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "newton_measure/measure.hpp"

namespace nmeasure {

/// Per-pixel classification of a rectangular window. Row 0 is the top edge.
struct ImageBuffer {
  // Labels below zero mark the non-root verdicts.
  static constexpr int kUnresolved = -1;
  static constexpr int kPole = -2;
  static constexpr int kEscaped = -3;
  static constexpr int kCycle = -4;

  int width = 0;
  int height = 0;
  cplx lo, hi;
  int budget = 0;
  std::vector<int> label;
  std::vector<int> iterations;
  std::vector<std::uint8_t> overlay;  // nonzero where a curve is drawn

  cplx pixel_center(int ix, int iy) const noexcept;
  size_t index(int ix, int iy) const noexcept { return static_cast<size_t>(iy) * width + ix; }
  double fraction(int which) const;
  /// Interleaved 8-bit RGB, fixed palette, brightness by log(1 + iterations).
  std::vector<std::uint8_t> rgb() const;
};

/// Basin image of the window (user coordinates, mapped through the frame).
/// Root labels index the merged registry, which is sorted and so stable.
ImageBuffer render_basins(const Problem& prob, cplx lo, cplx hi, int width, int height, const MeasureOptions& opts,
                          RootRegistry* registry = nullptr);

/// w-plane image of sector j: pixel w is classified by the orbit of
/// phi_j(w). Overlays Gamma(lambda, 1/|c_j|) and the two Gamma(lambda - 1, .)
/// curves bounding the middle and left zones. Throws NotInG if the window
/// meets D(0, R) or the slit.
ImageBuffer render_wplane(const Problem& prob, int j, cplx lo, cplx hi, int width, int height,
                          const MeasureOptions& opts, const ZoneParams& zone, RootRegistry* registry = nullptr);

/// The finest lattice of an area study as an image; pixel centres sit on the
/// lattice points.
ImageBuffer area_study_image(const AreaStudy& study);

void write_ppm(const std::string& path, const ImageBuffer& img);
/// False when the build has no PNG support.
bool write_png(const std::string& path, const ImageBuffer& img);
bool png_available() noexcept;

}  // namespace nmeasure
