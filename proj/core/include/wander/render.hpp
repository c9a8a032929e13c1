#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "wander/qgmap.hpp"

namespace wander {

// Log-polar raster window at one level: s runs horizontally (offset from
// log R_n), theta vertically. Euclidean rendering is useless at these
// scales.
struct RasterSpec {
  enum class Coloring { RegionTag, LevelsAdvanced, DiskChain };
  int level = 3;
  double s_lo = 0.0, s_hi = 1.0;
  double theta_lo = -3.141592653589793, theta_hi = 3.141592653589793;
  int width = 1024, height = 512;
  Coloring coloring = Coloring::RegionTag;
  int steps = 3;        // LevelsAdvanced
  double delta = 0.01;  // DiskChain
};

// Default window: from P_n through the lower interpolation band of the
// next level (right edge at Q_{n+1}), so all five stripes are visible.
RasterSpec default_raster(const Construction& ctx, int level,
                          RasterSpec::Coloring coloring, int width, int height);

struct Image {
  int width = 0, height = 0;
  std::vector<std::uint8_t> pixels;  // row-major RGB
};

using Rgb = std::array<std::uint8_t, 3>;

// Fixed palette; documented in the README and frozen by golden tests.
Rgb region_color(Region r);
inline constexpr Rgb kBeyondColor{0, 0, 0};

// Deterministic pixel function of (params, spec); rows render in parallel.
Image render_band(const Construction& ctx, const RasterSpec& spec);

// Binary PPM "P6", bit-exact across platforms.
void write_ppm(const Image& img, const std::string& path);

// Per-pixel tag dump: "x,y,level,s,theta,tag".
void write_tag_csv(const Construction& ctx, const RasterSpec& spec,
                   const std::string& path);

}  // namespace wander
