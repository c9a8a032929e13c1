#include "wander/render.hpp"

#include <cstdio>
#include <fstream>
#include <thread>

#include "wander/errors.hpp"

namespace wander {

Rgb region_color(Region r) {
  switch (r) {
    case Region::InnerCore: return {38, 38, 48};
    case Region::Core: return {64, 128, 192};
    case Region::CriticalBand: return {216, 88, 56};
    case Region::InterpLower: return {240, 200, 88};
    case Region::InterpUpper: return {120, 200, 120};
  }
  return kBeyondColor;
}

RasterSpec default_raster(const Construction& ctx, int level,
                          RasterSpec::Coloring coloring, int width, int height) {
  if (level < 2 || level > ctx.max_level() - 1)
    throw LevelOutOfRange("default_raster: level must lie in [2, max_level-1]");
  RasterSpec spec;
  spec.level = level;
  spec.coloring = coloring;
  spec.width = width;
  spec.height = height;
  double h = ctx.half(level).to_double();
  double gf = ctx.gamma_fact(level).to_double();
  double h1 = ctx.half(level + 1).to_double();
  spec.s_lo = -2.0 * h;
  spec.s_hi = gf - h1;  // log Q_{n+1} relative to log R_n
  return spec;
}

namespace {

void validate(const Construction& ctx, const RasterSpec& spec) {
  if (spec.width < 1 || spec.width > 65536 || spec.height < 1 || spec.height > 65536)
    throw InvalidParameter("raster dimensions must lie in [1, 65536]");
  if (!(spec.s_hi > spec.s_lo)) throw InvalidParameter("raster s_range is degenerate");
  if (!(spec.theta_hi > spec.theta_lo)) throw InvalidParameter("raster theta_range is degenerate");
  if (spec.level < 1 || spec.level > ctx.max_level())
    throw LevelOutOfRange("raster level outside materialized range");
  if (spec.coloring == RasterSpec::Coloring::LevelsAdvanced &&
      spec.level + spec.steps > ctx.max_level())
    throw BeyondMaxLevel("LevelsAdvanced needs level + steps <= max_level");
  // the window itself must stay below T_{max_level}
  Real top = ctx.log_R(spec.level) + Real(spec.s_hi, ctx.prec());
  if (top > ctx.log_T_abs(ctx.max_level()))
    throw BeyondMaxLevel("raster window beyond T_max_level");
}

struct PixelGrid {
  const RasterSpec& spec;
  double s_at(int x) const {
    return spec.s_lo + (x + 0.5) * (spec.s_hi - spec.s_lo) / spec.width;
  }
  double theta_at(int y) const {
    return spec.theta_lo + (y + 0.5) * (spec.theta_hi - spec.theta_lo) / spec.height;
  }
};

void parallel_rows(int height, const std::function<void(int, int)>& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  int workers = std::max(1u, std::min(hw, 8u));
  if (height < 4 * workers) {
    fn(0, height);
    return;
  }
  std::vector<std::thread> pool;
  int chunk = (height + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    int lo = w * chunk, hi = std::min(height, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back(fn, lo, hi);
  }
  for (auto& t : pool) t.join();
}

}  // namespace

Image render_band(const Construction& ctx, const RasterSpec& spec) {
  validate(ctx, spec);
  Image img;
  img.width = spec.width;
  img.height = spec.height;
  img.pixels.assign(static_cast<size_t>(spec.width) * spec.height * 3, 0);
  PixelGrid grid{spec};
  mpfr_prec_t prec = ctx.prec();

  // DiskChain geometry in units of R_level
  const int n = spec.level;
  double disk_center = double(n) / (n + 1.0);
  double disk_rho = spec.delta / std::pow(double(n), 4);
  double xi_s = n >= 2 ? ctx.xi_offset(n).to_double() : 0.0;
  double ds = (spec.s_hi - spec.s_lo) / spec.width;
  double dth = (spec.theta_hi - spec.theta_lo) / spec.height;

  auto color_pixel = [&](int x, int y) -> Rgb {
    LPoint p{spec.level, Real(grid.s_at(x), prec), principal_angle(Real(grid.theta_at(y), prec)),
             std::nullopt};
    RegionTag tag;
    try {
      tag = classify(p, ctx);
    } catch (const BeyondMaxLevel&) {
      return kBeyondColor;
    }
    switch (spec.coloring) {
      case RasterSpec::Coloring::RegionTag:
        return region_color(tag.region);
      case RasterSpec::Coloring::LevelsAdvanced: {
        int start = annulus_index(tag);
        int last = start;
        LValue v = p;
        for (int i = 0; i < spec.steps; ++i) {
          try {
            v = eval_g(v, ctx);
          } catch (const CatastrophicCancellation&) {
            break;
          } catch (const BeyondMaxLevel&) {
            break;
          }
          if (is_zero(v)) break;
          try {
            last = annulus_index(classify(as_point(v), ctx));
          } catch (const BeyondMaxLevel&) {
            last = ctx.max_level();
            break;
          }
        }
        int adv = std::max(0, std::min(last - start, spec.steps));
        auto ramp = static_cast<std::uint8_t>((255 * adv) / std::max(1, spec.steps));
        return Rgb{ramp, 64, static_cast<std::uint8_t>(255 - ramp)};
      }
      case RasterSpec::Coloring::DiskChain: {
        Rgb base = region_color(tag.region);
        base = {static_cast<std::uint8_t>(base[0] / 2), static_cast<std::uint8_t>(base[1] / 2),
                static_cast<std::uint8_t>(base[2] / 2)};
        if (n >= 2) {
          double s = grid.s_at(x), th = grid.theta_at(y);
          if (std::fabs(s - xi_s) <= 0.5 * ds && std::fabs(th) <= 0.5 * dth)
            return Rgb{255, 60, 60};  // xi_n marker
          if (s > -2.0 && s < 1.0) {
            Real es = exp(Real(s, prec));
            Real ure = es * cos(Real(th, prec)) - disk_center;
            Real uim = es * sin(Real(th, prec));
            Real d2 = ure * ure + uim * uim;
            if (d2 <= Real(disk_rho * disk_rho, prec)) return Rgb{255, 255, 255};
          }
        }
        return base;
      }
    }
    return kBeyondColor;
  };

  parallel_rows(spec.height, [&](int lo, int hi) {
    for (int y = lo; y < hi; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        Rgb c = color_pixel(x, y);
        size_t off = (static_cast<size_t>(y) * spec.width + x) * 3;
        img.pixels[off] = c[0];
        img.pixels[off + 1] = c[1];
        img.pixels[off + 2] = c[2];
      }
    }
  });
  return img;
}

void write_ppm(const Image& img, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "P6\n" << img.width << " " << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()),
            static_cast<std::streamsize>(img.pixels.size()));
  if (!out) throw IoError("short write to '" + path + "'");
}

void write_tag_csv(const Construction& ctx, const RasterSpec& spec,
                   const std::string& path) {
  validate(ctx, spec);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "x,y,level,s,theta,tag\n";
  PixelGrid grid{spec};
  char buf[64];
  for (int y = 0; y < spec.height; ++y) {
    for (int x = 0; x < spec.width; ++x) {
      LPoint p{spec.level, Real(grid.s_at(x), ctx.prec()),
               principal_angle(Real(grid.theta_at(y), ctx.prec())), std::nullopt};
      std::string tag = "beyond";
      int lvl = spec.level;
      try {
        RegionTag t = classify(p, ctx);
        tag = to_string(t);
        lvl = t.n;
      } catch (const BeyondMaxLevel&) {
      }
      std::snprintf(buf, sizeof buf, "%.17g", grid.s_at(x));
      out << x << "," << y << "," << lvl << "," << buf << ",";
      std::snprintf(buf, sizeof buf, "%.17g", grid.theta_at(y));
      out << buf << "," << tag << "\n";
    }
  }
  if (!out) throw IoError("short write to '" + path + "'");
}

}  // namespace wander
