#include "compactvis/colormap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "compactvis/errors.hpp"

namespace compactvis {

namespace {

Rgb mix(Rgb a, Rgb b, double t) {
  auto ch = [t](std::uint8_t x, std::uint8_t y) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(x + (y - x) * t, 0.0, 255.0)));
  };
  return {ch(a.r, b.r), ch(a.g, b.g), ch(a.b, b.b)};
}

double srgb_to_linear(std::uint8_t c) {
  const double v = c / 255.0;
  return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

/// Position of slice s on a diverging axis: low, neutral middle, high.
Rgb diverging(const PaletteConfig& p, int s, int slices) {
  if (slices == 1) return p.div_mid;
  const double u = static_cast<double>(s) / (slices - 1);
  return u < 0.5 ? mix(p.div_low, p.div_mid, 2.0 * u) : mix(p.div_mid, p.div_high, 2.0 * u - 1.0);
}

}  // namespace

double lightness(Rgb c) {
  const double y = 0.2126 * srgb_to_linear(c.r) + 0.7152 * srgb_to_linear(c.g) + 0.0722 * srgb_to_linear(c.b);
  return y > 216.0 / 24389.0 ? 116.0 * std::cbrt(y) - 16.0 : y * 24389.0 / 27.0;
}

Rgb band_shade(Rgb base, int band, int bands) {
  const double u = bands == 1 ? 0.5 : static_cast<double>(band) / (bands - 1);
  const Rgb white{255, 255, 255};
  const Rgb black{0, 0, 0};
  const Rgb tint = mix(base, white, 0.75);
  const Rgb shade = mix(base, black, 0.55);
  return u < 0.5 ? mix(tint, base, 2.0 * u) : mix(base, shade, 2.0 * u - 1.0);
}

BivariateColorMap make_colormap(ColorFamily family, int bands, int slices, const PaletteConfig& palette) {
  if (bands < 1 || slices < 1) throw ConfigError("colormap needs at least one band and one slice");
  BivariateColorMap map{family, bands, slices, {}};
  map.colors.reserve(static_cast<std::size_t>(bands * slices));

  std::vector<Rgb> columns;
  switch (family) {
    case ColorFamily::SeqQual:
      if (palette.qualitative.size() < static_cast<std::size_t>(slices)) {
        throw ConfigError("qualitative palette has " + std::to_string(palette.qualitative.size()) + " hues, need " +
                          std::to_string(slices));
      }
      columns.assign(palette.qualitative.begin(), palette.qualitative.begin() + slices);
      break;
    case ColorFamily::SeqSeq:
      for (int s = 0; s < slices; ++s)
        columns.push_back(slices == 1 ? palette.seq_end
                                      : mix(palette.seq_start, palette.seq_end, static_cast<double>(s) / (slices - 1)));
      break;
    case ColorFamily::SeqDiv:
    case ColorFamily::DivDiv:
      for (int s = 0; s < slices; ++s) columns.push_back(diverging(palette, s, slices));
      break;
  }

  for (int b = 0; b < bands; ++b) {
    for (int s = 0; s < slices; ++s) {
      Rgb base = columns[static_cast<std::size_t>(s)];
      if (family == ColorFamily::DivDiv) {
        const double u = bands == 1 ? 0.5 : static_cast<double>(b) / (bands - 1);
        const Rgb vertical = u < 0.5 ? mix(palette.vertical_low, palette.div_mid, 2.0 * u)
                                     : mix(palette.div_mid, palette.vertical_high, 2.0 * u - 1.0);
        base = mix(base, vertical, 0.5);
      }
      map.colors.push_back(band_shade(base, b, bands));
    }
  }
  return map;
}

std::vector<Rgb> sequential_scheme(int bands, const PaletteConfig& palette) {
  if (bands < 1) throw ConfigError("need at least one band");
  std::vector<Rgb> out;
  for (int b = 0; b < bands; ++b) out.push_back(band_shade(palette.horizon, b, bands));
  return out;
}

}  // namespace compactvis
