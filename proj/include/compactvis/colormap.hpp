#pragma once

#include <vector>

#include "compactvis/scene.hpp"

namespace compactvis {

/// Vertical (band) scheme first, horizontal (slice) scheme second.
enum class ColorFamily { SeqSeq, SeqQual, SeqDiv, DivDiv };

/// Base colors the bivariate maps are built from. Defaults approximate a
/// violet / green / red qualitative set; they are engine configuration.
struct PaletteConfig {
  std::vector<Rgb> qualitative{{0x88, 0x56, 0xa7}, {0x31, 0xa3, 0x54}, {0xde, 0x2d, 0x26}};
  Rgb seq_start{0x74, 0xa9, 0xcf};
  Rgb seq_end{0x04, 0x5a, 0x8d};
  Rgb div_low{0x21, 0x66, 0xac};
  Rgb div_mid{0x96, 0x96, 0x96};
  Rgb div_high{0xb2, 0x18, 0x2b};
  Rgb vertical_low{0x1b, 0x78, 0x37};
  Rgb vertical_high{0x76, 0x2a, 0x83};
  /// Hue of the plain sequential scheme used by horizon graphs.
  Rgb horizon{0x31, 0x82, 0xbd};

  friend bool operator==(const PaletteConfig&, const PaletteConfig&) = default;
};

/// B x S grid of cell colors, row = band, column = slice.
struct BivariateColorMap {
  ColorFamily family = ColorFamily::SeqQual;
  int bands = 0;
  int slices = 0;
  std::vector<Rgb> colors;

  Rgb at(int band, int slice) const { return colors.at(static_cast<std::size_t>(band * slices + slice)); }
  /// Strongest color of a slice column, used for slice-colored markers.
  Rgb slice_hue(int slice) const { return at(bands - 1, slice); }
};

/// CIE L* (D65) of an sRGB color, 0 (black) to 100 (white).
double lightness(Rgb c);

/// Band b of B along a light-to-dark ramp through `base`.
Rgb band_shade(Rgb base, int band, int bands);

BivariateColorMap make_colormap(ColorFamily family, int bands, int slices, const PaletteConfig& palette = {});

/// Single-hue light-to-dark scheme, one color per band.
std::vector<Rgb> sequential_scheme(int bands, const PaletteConfig& palette = {});

}  // namespace compactvis
