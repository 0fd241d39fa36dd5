#pragma once

#include <span>
#include <string>
#include <string_view>

#include "nestline/geometry.hpp"

namespace nestline {

struct SvgOptions {
  double pixels_per_unit = 20.0;
  std::string_view title;  // written as <title> when not empty
};

/// SVG 1.1 drawing of a layout: strip frame for y in [0, e], a dotted line at
/// x = length, and one filled polygon per placed convex part. The y axis points
/// up. Output bytes depend only on the inputs.
/// Throws Error(ValidationError) for an empty layout or mismatched sizes.
std::string render_svg(double strip_width, double length, std::span<const Piece> pieces,
                       std::span<const Placement> placements, const SvgOptions& opts = {});

}  // namespace nestline
