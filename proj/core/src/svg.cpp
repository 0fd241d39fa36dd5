#include "nestline/svg.hpp"

#include <algorithm>
#include <array>
#include <cstdio>

#include "nestline/errors.hpp"

namespace nestline {
namespace {

constexpr std::array<const char*, 10> kPalette{"#8dd3c7", "#ffffb3", "#bebada", "#fb8072",
                                               "#80b1d3", "#fdb462", "#b3de69", "#fccde5",
                                               "#d9d9d9", "#bc80bd"};

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(double strip_width, double length, std::span<const Piece> pieces,
                       std::span<const Placement> placements, const SvgOptions& opts) {
  if (pieces.empty() || placements.empty()) {
    throw Error(ErrorCode::ValidationError, "cannot render an empty layout");
  }
  if (pieces.size() != placements.size()) {
    throw Error(ErrorCode::ValidationError, "placement count does not match piece count");
  }
  if (!(strip_width > 0.0) || !(opts.pixels_per_unit > 0.0)) {
    throw Error(ErrorCode::ValidationError, "strip width and scale must be positive");
  }

  std::vector<std::vector<Polygon>> placed(pieces.size());
  double max_x = std::max(length, 0.0);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    for (const auto& part : pieces[i].parts) {
      placed[i].push_back(transform(part.vertices(), placements[i]));
      for (const Point& p : placed[i].back()) max_x = std::max(max_x, p.x);
    }
  }

  const double k = opts.pixels_per_unit;
  const double pad = 10.0;
  const double frame_len = max_x * 1.05;
  const auto X = [&](double x) { return num(pad + x * k); };
  const auto Y = [&](double y) { return num(pad + (strip_width - y) * k); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         num(2 * pad + frame_len * k) + "\" height=\"" + num(2 * pad + strip_width * k) + "\">\n";
  if (!opts.title.empty()) out += "  <title>" + escape(opts.title) + "</title>\n";
  out += "  <rect class=\"strip\" x=\"" + X(0.0) + "\" y=\"" + Y(strip_width) + "\" width=\"" +
         num(frame_len * k) + "\" height=\"" + num(strip_width * k) +
         "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
  for (std::size_t i = 0; i < placed.size(); ++i) {
    const char* fill = kPalette[i % kPalette.size()];
    for (std::size_t j = 0; j < placed[i].size(); ++j) {
      out += "  <polygon data-piece=\"" + escape(pieces[i].id) + "\" data-part=\"" +
             std::to_string(j) + "\" points=\"";
      const auto& poly = placed[i][j];
      for (std::size_t v = 0; v < poly.size(); ++v) {
        if (v > 0) out += ' ';
        out += X(poly[v].x) + "," + Y(poly[v].y);
      }
      out += "\" fill=\"" + std::string(fill) + "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
    }
  }
  out += "  <line class=\"length\" x1=\"" + X(length) + "\" y1=\"" + Y(0.0) + "\" x2=\"" +
         X(length) + "\" y2=\"" + Y(strip_width) +
         "\" stroke=\"#cc0000\" stroke-width=\"1\" stroke-dasharray=\"2,3\"/>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace nestline
