#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nestline/geometry.hpp"
#include "nestline/model.hpp"

namespace nestline {

struct PieceRecord {
  std::string id;
  int count = 1;
  Polygon vertices;
  std::vector<Polygon> parts;  // optional pre-supplied convex parts

  friend bool operator==(const PieceRecord&, const PieceRecord&) = default;
};

struct NestingInstance {
  std::string name;
  double strip_width = 0.0;
  std::optional<double> raster_scale;
  std::vector<PieceRecord> pieces;

  friend bool operator==(const NestingInstance&, const NestingInstance&) = default;
};

/// Parses and validates an instance document. Throws Error(ParseError) for
/// malformed JSON or schema mismatches and Error(ValidationError) for geometry
/// problems (message names the piece id).
NestingInstance parse_instance_text(std::string_view text);
NestingInstance parse_instance(const std::filesystem::path& path);

std::string write_instance_text(const NestingInstance& instance);
void write_instance(const NestingInstance& instance, const std::filesystem::path& path);

/// Normalized pieces with multiplicities expanded; copies k >= 2 of a piece
/// get ids "<id>#<k>" (the first copy keeps the plain id when count is 1,
/// otherwise "<id>#1"). Throws Error(ValidationError).
std::vector<Piece> expand_pieces(const NestingInstance& instance);

/// Raster scale: explicit override, else the instance's value, else the
/// per-instance default.
double effective_raster_scale(const NestingInstance& instance,
                              std::optional<double> override_scale = std::nullopt);

struct PlacementRecord {
  std::string id;
  Placement placement;
};

struct Layout {
  std::string instance;
  double strip_width = 0.0;
  double length = 0.0;
  std::vector<PlacementRecord> placements;
  std::optional<std::vector<SeparationLineVar>> lines;
};

Layout make_layout(std::string_view instance_name, double strip_width, double length,
                   std::span<const Piece> pieces, std::span<const Placement> placements,
                   std::optional<std::span<const SeparationLineVar>> lines = std::nullopt);

std::string write_layout_text(const Layout& layout);
void write_layout(const Layout& layout, const std::filesystem::path& path);
Layout parse_layout_text(std::string_view text);
Layout parse_layout(const std::filesystem::path& path);

/// Placements ordered like `pieces`, matched by id. Throws Error(ValidationError)
/// for unknown, missing or duplicated ids.
std::vector<Placement> placements_for(const Layout& layout, std::span<const Piece> pieces);

/// Angle reduced to [0, 2 pi).
double wrap_angle(double a);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace nestline
