#include "nestline/instance.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"
#include "nestline/errors.hpp"
#include "nestline/seeding.hpp"

namespace nestline {
namespace {

using nlohmann::json;

constexpr double kTwoPi = 6.28318530717958647692;

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

double number(const json& j, const std::string& where) {
  if (!j.is_number()) parse_error(where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) parse_error(where + ": number is not finite");
  return v;
}

Polygon polygon(const json& j, const std::string& where) {
  if (!j.is_array()) parse_error(where + ": expected an array of [x, y] pairs");
  Polygon out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const json& p = j[k];
    if (!p.is_array() || p.size() != 2) parse_error(where + ": vertex " + std::to_string(k) + " is not [x, y]");
    out.push_back({number(p[0], where), number(p[1], where)});
  }
  return out;
}

json polygon_json(const Polygon& poly) {
  json arr = json::array();
  for (const Point& p : poly) arr.push_back({p.x, p.y});
  return arr;
}

const json& field(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) parse_error(where + ": missing field '" + key + "'");
  return *it;
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    parse_error(std::string("malformed JSON: ") + e.what());
  }
}

void validate(const NestingInstance& inst) {
  if (!(inst.strip_width > 0.0)) throw Error(ErrorCode::ValidationError, "strip_width must be positive");
  if (inst.raster_scale && !(*inst.raster_scale > 0.0)) {
    throw Error(ErrorCode::ValidationError, "raster_scale must be positive");
  }
  if (inst.pieces.empty()) throw Error(ErrorCode::EmptyInstance, "instance has no pieces");
  std::set<std::string> ids;
  for (const auto& p : inst.pieces) {
    if (p.id.empty()) throw Error(ErrorCode::ValidationError, "piece id must not be empty");
    if (!ids.insert(p.id).second) throw Error(ErrorCode::ValidationError, "duplicate piece id '" + p.id + "'");
    if (p.count < 1) throw Error(ErrorCode::ValidationError, "piece '" + p.id + "': count must be >= 1");
  }
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

NestingInstance parse_instance_text(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) parse_error("instance must be a JSON object");
  NestingInstance inst;
  const json& name = field(doc, "name", "instance");
  if (!name.is_string()) parse_error("instance: 'name' must be a string");
  inst.name = name.get<std::string>();
  inst.strip_width = number(field(doc, "strip_width", "instance"), "strip_width");
  if (const auto it = doc.find("raster_scale"); it != doc.end() && !it->is_null()) {
    inst.raster_scale = number(*it, "raster_scale");
  }
  const json& pieces = field(doc, "pieces", "instance");
  if (!pieces.is_array()) parse_error("instance: 'pieces' must be an array");
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const json& pj = pieces[k];
    const std::string where = "piece " + std::to_string(k);
    if (!pj.is_object()) parse_error(where + ": expected an object");
    PieceRecord rec;
    const json& id = field(pj, "id", where);
    if (!id.is_string()) parse_error(where + ": 'id' must be a string");
    rec.id = id.get<std::string>();
    const std::string named = "piece '" + rec.id + "'";
    if (const auto it = pj.find("count"); it != pj.end()) {
      if (!it->is_number_integer()) parse_error(named + ": 'count' must be an integer");
      rec.count = it->get<int>();
    }
    rec.vertices = polygon(field(pj, "vertices", named), named + " vertices");
    if (const auto it = pj.find("parts"); it != pj.end()) {
      if (!it->is_array()) parse_error(named + ": 'parts' must be an array of polygons");
      for (std::size_t j = 0; j < it->size(); ++j) {
        rec.parts.push_back(polygon((*it)[j], named + " part " + std::to_string(j)));
      }
    }
    inst.pieces.push_back(std::move(rec));
  }
  validate(inst);
  (void)expand_pieces(inst);  // geometry validation
  return inst;
}

NestingInstance parse_instance(const std::filesystem::path& path) {
  return parse_instance_text(read_text_file(path));
}

std::string write_instance_text(const NestingInstance& inst) {
  json doc = json::object();
  doc["name"] = inst.name;
  doc["strip_width"] = inst.strip_width;
  if (inst.raster_scale) doc["raster_scale"] = *inst.raster_scale;
  json pieces = json::array();
  for (const auto& p : inst.pieces) {
    json pj = json::object();
    pj["id"] = p.id;
    if (p.count != 1) pj["count"] = p.count;
    pj["vertices"] = polygon_json(p.vertices);
    if (!p.parts.empty()) {
      json parts = json::array();
      for (const auto& part : p.parts) parts.push_back(polygon_json(part));
      pj["parts"] = std::move(parts);
    }
    pieces.push_back(std::move(pj));
  }
  doc["pieces"] = std::move(pieces);
  return doc.dump(2) + "\n";
}

void write_instance(const NestingInstance& instance, const std::filesystem::path& path) {
  write_text_file(path, write_instance_text(instance));
}

std::vector<Piece> expand_pieces(const NestingInstance& inst) {
  validate(inst);
  std::vector<Piece> out;
  for (const auto& rec : inst.pieces) {
    Piece base;
    try {
      base = normalize_piece(rec.id, rec.vertices, rec.parts);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ValidationError) throw;
      throw Error(ErrorCode::ValidationError, "piece '" + rec.id + "': " + e.what());
    }
    const Bounds b = bounds(base.outline);
    const double slack = 1e-9 * std::max(1.0, inst.strip_width);
    if (b.max_y - b.min_y > inst.strip_width + slack && b.max_x - b.min_x > inst.strip_width + slack) {
      throw Error(ErrorCode::ValidationError,
                  "piece '" + rec.id + "' is wider than the strip at every rotation");
    }
    for (int k = 1; k <= rec.count; ++k) {
      Piece copy = base;
      if (rec.count > 1) copy.id = rec.id + "#" + std::to_string(k);
      out.push_back(std::move(copy));
    }
  }
  return out;
}

double effective_raster_scale(const NestingInstance& instance, std::optional<double> override_scale) {
  if (override_scale) return *override_scale;
  if (instance.raster_scale) return *instance.raster_scale;
  return default_raster_scale(instance.name);
}

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

Layout make_layout(std::string_view instance_name, double strip_width, double length,
                   std::span<const Piece> pieces, std::span<const Placement> placements,
                   std::optional<std::span<const SeparationLineVar>> lines) {
  if (pieces.size() != placements.size()) {
    throw Error(ErrorCode::DimensionMismatch, "placement count does not match piece count");
  }
  Layout layout;
  layout.instance = std::string(instance_name);
  layout.strip_width = strip_width;
  layout.length = length;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    layout.placements.push_back({pieces[i].id, placements[i]});
  }
  if (lines) layout.lines = std::vector<SeparationLineVar>(lines->begin(), lines->end());
  return layout;
}

std::string write_layout_text(const Layout& layout) {
  json doc = json::object();
  doc["instance"] = layout.instance;
  doc["strip_width"] = layout.strip_width;
  doc["length"] = layout.length;
  json pls = json::array();
  for (const auto& p : layout.placements) {
    pls.push_back({{"id", p.id},
                   {"tx", p.placement.tx},
                   {"ty", p.placement.ty},
                   {"theta", wrap_angle(p.placement.theta)}});
  }
  doc["placements"] = std::move(pls);
  if (layout.lines) {
    json lines = json::array();
    for (const auto& l : *layout.lines) {
      lines.push_back({{"x_bar", l.x_bar}, {"y_bar", l.y_bar}, {"alpha", wrap_angle(l.alpha)}});
    }
    doc["lines"] = std::move(lines);
  }
  return doc.dump(2) + "\n";
}

void write_layout(const Layout& layout, const std::filesystem::path& path) {
  write_text_file(path, write_layout_text(layout));
}

Layout parse_layout_text(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) parse_error("layout must be a JSON object");
  Layout layout;
  if (const auto it = doc.find("instance"); it != doc.end() && it->is_string()) {
    layout.instance = it->get<std::string>();
  }
  if (const auto it = doc.find("strip_width"); it != doc.end()) {
    layout.strip_width = number(*it, "strip_width");
  }
  layout.length = number(field(doc, "length", "layout"), "length");
  const json& pls = field(doc, "placements", "layout");
  if (!pls.is_array()) parse_error("layout: 'placements' must be an array");
  for (std::size_t k = 0; k < pls.size(); ++k) {
    const json& pj = pls[k];
    const std::string where = "placement " + std::to_string(k);
    if (!pj.is_object()) parse_error(where + ": expected an object");
    const json& id = field(pj, "id", where);
    if (!id.is_string()) parse_error(where + ": 'id' must be a string");
    layout.placements.push_back({id.get<std::string>(),
                                 {number(field(pj, "tx", where), where + " tx"),
                                  number(field(pj, "ty", where), where + " ty"),
                                  number(field(pj, "theta", where), where + " theta")}});
  }
  if (const auto it = doc.find("lines"); it != doc.end() && !it->is_null()) {
    if (!it->is_array()) parse_error("layout: 'lines' must be an array");
    std::vector<SeparationLineVar> lines;
    for (std::size_t k = 0; k < it->size(); ++k) {
      const json& lj = (*it)[k];
      const std::string where = "line " + std::to_string(k);
      if (!lj.is_object()) parse_error(where + ": expected an object");
      lines.push_back({number(field(lj, "x_bar", where), where), number(field(lj, "y_bar", where), where),
                       number(field(lj, "alpha", where), where)});
    }
    layout.lines = std::move(lines);
  }
  return layout;
}

Layout parse_layout(const std::filesystem::path& path) {
  return parse_layout_text(read_text_file(path));
}

std::vector<Placement> placements_for(const Layout& layout, std::span<const Piece> pieces) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t k = 0; k < layout.placements.size(); ++k) {
    if (!index.emplace(layout.placements[k].id, k).second) {
      throw Error(ErrorCode::ValidationError,
                  "layout places piece '" + layout.placements[k].id + "' twice");
    }
  }
  std::vector<Placement> out;
  for (const auto& p : pieces) {
    const auto it = index.find(p.id);
    if (it == index.end()) throw Error(ErrorCode::ValidationError, "layout misses piece '" + p.id + "'");
    out.push_back(layout.placements[it->second].placement);
    index.erase(it);
  }
  if (!index.empty()) {
    throw Error(ErrorCode::ValidationError,
                "layout places unknown piece '" + index.begin()->first + "'");
  }
  return out;
}

}  // namespace nestline
