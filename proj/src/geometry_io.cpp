#include "cdpr/geometry_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cdpr/errors.hpp"

namespace cdpr {

namespace {

using nlohmann::json;

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

const json& member(const json& obj, const std::string& parent, const std::string& key) {
  if (!obj.is_object()) throw ParseError("'" + (parent.empty() ? "<root>" : parent) + "' must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing field '" + join(parent, key) + "'");
  return *it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError("field '" + path + "' must be a number");
  return v.get<double>();
}

double number_at(const json& obj, const std::string& parent, const std::string& key) {
  return number(member(obj, parent, key), join(parent, key));
}

std::vector<double> numbers(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError("field '" + path + "' must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(number(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

template <std::size_t N>
std::array<double, N> fixed_numbers(const json& v, const std::string& path) {
  const auto values = numbers(v, path);
  if (values.size() != N)
    throw ValidationError(path, "expected " + std::to_string(N) + " entries, got " +
                                    std::to_string(values.size()));
  std::array<double, N> out{};
  std::copy(values.begin(), values.end(), out.begin());
  return out;
}

std::vector<Vec3> points(const json& v, const std::string& path) {
  if (!v.is_array()) throw ParseError("field '" + path + "' must be an array of 3-vectors");
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto p = fixed_numbers<3>(v[i], path + "[" + std::to_string(i) + "]");
    out.emplace_back(p[0], p[1], p[2]);
  }
  return out;
}

Eigen::Matrix3d inertia(const json& obj) {
  auto it = obj.find("inertia_kgm2");
  if (it == obj.end()) return Eigen::Matrix3d::Zero();
  if (!it->is_array() || it->size() != 3) throw ParseError("field 'inertia_kgm2' must be 3x3");
  Eigen::Matrix3d out;
  for (int r = 0; r < 3; ++r) {
    const auto row = fixed_numbers<3>((*it)[r], "inertia_kgm2[" + std::to_string(r) + "]");
    for (int c = 0; c < 3; ++c) out(r, c) = row[c];
  }
  return out;
}

int integer_at(const json& obj, const std::string& key) {
  const auto& v = member(obj, "", key);
  if (!v.is_number_integer()) throw ParseError("field '" + key + "' must be an integer");
  return v.get<int>();
}

ScanRegion parse_scan(const json& s) {
  ScanRegion r{number_at(s, "scan", "x_min"), number_at(s, "scan", "x_max"),
               number_at(s, "scan", "y_min"), number_at(s, "scan", "y_max"),
               number_at(s, "scan", "step")};
  validate(r);
  return r;
}

PlanarCaseGeometry parse_planar(const json& doc) {
  PlanarCaseGeometry g;
  const auto& L = member(doc, "", "lengths_m");
  g.lengths = {number_at(L, "lengths_m", "w"),    number_at(L, "lengths_m", "h"),
               number_at(L, "lengths_m", "w_b"),  number_at(L, "lengths_m", "w_p"),
               number_at(L, "lengths_m", "h_p"),  number_at(L, "lengths_m", "h_bp"),
               number_at(L, "lengths_m", "w_bp"), number_at(L, "lengths_m", "h_1"),
               number_at(L, "lengths_m", "h_bu")};
  if (auto it = doc.find("variant"); it != doc.end()) {
    if (!it->is_string()) throw ParseError("field 'variant' must be a string");
    g.variant = parse_variant(it->get<std::string>());
  }
  g.platform_mass_kg = number_at(doc, "", "mass_kg");
  g.gravity_mps2 = number_at(doc, "", "gravity_mps2");
  g.platform_inertia = inertia(doc);
  g.tension_min_N = fixed_numbers<5>(member(doc, "", "tension_min_N"), "tension_min_N");
  g.tension_max_N = fixed_numbers<5>(member(doc, "", "tension_max_N"), "tension_max_N");
  g.cb_cable_count = integer_at(doc, "cb_cable_count");
  if (auto it = doc.find("elastic"); it != doc.end()) {
    PlanarElastic e;
    e.ea_N = fixed_numbers<5>(member(*it, "elastic", "EA_N"), "elastic.EA_N");
    e.l0_min_m = fixed_numbers<5>(member(*it, "elastic", "l0_min_m"), "elastic.l0_min_m");
    e.l0_max_m = fixed_numbers<5>(member(*it, "elastic", "l0_max_m"), "elastic.l0_max_m");
    g.elastic = e;
  }
  validate(g);
  return g;
}

RobotGeometry parse_general(const json& doc) {
  RobotGeometry g;
  g.anchors = points(member(doc, "", "anchors_m"), "anchors_m");
  g.attachments = points(member(doc, "", "attachments_m"), "attachments_m");
  if (doc.contains("cb_pulleys_fixed_m"))
    g.cb_pulleys_fixed = points(doc["cb_pulleys_fixed_m"], "cb_pulleys_fixed_m");
  if (doc.contains("cb_pulleys_platform_m"))
    g.cb_pulleys_platform = points(doc["cb_pulleys_platform_m"], "cb_pulleys_platform_m");
  g.platform_mass_kg = number_at(doc, "", "mass_kg");
  g.gravity_mps2 = number_at(doc, "", "gravity_mps2");
  g.platform_inertia = inertia(doc);
  g.tension_min_N = numbers(member(doc, "", "tension_min_N"), "tension_min_N");
  g.tension_max_N = numbers(member(doc, "", "tension_max_N"), "tension_max_N");
  g.cb_cable_count = integer_at(doc, "cb_cable_count");
  if (auto it = doc.find("elastic"); it != doc.end()) {
    g.elastic = ElasticParams{numbers(member(*it, "elastic", "EA_N"), "elastic.EA_N"),
                              numbers(member(*it, "elastic", "l0_min_m"), "elastic.l0_min_m"),
                              numbers(member(*it, "elastic", "l0_max_m"), "elastic.l0_max_m")};
  }
  validate(g);
  return g;
}

template <std::size_t N>
json to_json(const std::array<double, N>& a) {
  return json(std::vector<double>(a.begin(), a.end()));
}

json to_json(const std::vector<Vec3>& pts) {
  json out = json::array();
  for (const auto& p : pts) out.push_back({p.x(), p.y(), p.z()});
  return out;
}

json to_json(const Eigen::Matrix3d& m) {
  json out = json::array();
  for (int r = 0; r < 3; ++r) out.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return out;
}

json planar_to_json(const PlanarCaseGeometry& g) {
  const auto& L = g.lengths;
  json doc;
  doc["kind"] = "planar_case";
  doc["variant"] = std::string(1, to_char(g.variant));
  doc["lengths_m"] = {{"w", L.w},       {"h", L.h},       {"w_b", L.w_b},
                      {"w_p", L.w_p},   {"h_p", L.h_p},   {"h_bp", L.h_bp},
                      {"w_bp", L.w_bp}, {"h_1", L.h_1},   {"h_bu", L.h_bu}};
  doc["mass_kg"] = g.platform_mass_kg;
  doc["gravity_mps2"] = g.gravity_mps2;
  if (!g.platform_inertia.isZero(0.0)) doc["inertia_kgm2"] = to_json(g.platform_inertia);
  doc["tension_min_N"] = to_json(g.tension_min_N);
  doc["tension_max_N"] = to_json(g.tension_max_N);
  doc["cb_cable_count"] = g.cb_cable_count;
  if (g.elastic) {
    doc["elastic"] = {{"EA_N", to_json(g.elastic->ea_N)},
                      {"l0_min_m", to_json(g.elastic->l0_min_m)},
                      {"l0_max_m", to_json(g.elastic->l0_max_m)}};
  }
  return doc;
}

json general_to_json(const RobotGeometry& g) {
  json doc;
  doc["kind"] = "general";
  doc["anchors_m"] = to_json(g.anchors);
  doc["attachments_m"] = to_json(g.attachments);
  doc["cb_pulleys_fixed_m"] = to_json(g.cb_pulleys_fixed);
  doc["cb_pulleys_platform_m"] = to_json(g.cb_pulleys_platform);
  doc["mass_kg"] = g.platform_mass_kg;
  doc["gravity_mps2"] = g.gravity_mps2;
  if (!g.platform_inertia.isZero(0.0)) doc["inertia_kgm2"] = to_json(g.platform_inertia);
  doc["tension_min_N"] = g.tension_min_N;
  doc["tension_max_N"] = g.tension_max_N;
  doc["cb_cable_count"] = g.cb_cable_count;
  if (g.elastic) {
    doc["elastic"] = {{"EA_N", g.elastic->ea_N},
                      {"l0_min_m", g.elastic->l0_min_m},
                      {"l0_max_m", g.elastic->l0_max_m}};
  }
  return doc;
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + byte, '\n'));
}

}  // namespace

RobotGeometry GeometryDocument::robot() const {
  if (const auto* planar = std::get_if<PlanarCaseGeometry>(&geometry)) return expand_planar(*planar);
  return std::get<RobotGeometry>(geometry);
}

GeometryDocument parse_geometry(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // nlohmann reports the byte just past the offending token.
    throw ParseError(e.what(), line_of(text, e.byte > 0 ? e.byte - 1 : 0));
  }
  if (!doc.is_object()) throw ParseError("geometry document must be a JSON object");

  const auto& kind = member(doc, "", "kind");
  if (!kind.is_string()) throw ParseError("field 'kind' must be a string");

  GeometryDocument out;
  if (kind == "planar_case") {
    out.geometry = parse_planar(doc);
  } else if (kind == "general") {
    out.geometry = parse_general(doc);
  } else {
    throw ParseError("unknown kind '" + kind.get<std::string>() +
                     "' (expected planar_case or general)");
  }
  if (auto it = doc.find("scan"); it != doc.end()) out.scan = parse_scan(*it);
  return out;
}

GeometryDocument load_geometry(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open geometry file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_geometry(buf.str());
}

std::string serialize_geometry(const GeometryDocument& doc) {
  json out = std::visit(
      [](const auto& g) {
        if constexpr (std::is_same_v<std::decay_t<decltype(g)>, PlanarCaseGeometry>)
          return planar_to_json(g);
        else
          return general_to_json(g);
      },
      doc.geometry);
  if (doc.scan) {
    out["scan"] = {{"x_min", doc.scan->x_min},
                   {"x_max", doc.scan->x_max},
                   {"y_min", doc.scan->y_min},
                   {"y_max", doc.scan->y_max},
                   {"step", doc.scan->step}};
  }
  return out.dump(2) + "\n";
}

void save_geometry(const GeometryDocument& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write geometry file '" + path.string() + "'");
  out << serialize_geometry(doc);
}

}  // namespace cdpr
