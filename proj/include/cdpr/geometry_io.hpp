#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "cdpr/model.hpp"

namespace cdpr {

/// Contents of one geometry file: either the dimensioned planar case or a
/// fully general point list, plus an optional scan region.
struct GeometryDocument {
  std::variant<PlanarCaseGeometry, RobotGeometry> geometry;
  std::optional<ScanRegion> scan;

  bool is_planar_case() const { return std::holds_alternative<PlanarCaseGeometry>(geometry); }
  /// Expanded robot model (planar cases are expanded with their own variant).
  RobotGeometry robot() const;
};

/// Parses the JSON geometry schema. Throws ParseError for malformed text or
/// missing/mistyped keys, ValidationError for invariant violations.
GeometryDocument parse_geometry(std::string_view text);
GeometryDocument load_geometry(const std::filesystem::path& path);

/// Writes the same schema. Numbers are emitted in shortest round-trip form,
/// so parse(serialize(doc)) reproduces every numeric field exactly.
std::string serialize_geometry(const GeometryDocument& doc);
void save_geometry(const GeometryDocument& doc, const std::filesystem::path& path);

}  // namespace cdpr
