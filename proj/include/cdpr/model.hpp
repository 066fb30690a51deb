#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace cdpr {

using Vec3 = Eigen::Vector3d;

/// Per-cable elasticity data, indexed like the tension bounds (driven cables
/// first, then counterbalance cables).
struct ElasticParams {
  std::vector<double> ea_N;      // modulus times cross-section
  std::vector<double> l0_min_m;  // unstretched length window
  std::vector<double> l0_max_m;
};

/// General cable robot with n driven cables and m counterbalance cables.
///
/// Points are expressed in the global frame (anchors, fixed pulleys) or the
/// platform frame (attachments, platform-side counterbalance points). The
/// platform orientation is held at identity, so platform-frame vectors are
/// added to the platform position directly.
struct RobotGeometry {
  std::vector<Vec3> anchors;              // a_i
  std::vector<Vec3> attachments;          // r_i
  std::vector<Vec3> cb_pulleys_fixed;     // f_j
  std::vector<Vec3> cb_pulleys_platform;  // c_j

  double platform_mass_kg = 0.0;
  double gravity_mps2 = 9.81;
  Eigen::Matrix3d platform_inertia = Eigen::Matrix3d::Zero();

  // Length n + m, driven cables first.
  std::vector<double> tension_min_N;
  std::vector<double> tension_max_N;

  int cb_cable_count = 0;
  std::optional<ElasticParams> elastic;

  std::size_t driven_count() const { return anchors.size(); }
  std::size_t cb_count() const { return cb_pulleys_fixed.size(); }
  std::size_t cable_count() const { return driven_count() + cb_count(); }
};

/// Throws ValidationError naming the first violated field.
void validate(const RobotGeometry& geom);

/// The four counterbalance layouts of the planar case study.
///   A: both counterbalance cables leave the platform top center.
///   B: two top attachments at +-w_bp, each to its same-side frame pulley.
///   C: as B with the attachments on the platform bottom.
///   D: as B with both cables rerouted over one central frame pulley.
enum class ConfigVariant { A, B, C, D };

char to_char(ConfigVariant v);
/// Accepts "A".."D" (case-insensitive); throws ValidationError otherwise.
ConfigVariant parse_variant(std::string_view text);

/// Frame, platform and pulley dimensions of the planar case study (metres).
struct PlanarLengths {
  double w = 0.0;     // frame width
  double h = 0.0;     // frame height
  double w_b = 0.0;   // platform width
  double w_p = 0.0;   // counterbalance pulley half-span
  double h_p = 0.0;   // counterbalance pulley height
  double h_bp = 0.0;  // platform-side counterbalance point height
  double w_bp = 0.0;  // platform-side counterbalance point half-span (B-D)
  double h_1 = 0.0;   // upper winch drop below the frame top
  double h_bu = 0.0;  // lower cable attachment height on the platform
};

/// Five-entry elastic data: cables 1-4 then the shared counterbalance entry.
struct PlanarElastic {
  std::array<double, 5> ea_N{};
  std::array<double, 5> l0_min_m{};
  std::array<double, 5> l0_max_m{};
};

struct PlanarCaseGeometry {
  PlanarLengths lengths;
  ConfigVariant variant = ConfigVariant::A;
  double platform_mass_kg = 0.0;
  double gravity_mps2 = 9.81;
  Eigen::Matrix3d platform_inertia = Eigen::Matrix3d::Zero();
  // Cables 1-4, then entry 5 which applies to every counterbalance cable.
  std::array<double, 5> tension_min_N{};
  std::array<double, 5> tension_max_N{};
  int cb_cable_count = 2;
  std::optional<PlanarElastic> elastic;
};

void validate(const PlanarCaseGeometry& geom);

/// Builds the four-cable planar robot for the requested counterbalance layout.
///
/// Driven cables: the upper pair leaves winches at [+-w/2, h/2 - h_1] and
/// attaches to the platform sides at mid-height; the lower pair leaves
/// [+-w/2, -h/2] and attaches at [+-w_b/2, h_bu]. These are the points whose
/// structure matrix is the closed form used for the case study.
RobotGeometry expand_planar(const PlanarCaseGeometry& geom, ConfigVariant variant);
inline RobotGeometry expand_planar(const PlanarCaseGeometry& geom) {
  return expand_planar(geom, geom.variant);
}

/// Copy of `geom` with a different pulley half-span.
PlanarCaseGeometry with_pulley_span(PlanarCaseGeometry geom, double w_p);

/// Platform position; orientation is fixed at identity.
struct PlatformPose {
  Vec3 position = Vec3::Zero();

  static PlatformPose planar(double x, double y) { return {Vec3(x, y, 0.0)}; }
};

/// Rectangular scan bounds with a uniform grid step. Samples sit at
/// x_min + i*step for i in [0, nx), likewise for y.
struct ScanRegion {
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
  double step = 0.05;

  std::size_t nx() const;
  std::size_t ny() const;
  double x_at(std::size_t i) const { return x_min + static_cast<double>(i) * step; }
  double y_at(std::size_t j) const { return y_min + static_cast<double>(j) * step; }
  double area_m2() const { return (x_max - x_min) * (y_max - y_min); }
};

void validate(const ScanRegion& region);

namespace presets {

/// Case-study parameters (platform 300 kg, 28 m x 5.7 m frame) with the
/// pulley span at its optimum of 13 m.
PlanarCaseGeometry table1(ConfigVariant variant = ConfigVariant::A);

/// [-12.5, 12.5] x [-2.85, 2.15] at 0.05 m.
ScanRegion table1_region();

}  // namespace presets

}  // namespace cdpr
