#include "cdpr/model.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "cdpr/errors.hpp"

namespace cdpr {

namespace {

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ValidationError(field, message);
}

bool finite(const Vec3& v) { return v.allFinite(); }

void validate_bounds(std::size_t count, const std::vector<double>& lo,
                     const std::vector<double>& hi) {
  require(lo.size() == count, "tension_min_N",
          "expected " + std::to_string(count) + " entries, got " + std::to_string(lo.size()));
  require(hi.size() == count, "tension_max_N",
          "expected " + std::to_string(count) + " entries, got " + std::to_string(hi.size()));
  for (std::size_t k = 0; k < count; ++k) {
    require(std::isfinite(lo[k]) && lo[k] >= 0.0, "tension_min_N",
            "entry " + std::to_string(k + 1) + " must be a non-negative number");
    require(std::isfinite(hi[k]) && hi[k] >= lo[k], "tension_max_N",
            "entry " + std::to_string(k + 1) + " is below its lower bound");
  }
}

void validate_elastic(std::size_t count, const ElasticParams& e) {
  require(e.ea_N.size() == count, "elastic.EA_N", "expected " + std::to_string(count) + " entries");
  require(e.l0_min_m.size() == count, "elastic.l0_min_m",
          "expected " + std::to_string(count) + " entries");
  require(e.l0_max_m.size() == count, "elastic.l0_max_m",
          "expected " + std::to_string(count) + " entries");
  for (std::size_t k = 0; k < count; ++k) {
    require(std::isfinite(e.ea_N[k]) && e.ea_N[k] > 0.0, "elastic.EA_N", "must be positive");
    require(std::isfinite(e.l0_min_m[k]) && e.l0_min_m[k] >= 0.0, "elastic.l0_min_m",
            "must be non-negative");
    require(std::isfinite(e.l0_max_m[k]) && e.l0_max_m[k] >= e.l0_min_m[k], "elastic.l0_max_m",
            "is below l0_min_m");
  }
}

template <std::size_t N>
std::vector<double> widen(const std::array<double, N>& five, std::size_t cb) {
  std::vector<double> out(five.begin(), five.begin() + 4);
  for (std::size_t j = 0; j < cb; ++j) out.push_back(five[4]);
  return out;
}

}  // namespace

void validate(const RobotGeometry& geom) {
  const std::size_t n = geom.anchors.size();
  const std::size_t m = geom.cb_pulleys_fixed.size();
  require(n >= 1, "anchors_m", "at least one driven cable is required");
  require(geom.attachments.size() == n, "attachments_m", "must match the anchor count");
  require(geom.cb_pulleys_platform.size() == m, "cb_pulleys_platform_m",
          "must match the fixed pulley count");
  for (const auto& p : geom.anchors) require(finite(p), "anchors_m", "non-finite coordinate");
  for (const auto& p : geom.attachments)
    require(finite(p), "attachments_m", "non-finite coordinate");
  for (const auto& p : geom.cb_pulleys_fixed)
    require(finite(p), "cb_pulleys_fixed_m", "non-finite coordinate");
  for (const auto& p : geom.cb_pulleys_platform)
    require(finite(p), "cb_pulleys_platform_m", "non-finite coordinate");
  require(std::isfinite(geom.platform_mass_kg) && geom.platform_mass_kg > 0.0, "mass_kg",
          "must be positive");
  require(std::isfinite(geom.gravity_mps2) && geom.gravity_mps2 > 0.0, "gravity_mps2",
          "must be positive");
  require(geom.platform_inertia.allFinite(), "inertia_kgm2", "non-finite entry");
  validate_bounds(n + m, geom.tension_min_N, geom.tension_max_N);
  require(geom.cb_cable_count >= 0, "cb_cable_count", "must be non-negative");
  if (geom.elastic) validate_elastic(n + m, *geom.elastic);
}

char to_char(ConfigVariant v) {
  switch (v) {
    case ConfigVariant::A: return 'A';
    case ConfigVariant::B: return 'B';
    case ConfigVariant::C: return 'C';
    case ConfigVariant::D: return 'D';
  }
  return '?';
}

ConfigVariant parse_variant(std::string_view text) {
  if (text.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(text[0]))) {
      case 'A': return ConfigVariant::A;
      case 'B': return ConfigVariant::B;
      case 'C': return ConfigVariant::C;
      case 'D': return ConfigVariant::D;
      default: break;
    }
  }
  throw ValidationError("variant", "expected one of A, B, C, D, got '" + std::string(text) + "'");
}

void validate(const PlanarCaseGeometry& geom) {
  const auto& L = geom.lengths;
  const std::pair<const char*, double> positive[] = {
      {"lengths_m.w", L.w},       {"lengths_m.h", L.h},       {"lengths_m.w_b", L.w_b},
      {"lengths_m.w_p", L.w_p},   {"lengths_m.h_p", L.h_p},   {"lengths_m.h_bp", L.h_bp},
      {"lengths_m.w_bp", L.w_bp}, {"lengths_m.h_1", L.h_1},   {"lengths_m.h_bu", L.h_bu},
  };
  for (const auto& [name, value] : positive)
    require(std::isfinite(value) && value > 0.0, name, "must be positive");
  require(L.w_b < L.w, "lengths_m.w_b", "platform wider than frame");
  require(L.h_1 + L.h_bu <= L.h, "lengths_m.h_1", "platform does not fit inside the frame height");
  require(std::isfinite(geom.platform_mass_kg) && geom.platform_mass_kg > 0.0, "mass_kg",
          "must be positive");
  require(std::isfinite(geom.gravity_mps2) && geom.gravity_mps2 > 0.0, "gravity_mps2",
          "must be positive");
  require(geom.platform_inertia.allFinite(), "inertia_kgm2", "non-finite entry");
  validate_bounds(5, {geom.tension_min_N.begin(), geom.tension_min_N.end()},
                  {geom.tension_max_N.begin(), geom.tension_max_N.end()});
  require(geom.cb_cable_count >= 1, "cb_cable_count", "must be at least 1");
  if (geom.elastic) {
    const auto& e = *geom.elastic;
    validate_elastic(5, {{e.ea_N.begin(), e.ea_N.end()},
                         {e.l0_min_m.begin(), e.l0_min_m.end()},
                         {e.l0_max_m.begin(), e.l0_max_m.end()}});
  }
}

RobotGeometry expand_planar(const PlanarCaseGeometry& geom, ConfigVariant variant) {
  validate(geom);
  const auto& L = geom.lengths;

  RobotGeometry out;
  out.anchors = {
      {-L.w / 2, L.h / 2 - L.h_1, 0.0},
      {L.w / 2, L.h / 2 - L.h_1, 0.0},
      {L.w / 2, -L.h / 2, 0.0},
      {-L.w / 2, -L.h / 2, 0.0},
  };
  out.attachments = {
      {-L.w_b / 2, 0.0, 0.0},
      {L.w_b / 2, 0.0, 0.0},
      {L.w_b / 2, L.h_bu, 0.0},
      {-L.w_b / 2, L.h_bu, 0.0},
  };

  switch (variant) {
    case ConfigVariant::A:
      out.cb_pulleys_fixed = {{-L.w_p, L.h_p, 0.0}, {L.w_p, L.h_p, 0.0}};
      out.cb_pulleys_platform = {{0.0, L.h_bp, 0.0}, {0.0, L.h_bp, 0.0}};
      break;
    case ConfigVariant::B:
      out.cb_pulleys_fixed = {{-L.w_p, L.h_p, 0.0}, {L.w_p, L.h_p, 0.0}};
      out.cb_pulleys_platform = {{-L.w_bp, L.h_bp, 0.0}, {L.w_bp, L.h_bp, 0.0}};
      break;
    case ConfigVariant::C:
      out.cb_pulleys_fixed = {{-L.w_p, L.h_p, 0.0}, {L.w_p, L.h_p, 0.0}};
      out.cb_pulleys_platform = {{-L.w_bp, -L.h_bp, 0.0}, {L.w_bp, -L.h_bp, 0.0}};
      break;
    case ConfigVariant::D:
      // Past the central pulley the cables continue to the side pulleys, but
      // only the segment touching the platform contributes to its wrench.
      out.cb_pulleys_fixed = {{0.0, L.h_p, 0.0}, {0.0, L.h_p, 0.0}};
      out.cb_pulleys_platform = {{-L.w_bp, L.h_bp, 0.0}, {L.w_bp, L.h_bp, 0.0}};
      break;
  }

  const std::size_t m = out.cb_pulleys_fixed.size();
  out.platform_mass_kg = geom.platform_mass_kg;
  out.gravity_mps2 = geom.gravity_mps2;
  out.platform_inertia = geom.platform_inertia;
  out.tension_min_N = widen(geom.tension_min_N, m);
  out.tension_max_N = widen(geom.tension_max_N, m);
  out.cb_cable_count = geom.cb_cable_count;
  if (geom.elastic) {
    out.elastic = ElasticParams{widen(geom.elastic->ea_N, m), widen(geom.elastic->l0_min_m, m),
                                widen(geom.elastic->l0_max_m, m)};
  }
  validate(out);
  return out;
}

PlanarCaseGeometry with_pulley_span(PlanarCaseGeometry geom, double w_p) {
  geom.lengths.w_p = w_p;
  return geom;
}

std::size_t ScanRegion::nx() const {
  return static_cast<std::size_t>(std::floor((x_max - x_min) / step + 1e-9)) + 1;
}

std::size_t ScanRegion::ny() const {
  return static_cast<std::size_t>(std::floor((y_max - y_min) / step + 1e-9)) + 1;
}

void validate(const ScanRegion& region) {
  require(std::isfinite(region.x_min) && std::isfinite(region.x_max) && region.x_min < region.x_max,
          "scan.x_min", "x_min must be below x_max");
  require(std::isfinite(region.y_min) && std::isfinite(region.y_max) && region.y_min < region.y_max,
          "scan.y_min", "y_min must be below y_max");
  require(std::isfinite(region.step) && region.step > 0.0, "scan.step", "must be positive");
}

namespace presets {

PlanarCaseGeometry table1(ConfigVariant variant) {
  PlanarCaseGeometry g;
  g.lengths = {.w = 28.0,
               .h = 5.70,
               .w_b = 1.90,
               .w_p = 13.0,
               .h_p = 3.246,
               .h_bp = 0.45,
               .w_bp = 0.95,
               .h_1 = 0.45,
               .h_bu = 0.45};
  g.variant = variant;
  g.platform_mass_kg = 300.0;
  g.gravity_mps2 = 9.81;
  g.tension_min_N = {0.0, 0.0, 0.0, 0.0, 0.0};
  g.tension_max_N = {16000.0, 16000.0, 12000.0, 12000.0, 16000.0};
  g.cb_cable_count = 2;
  return g;
}

ScanRegion table1_region() { return {-12.5, 12.5, -2.85, 2.15, 0.05}; }

}  // namespace presets

}  // namespace cdpr
