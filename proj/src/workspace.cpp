#include "cdpr/workspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cdpr/errors.hpp"
#include "parallel.hpp"

namespace cdpr {

namespace {

CostResult evaluate(const RobotGeometry& geom, const PlatformPose& pose, double T5,
                    const ScanOptions& options) {
  const FeasibilityOptions feasibility{options.enforce_t5_max};
  try {
    return options.mode == CostMode::elastic ? cost_elastic(geom, pose, T5, feasibility)
                                             : cost_rigid(geom, pose, T5, feasibility);
  } catch (const SingularPoseError&) {
    return {};
  }
}

WorkspaceGrid empty_grid(const ScanRegion& region) {
  validate(region);
  WorkspaceGrid grid;
  grid.region = region;
  grid.nx = region.nx();
  grid.ny = region.ny();
  grid.reachable.assign(grid.nx * grid.ny, 0);
  grid.solutions.assign(grid.nx * grid.ny, CellSolution{});
  return grid;
}

void check_mode(const RobotGeometry& geom, const ScanOptions& options) {
  if (options.mode == CostMode::elastic && !geom.elastic)
    throw ConfigurationError("elastic scan needs elastic cable parameters");
  if (geom.driven_count() != 4)
    throw ConfigurationError("workspace scan needs exactly four driven cables");
}

void finish(WorkspaceGrid& grid) {
  grid.area_m2 =
      static_cast<double>(grid.reachable_count()) * grid.region.step * grid.region.step;
}

/// Fills the cells that are still unreachable using tension T5.
void scan_into(WorkspaceGrid& grid, const RobotGeometry& geom, double T5,
               const ScanOptions& options) {
  detail::parallel_for(grid.ny, options.jobs, [&](std::size_t iy) {
    const double y = grid.region.y_at(iy);
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      const std::size_t idx = grid.index(ix, iy);
      if (grid.reachable[idx]) continue;
      const auto cost = evaluate(geom, PlatformPose::planar(grid.region.x_at(ix), y), T5, options);
      if (!cost.feasible_any) continue;
      grid.reachable[idx] = 1;
      grid.solutions[idx] = {cost.gamma, cost.T_opt_star, T5};
    }
  });
}

void append_number(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  line += buf;
}

void append_coordinate(std::string& line, double v, double step) {
  append_number(line, std::abs(v) < 1e-9 * step ? 0.0 : v);
}

}  // namespace

std::size_t WorkspaceGrid::reachable_count() const {
  return static_cast<std::size_t>(std::count(reachable.begin(), reachable.end(), 1));
}

WorkspaceGrid scan(const RobotGeometry& geom, const ScanRegion& region, double T5,
                   const ScanOptions& options) {
  check_mode(geom, options);
  auto grid = empty_grid(region);
  scan_into(grid, geom, T5, options);
  finish(grid);
  return grid;
}

WorkspaceGrid union_scan(const RobotGeometry& geom, const ScanRegion& region,
                         std::span<const double> t5_values, const ScanOptions& options) {
  if (t5_values.empty()) throw ValidationError("t5_values", "at least one tension is required");
  check_mode(geom, options);
  auto grid = empty_grid(region);
  for (double T5 : t5_values) scan_into(grid, geom, T5, options);
  finish(grid);
  return grid;
}

CoverageReport coverage(const WorkspaceGrid& grid, const ScanRegion& desired) {
  const auto& r = grid.region;
  const double eps = 1e-6 * r.step;
  if (desired.x_min < r.x_min - eps || desired.x_max > r.x_at(grid.nx - 1) + eps ||
      desired.y_min < r.y_min - eps || desired.y_max > r.y_at(grid.ny - 1) + eps ||
      desired.x_min > desired.x_max || desired.y_min > desired.y_max)
    throw ValidationError("desired", "desired region is not inside the scanned region");

  auto first_at_or_above = [&](double lo, double origin) {
    return static_cast<std::size_t>(std::max(0.0, std::ceil((lo - origin) / r.step - 1e-6)));
  };
  auto last_at_or_below = [&](double hi, double origin, std::size_t count) {
    const double k = std::floor((hi - origin) / r.step + 1e-6);
    return std::min(count - 1, static_cast<std::size_t>(std::max(0.0, k)));
  };
  const std::size_t ix0 = first_at_or_above(desired.x_min, r.x_min);
  const std::size_t ix1 = last_at_or_below(desired.x_max, r.x_min, grid.nx);
  const std::size_t iy0 = first_at_or_above(desired.y_min, r.y_min);
  const std::size_t iy1 = last_at_or_below(desired.y_max, r.y_min, grid.ny);
  if (ix0 > ix1 || iy0 > iy1)
    throw ValidationError("desired", "desired region contains no grid cells");

  std::size_t total = 0;
  std::size_t covered = 0;
  for (std::size_t iy = iy0; iy <= iy1; ++iy)
    for (std::size_t ix = ix0; ix <= ix1; ++ix) {
      ++total;
      covered += grid.at(ix, iy) ? 1 : 0;
    }

  CoverageReport report;
  report.reachable_area_m2 = grid.area_m2;
  report.desired_area_m2 = desired.area_m2();
  report.covered_fraction = static_cast<double>(covered) / static_cast<double>(total);
  report.corners_covered = {grid.at(ix0, iy0), grid.at(ix1, iy0), grid.at(ix0, iy1),
                            grid.at(ix1, iy1)};
  return report;
}

void write_grid_csv(std::ostream& out, const WorkspaceGrid& grid) {
  out << "x_m,y_m,reachable,gamma_N,T1_N,T2_N,T3_N,T4_N,T5_N\n";
  std::string line;
  for (std::size_t iy = 0; iy < grid.ny; ++iy) {
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      const std::size_t idx = grid.index(ix, iy);
      line.clear();
      append_coordinate(line, grid.region.x_at(ix), grid.region.step);
      line += ',';
      append_coordinate(line, grid.region.y_at(iy), grid.region.step);
      line += grid.reachable[idx] ? ",1," : ",0,";
      if (grid.reachable[idx]) {
        const auto& s = grid.solutions[idx];
        append_number(line, s.gamma);
        for (int k = 0; k < 4; ++k) {
          line += ',';
          append_number(line, s.T(k));
        }
        line += ',';
        append_number(line, s.t5);
      } else {
        line += ",,,,,";
      }
      line += '\n';
      out << line;
    }
  }
}

}  // namespace cdpr
