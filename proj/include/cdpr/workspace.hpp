#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "cdpr/model.hpp"
#include "cdpr/statics.hpp"

namespace cdpr {

enum class CostMode { rigid, elastic };

struct ScanOptions {
  CostMode mode = CostMode::rigid;
  bool enforce_t5_max = true;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned jobs = 0;
};

/// Solution recorded for a reachable cell (gamma is NaN for unreachable cells).
struct CellSolution {
  double gamma = std::numeric_limits<double>::quiet_NaN();
  Tensions T = Tensions::Constant(std::numeric_limits<double>::quiet_NaN());
  double t5 = std::numeric_limits<double>::quiet_NaN();
};

/// Reachability over a ScanRegion. Cells are stored row by row in y, with x
/// varying fastest: index = iy * nx + ix.
struct WorkspaceGrid {
  ScanRegion region;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<std::uint8_t> reachable;
  std::vector<CellSolution> solutions;
  double area_m2 = 0.0;

  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx + ix; }
  bool at(std::size_t ix, std::size_t iy) const { return reachable[index(ix, iy)] != 0; }
  std::size_t reachable_count() const;
};

/// Grid scan: a cell is reachable when the chosen cost function reports a
/// feasible tension set there. Singular cells count as unreachable. The
/// result does not depend on the number of workers.
WorkspaceGrid scan(const RobotGeometry& geom, const ScanRegion& region, double T5,
                   const ScanOptions& options = {});

/// Cell-wise union of scans over a set of counterbalance tensions. The
/// recorded solution is the one for the first tension (in the given order)
/// that reaches the cell.
WorkspaceGrid union_scan(const RobotGeometry& geom, const ScanRegion& region,
                         std::span<const double> t5_values, const ScanOptions& options = {});

/// Corner order: bottom-left, bottom-right, top-left, top-right.
struct CoverageReport {
  double reachable_area_m2 = 0.0;
  double desired_area_m2 = 0.0;
  double covered_fraction = 0.0;
  std::array<bool, 4> corners_covered{};
};

/// Fraction of the desired rectangle's grid cells that are reachable. Throws
/// ValidationError when `desired` is not inside the grid region.
CoverageReport coverage(const WorkspaceGrid& grid, const ScanRegion& desired);

/// CSV with header x_m,y_m,reachable,gamma_N,T1_N,T2_N,T3_N,T4_N,T5_N, six
/// significant digits, empty solution fields for unreachable cells.
void write_grid_csv(std::ostream& out, const WorkspaceGrid& grid);

}  // namespace cdpr
