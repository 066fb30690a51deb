#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cdpr/model.hpp"
#include "cdpr/workspace.hpp"

namespace cdpr {

struct SweepSample {
  double value = 0.0;
  double area_m2 = 0.0;
  CoverageReport coverage;
};

/// Workspace area as a function of one design parameter. Samples are sorted
/// by value; the argmax takes the lowest value among equal areas.
struct SweepResult {
  std::string parameter;
  std::vector<SweepSample> samples;
  double argmax_value = 0.0;
  double argmax_area_m2 = 0.0;

  /// Sample at `value` (exact match), if any.
  const SweepSample* find(double value) const;
};

struct SweepOptions {
  ScanOptions scan;
  /// Region used for coverage figures; defaults to the scan region.
  std::optional<ScanRegion> desired;
};

/// Pulley-span sweep repeated for each counterbalance tension.
struct PulleySpanSweep {
  std::vector<std::pair<double, SweepResult>> per_t5;  // (T5, sweep over w_p)
  /// Location of the largest area over the whole (w_p, T5) product.
  double aggregate_argmax_wp = 0.0;
  double aggregate_argmax_t5 = 0.0;
  double aggregate_max_area_m2 = 0.0;
};

/// Throws ValidationError for empty or duplicated value lists and for pulley
/// spans outside (0, w/2].
PulleySpanSweep sweep_wp(const PlanarCaseGeometry& geom_template,
                         std::span<const double> wp_values, std::span<const double> t5_values,
                         const ScanRegion& region, const SweepOptions& options = {});

SweepResult sweep_t5(const RobotGeometry& geom, std::span<const double> t5_values,
                     const ScanRegion& region, const SweepOptions& options = {});

struct VariantSweep {
  ConfigVariant variant = ConfigVariant::A;
  SweepResult sweep;
};

struct ConfigComparison {
  double wp = 0.0;
  std::vector<VariantSweep> variants;

  /// Variants ordered by area at `t5` (largest first, input order on ties).
  /// Variants without a sample at `t5` are omitted.
  std::vector<std::pair<ConfigVariant, double>> ranking_at(double t5) const;
};

ConfigComparison compare_configs(const PlanarCaseGeometry& geom_template,
                                 std::span<const ConfigVariant> variants, double wp,
                                 std::span<const double> t5_values, const ScanRegion& region,
                                 const SweepOptions& options = {});

/// Counterweight for tension T5 shared by `cb_cable_count` cables, reported
/// both as a force and as the equivalent mass under gravity g.
struct Counterweight {
  double force_N = 0.0;
  double mass_kg = 0.0;
};

Counterweight counterweight(double T5, int cb_cable_count, double gravity_mps2 = 9.81);

/// lo, lo+step, ... up to hi inclusive (values computed as lo + i*step).
std::vector<double> arange_inclusive(double lo, double hi, double step);
std::vector<double> default_wp_values();  // 8.0 .. 14.0 step 0.5
std::vector<double> default_t5_values();  // 0 .. 5000 step 250

/// area(at) / area(baseline) - 1, in percent.
double percent_increase(const SweepResult& sweep, double at, double baseline);

/// CSV `param,value,area_m2,covered_fraction`.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);
/// CSV `t5_N,param,value,area_m2,covered_fraction`, one block per tension.
void write_wp_sweep_csv(std::ostream& out, const PulleySpanSweep& sweep);
/// CSV `variant,param,value,area_m2,covered_fraction`.
void write_comparison_csv(std::ostream& out, const ConfigComparison& comparison);

}  // namespace cdpr
