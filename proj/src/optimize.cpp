#include "cdpr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "cdpr/errors.hpp"

namespace cdpr {

namespace {

std::vector<double> sorted_unique(std::span<const double> values, const char* field) {
  if (values.empty()) throw ValidationError(field, "at least one value is required");
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end())
    throw ValidationError(field, "values must be distinct");
  for (double v : out)
    if (!std::isfinite(v)) throw ValidationError(field, "values must be finite");
  return out;
}

void pick_argmax(SweepResult& sweep) {
  const SweepSample* best = nullptr;
  for (const auto& s : sweep.samples)
    if (!best || s.area_m2 > best->area_m2) best = &s;
  sweep.argmax_value = best->value;
  sweep.argmax_area_m2 = best->area_m2;
}

SweepSample sample(const RobotGeometry& geom, double value, double T5, const ScanRegion& region,
                   const SweepOptions& options) {
  const auto grid = scan(geom, region, T5, options.scan);
  return {value, grid.area_m2, coverage(grid, options.desired.value_or(region))};
}

SweepResult t5_sweep(const RobotGeometry& geom, const std::vector<double>& t5_values,
                     const ScanRegion& region, const SweepOptions& options) {
  SweepResult out;
  out.parameter = "t5";
  for (double T5 : t5_values) out.samples.push_back(sample(geom, T5, T5, region, options));
  pick_argmax(out);
  return out;
}

std::string format_g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void write_rows(std::ostream& out, const std::string& prefix, const SweepResult& sweep) {
  for (const auto& s : sweep.samples)
    out << prefix << sweep.parameter << ',' << format_g6(s.value) << ',' << format_g6(s.area_m2)
        << ',' << format_g6(s.coverage.covered_fraction) << '\n';
}

}  // namespace

const SweepSample* SweepResult::find(double value) const {
  for (const auto& s : samples)
    if (s.value == value) return &s;
  return nullptr;
}

PulleySpanSweep sweep_wp(const PlanarCaseGeometry& geom_template,
                         std::span<const double> wp_values, std::span<const double> t5_values,
                         const ScanRegion& region, const SweepOptions& options) {
  const auto wps = sorted_unique(wp_values, "wp_values");
  const auto t5s = sorted_unique(t5_values, "t5_values");
  const double half_width = geom_template.lengths.w / 2;
  for (double wp : wps)
    if (!(wp > 0.0 && wp <= half_width))
      throw ValidationError("wp_values", "pulley span must lie in (0, w/2]");

  std::vector<RobotGeometry> robots;
  robots.reserve(wps.size());
  for (double wp : wps) robots.push_back(expand_planar(with_pulley_span(geom_template, wp)));

  PulleySpanSweep out;
  bool first = true;
  for (double T5 : t5s) {
    SweepResult sweep;
    sweep.parameter = "wp";
    for (std::size_t i = 0; i < wps.size(); ++i)
      sweep.samples.push_back(sample(robots[i], wps[i], T5, region, options));
    pick_argmax(sweep);
    if (first || sweep.argmax_area_m2 > out.aggregate_max_area_m2) {
      out.aggregate_max_area_m2 = sweep.argmax_area_m2;
      out.aggregate_argmax_wp = sweep.argmax_value;
      out.aggregate_argmax_t5 = T5;
      first = false;
    }
    out.per_t5.emplace_back(T5, std::move(sweep));
  }
  return out;
}

SweepResult sweep_t5(const RobotGeometry& geom, std::span<const double> t5_values,
                     const ScanRegion& region, const SweepOptions& options) {
  return t5_sweep(geom, sorted_unique(t5_values, "t5_values"), region, options);
}

std::vector<std::pair<ConfigVariant, double>> ConfigComparison::ranking_at(double t5) const {
  std::vector<std::pair<ConfigVariant, double>> out;
  for (const auto& v : variants)
    if (const auto* s = v.sweep.find(t5)) out.emplace_back(v.variant, s->area_m2);
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

ConfigComparison compare_configs(const PlanarCaseGeometry& geom_template,
                                 std::span<const ConfigVariant> variants, double wp,
                                 std::span<const double> t5_values, const ScanRegion& region,
                                 const SweepOptions& options) {
  if (variants.empty()) throw ValidationError("variants", "at least one variant is required");
  const auto t5s = sorted_unique(t5_values, "t5_values");
  const auto geom = with_pulley_span(geom_template, wp);

  ConfigComparison out;
  out.wp = wp;
  for (ConfigVariant v : variants)
    out.variants.push_back({v, t5_sweep(expand_planar(geom, v), t5s, region, options)});
  return out;
}

Counterweight counterweight(double T5, int cb_cable_count, double gravity_mps2) {
  if (!(T5 >= 0.0)) throw ValidationError("t5", "must be non-negative");
  if (cb_cable_count < 1) throw ValidationError("cb_cable_count", "must be at least 1");
  if (!(gravity_mps2 > 0.0)) throw ValidationError("gravity_mps2", "must be positive");
  const double force = cb_cable_count * T5;
  return {force, force / gravity_mps2};
}

std::vector<double> arange_inclusive(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw ValidationError("range", "expected lo <= hi, step > 0");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = lo + static_cast<double>(i) * step;
  return out;
}

std::vector<double> default_wp_values() { return arange_inclusive(8.0, 14.0, 0.5); }
std::vector<double> default_t5_values() { return arange_inclusive(0.0, 5000.0, 250.0); }

double percent_increase(const SweepResult& sweep, double at, double baseline) {
  const auto* a = sweep.find(at);
  const auto* b = sweep.find(baseline);
  if (!a || !b) throw ValidationError("t5", "sweep has no sample at the requested tension");
  return 100.0 * (a->area_m2 / b->area_m2 - 1.0);
}

void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
  out << "param,value,area_m2,covered_fraction\n";
  write_rows(out, "", sweep);
}

void write_wp_sweep_csv(std::ostream& out, const PulleySpanSweep& sweep) {
  out << "t5_N,param,value,area_m2,covered_fraction\n";
  for (const auto& [t5, s] : sweep.per_t5) write_rows(out, format_g6(t5) + ",", s);
}

void write_comparison_csv(std::ostream& out, const ConfigComparison& comparison) {
  out << "variant,param,value,area_m2,covered_fraction\n";
  for (const auto& v : comparison.variants)
    write_rows(out, std::string(1, to_char(v.variant)) + ",", v.sweep);
}

}  // namespace cdpr
