#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdpr/errors.hpp"
#include "cdpr/geometry_io.hpp"
#include "cdpr/kinematics.hpp"
#include "cdpr/optimize.hpp"
#include "cdpr/statics.hpp"
#include "cdpr/workspace.hpp"

namespace cdpr::cli {

namespace {

using json = nlohmann::ordered_json;

std::string exact(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

std::string fixed(double v, int decimals) {
  if (std::abs(v) < 0.5 * std::pow(10.0, -decimals)) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    return {};
  std::string hex;
  char byte[3];
  for (unsigned i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

/// "a,b,c" or "lo:step:hi".
std::vector<double> parse_values(const std::string& text, const char* flag) {
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size())
      throw ValidationError(flag, "cannot parse number '" + s + "'");
    return v;
  };
  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, sep);) parts.push_back(item);
    return parts;
  };
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ValidationError(flag, "range must be lo:step:hi");
    return arange_inclusive(to_double(parts[0]), to_double(parts[2]), to_double(parts[1]));
  }
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(to_double(p));
  if (out.empty()) throw ValidationError(flag, "no values given");
  return out;
}

unsigned jobs_from_env() {
  if (const char* env = std::getenv("CDPR_JOBS")) {
    try {
      return static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      throw ValidationError("CDPR_JOBS", "must be a non-negative integer");
    }
  }
  return 0;
}

struct Source {
  std::string file;
  std::string preset = "table1";
};

struct Loaded {
  GeometryDocument doc;
  json manifest;
};

Loaded load(const Source& src) {
  Loaded out;
  if (!src.file.empty()) {
    out.doc = load_geometry(src.file);
    out.manifest = {{"path", src.file}, {"sha256", sha256_hex(read_file(src.file))}};
    return out;
  }
  ConfigVariant variant = ConfigVariant::A;
  if (src.preset.rfind("table1", 0) != 0)
    throw ValidationError("preset", "unknown preset '" + src.preset + "'");
  const std::string suffix = src.preset.substr(6);
  if (!suffix.empty()) {
    if (suffix.size() != 2 || suffix[0] != '-')
      throw ValidationError("preset", "unknown preset '" + src.preset + "'");
    variant = parse_variant(suffix.substr(1));
  }
  out.doc.geometry = presets::table1(variant);
  out.doc.scan = presets::table1_region();
  out.manifest = {{"preset", src.preset}};
  return out;
}

ScanRegion region_of(const GeometryDocument& doc, std::optional<double> step) {
  ScanRegion r = doc.scan.value_or(presets::table1_region());
  if (step) r.step = *step;
  validate(r);
  return r;
}

const PlanarCaseGeometry& planar_of(const GeometryDocument& doc, const char* command) {
  const auto* planar = std::get_if<PlanarCaseGeometry>(&doc.geometry);
  if (!planar)
    throw ConfigurationError(std::string(command) + " needs a planar_case geometry file");
  return *planar;
}

json corners_json(const CoverageReport& c) {
  return {{"bottom_left", c.corners_covered[0]},
          {"bottom_right", c.corners_covered[1]},
          {"top_left", c.corners_covered[2]},
          {"top_right", c.corners_covered[3]}};
}

json coverage_json(const CoverageReport& c) {
  return {{"area_m2", c.reachable_area_m2},
          {"desired_area_m2", c.desired_area_m2},
          {"covered_fraction", c.covered_fraction},
          {"corners_covered", corners_json(c)}};
}

json region_json(const ScanRegion& r) {
  return {{"x_min", r.x_min}, {"x_max", r.x_max}, {"y_min", r.y_min},
          {"y_max", r.y_max}, {"step", r.step}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("out", "cannot write '" + path + "'");
  f << text;
}

struct Outputs {
  std::string csv_path;
  std::string summary_path() const { return csv_path + ".summary.json"; }
  std::string manifest_path() const { return csv_path + ".manifest.json"; }
};

void write_outputs(const Outputs& o, const std::string& csv, const json& summary,
                   json manifest) {
  write_text(o.csv_path, csv);
  write_text(o.summary_path(), summary.dump(2) + "\n");
  manifest["outputs"] = {o.csv_path, o.summary_path()};
  write_text(o.manifest_path(), manifest.dump(2) + "\n");
}

class Runner {
 public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(const std::vector<std::string>& args);

 private:
  void add_source(CLI::App* cmd) {
    auto* file = cmd->add_option("--geometry,-g", source_.file, "Geometry file (JSON)");
    cmd->add_option("--preset", source_.preset, "Built-in geometry: table1, table1-A .. table1-D")
        ->excludes(file);
    cmd->add_option("--jobs,-j", jobs_, "Worker threads (default: CDPR_JOBS or all cores)");
  }

  json manifest(const std::string& command, const Loaded& loaded, json parameters) const {
    return {{"command", command},
            {"argv", args_},
            {"tool_version", kToolVersion},
            {"geometry", loaded.manifest},
            {"parameters", std::move(parameters)},
            {"wall_time_s", std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                          started_)
                                .count()}};
  }

  ScanOptions scan_options() const {
    ScanOptions o;
    o.jobs = jobs_;
    o.mode = mode_ == "elastic" ? CostMode::elastic : CostMode::rigid;
    o.enforce_t5_max = !ignore_t5max_;
    return o;
  }

  void cmd_ik();
  void cmd_tensions();
  void cmd_workspace();
  void cmd_sweep();
  void cmd_compare();
  void cmd_active_t5();

  std::ostream& out_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point started_ = std::chrono::steady_clock::now();

  Source source_;
  unsigned jobs_ = 0;
  double x_ = 0.0;
  double y_ = 0.0;
  double t5_ = 3000.0;
  std::optional<double> step_;
  double wp_ = 13.0;
  std::string mode_ = "rigid";
  std::string out_path_;
  std::string param_;
  std::string values_;
  std::string t5_list_ = "1000,2000,3000,4000,5000";
  std::string variants_ = "A,B,C,D";
  std::string t5_range_ = "0:250:26000";
  bool ignore_t5max_ = false;
  double gain_at_ = 3000.0;
  std::vector<std::string> args_;
};

void Runner::cmd_ik() {
  const auto loaded = load(source_);
  const auto geom = loaded.doc.robot();
  const ScanRegion r = region_of(loaded.doc, std::nullopt);
  if (x_ < r.x_min || x_ > r.x_max || y_ < r.y_min || y_ > r.y_max)
    err_ << "warning: pose (" << x_ << ", " << y_ << ") is outside the scan region\n";

  const auto state = cable_state(geom, PlatformPose::planar(x_, y_));
  for (std::size_t i = 0; i < state.l_len.size(); ++i)
    out_ << "cable " << i + 1 << ": length_m=" << fixed(state.l_len[i], 4) << " unit=["
         << fixed(state.u_hat[i].x(), 6) << ", " << fixed(state.u_hat[i].y(), 6) << ", "
         << fixed(state.u_hat[i].z(), 6) << "]\n";
  for (std::size_t j = 0; j < state.d_len.size(); ++j)
    out_ << "counterbalance " << j + 1 << ": length_m=" << fixed(state.d_len[j], 4) << " unit=["
         << fixed(state.v_hat[j].x(), 6) << ", " << fixed(state.v_hat[j].y(), 6) << ", "
         << fixed(state.v_hat[j].z(), 6) << "]\n";
}

void Runner::cmd_tensions() {
  const auto loaded = load(source_);
  const auto geom = loaded.doc.robot();
  const auto pose = PlatformPose::planar(x_, y_);
  const FeasibilityOptions opts{!ignore_t5max_};
  const auto cost = mode_ == "elastic" ? cost_elastic(geom, pose, t5_, opts)
                                       : cost_rigid(geom, pose, t5_, opts);

  for (const auto& c : cost.candidates) {
    out_ << "candidate " << c.candidate << ": ";
    if (!c.valid) {
      out_ << "invalid (near-singular, rcond=" << exact(c.rcond) << ")\n";
      continue;
    }
    out_ << "T_N=[";
    for (int k = 0; k < 4; ++k) out_ << (k ? ", " : "") << exact(c.T(k));
    out_ << "] norm_N=" << exact(c.norm) << " feasible=" << (c.feasible ? "true" : "false")
         << "\n";
  }
  out_ << "t5_within_bounds=" << (cost.t5_within_bounds ? "true" : "false") << "\n";
  out_ << "feasible_any=" << (cost.feasible_any ? "true" : "false") << "\n";
  if (cost.feasible_any) {
    out_ << "gamma_N=" << exact(cost.gamma) << "\n";
    out_ << "T_opt_star_N=[";
    for (int k = 0; k < 4; ++k) out_ << (k ? ", " : "") << exact(cost.T_opt_star(k));
    out_ << "] (candidate " << cost.best_candidate << ")\n";
  }
  try {
    out_ << "oracle=" << (nullspace_oracle(geom, pose, t5_, opts) ? "true" : "false") << "\n";
  } catch (const SingularConfigurationError&) {
    out_ << "oracle=undefined (structure matrix rank deficient)\n";
  }
}

void Runner::cmd_workspace() {
  const auto loaded = load(source_);
  const auto geom = loaded.doc.robot();
  const ScanRegion region = region_of(loaded.doc, step_);
  const auto grid = scan(geom, region, t5_, scan_options());
  const auto cov = coverage(grid, region);

  out_ << "area_m2=" << exact(grid.area_m2) << "\n";
  out_ << "covered_fraction=" << exact(cov.covered_fraction) << "\n";
  if (out_path_.empty()) return;

  std::ostringstream csv;
  write_grid_csv(csv, grid);
  json summary = coverage_json(cov);
  summary["t5_N"] = t5_;
  summary["mode"] = mode_;
  summary["region"] = region_json(region);
  summary["cells"] = {grid.nx, grid.ny};
  write_outputs({out_path_}, csv.str(), summary,
                manifest("workspace", loaded,
                         {{"t5_N", t5_}, {"step_m", region.step}, {"mode", mode_},
                          {"ignore_t5max", ignore_t5max_}}));
}

void Runner::cmd_sweep() {
  const auto loaded = load(source_);
  const ScanRegion region = region_of(loaded.doc, step_);
  SweepOptions opts;
  opts.scan = scan_options();

  std::ostringstream csv;
  json summary;
  json params = {{"param", param_}, {"step_m", region.step}, {"mode", mode_}};

  if (param_ == "t5") {
    const auto values = values_.empty() ? default_t5_values() : parse_values(values_, "values");
    const auto sweep = sweep_t5(loaded.doc.robot(), values, region, opts);
    write_sweep_csv(csv, sweep);
    summary = {{"param", "t5"},
               {"argmax_value", sweep.argmax_value},
               {"argmax_area_m2", sweep.argmax_area_m2}};
    const double baseline = sweep.samples.front().value;
    summary["baseline_value"] = baseline;
    summary["percent_increase_vs_baseline"] =
        percent_increase(sweep, sweep.argmax_value, baseline);
    summary["baseline_note"] = "increase of the argmax area over the lowest sampled T5";
    if (sweep.find(gain_at_) && sweep.find(0.0)) {
      summary["gain"] = {
          {"t5_N", gain_at_},
          {"percent_increase_vs_t5_0", percent_increase(sweep, gain_at_, 0.0)},
          {"note", "area(T5) / area(T5=0) - 1 at fixed geometry; the baseline is an assumption"}};
    }
    if (const auto* s = loaded.doc.is_planar_case()
                            ? &planar_of(loaded.doc, "sweep")
                            : nullptr) {
      const auto cw = counterweight(sweep.argmax_value, s->cb_cable_count, s->gravity_mps2);
      summary["counterweight"] = {{"force_N", cw.force_N}, {"mass_kg", cw.mass_kg}};
    }
    params["values"] = values;
    out_ << "argmax_t5_N=" << exact(sweep.argmax_value)
         << " area_m2=" << exact(sweep.argmax_area_m2) << "\n";
  } else if (param_ == "wp") {
    const auto& planar = planar_of(loaded.doc, "sweep --param wp");
    const auto values = values_.empty() ? default_wp_values() : parse_values(values_, "values");
    const auto t5s = parse_values(t5_list_, "t5");
    const auto sweep = sweep_wp(planar, values, t5s, region, opts);
    write_wp_sweep_csv(csv, sweep);
    json per_t5 = json::array();
    for (const auto& [t5, s] : sweep.per_t5)
      per_t5.push_back(
          {{"t5_N", t5}, {"argmax_value", s.argmax_value}, {"argmax_area_m2", s.argmax_area_m2}});
    summary = {{"param", "wp"},
               {"per_t5", per_t5},
               {"aggregate_argmax_wp", sweep.aggregate_argmax_wp},
               {"aggregate_argmax_t5_N", sweep.aggregate_argmax_t5},
               {"aggregate_max_area_m2", sweep.aggregate_max_area_m2}};
    params["values"] = values;
    params["t5_N"] = t5s;
    out_ << "aggregate_argmax_wp_m=" << exact(sweep.aggregate_argmax_wp)
         << " at t5_N=" << exact(sweep.aggregate_argmax_t5)
         << " area_m2=" << exact(sweep.aggregate_max_area_m2) << "\n";
  } else {
    throw ValidationError("param", "expected wp or t5");
  }

  if (!out_path_.empty())
    write_outputs({out_path_}, csv.str(), summary, manifest("sweep", loaded, params));
}

void Runner::cmd_compare() {
  const auto loaded = load(source_);
  const auto& planar = planar_of(loaded.doc, "compare");
  const ScanRegion region = region_of(loaded.doc, step_);
  std::vector<ConfigVariant> variants;
  std::stringstream ss(variants_);
  for (std::string item; std::getline(ss, item, ',');) variants.push_back(parse_variant(item));
  const auto values = values_.empty() ? default_t5_values() : parse_values(values_, "values");

  SweepOptions opts;
  opts.scan = scan_options();
  const auto cmp = compare_configs(planar, variants, wp_, values, region, opts);

  json ranking = json::array();
  for (const auto& [v, area] : cmp.ranking_at(t5_)) {
    ranking.push_back({{"variant", std::string(1, to_char(v))}, {"area_m2", area}});
    out_ << to_char(v) << " area_m2=" << exact(area) << "\n";
  }
  json per_variant = json::array();
  for (const auto& v : cmp.variants)
    per_variant.push_back({{"variant", std::string(1, to_char(v.variant))},
                           {"argmax_t5_N", v.sweep.argmax_value},
                           {"argmax_area_m2", v.sweep.argmax_area_m2}});

  if (out_path_.empty()) return;
  std::ostringstream csv;
  write_comparison_csv(csv, cmp);
  const json summary = {
      {"wp_m", wp_}, {"ranking_t5_N", t5_}, {"ranking", ranking}, {"per_variant", per_variant}};
  write_outputs({out_path_}, csv.str(), summary,
                manifest("compare", loaded,
                         {{"variants", variants_}, {"wp_m", wp_}, {"values", values},
                          {"ranking_t5_N", t5_}, {"step_m", region.step}}));
}

void Runner::cmd_active_t5() {
  const auto loaded = load(source_);
  const auto geom = loaded.doc.robot();
  const ScanRegion region = region_of(loaded.doc, step_);
  const auto values = parse_values(t5_range_, "t5-range");
  const auto grid = union_scan(geom, region, values, scan_options());
  const auto cov = coverage(grid, region);

  out_ << "area_m2=" << exact(grid.area_m2) << "\n";
  out_ << "covered_fraction=" << exact(cov.covered_fraction) << "\n";
  if (out_path_.empty()) return;

  std::ostringstream csv;
  write_grid_csv(csv, grid);
  json summary = coverage_json(cov);
  summary["t5_range_N"] = {values.front(), values.back()};
  summary["t5_count"] = values.size();
  summary["ignore_t5max"] = ignore_t5max_;
  summary["region"] = region_json(region);
  write_outputs({out_path_}, csv.str(), summary,
                manifest("active-t5", loaded,
                         {{"t5_range", t5_range_}, {"ignore_t5max", ignore_t5max_},
                          {"step_m", region.step}}));
}

int Runner::run(const std::vector<std::string>& args) {
  CLI::App app{"Workspace analysis for cable robots with counterbalance pulleys", "cdpr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  args_ = args;
  try {
    jobs_ = jobs_from_env();
  } catch (const ValidationError& e) {
    err_ << "error: invalid input: " << e.what() << "\n";
    return kExitInputError;
  }

  auto* ik = app.add_subcommand("ik", "Cable lengths and unit vectors at a pose");
  add_source(ik);
  ik->add_option("--x", x_, "Platform x (m)")->required();
  ik->add_option("--y", y_, "Platform y (m)")->required();

  auto* tensions = app.add_subcommand("tensions", "Clamped tension candidates at a pose");
  add_source(tensions);
  tensions->add_option("--x", x_, "Platform x (m)")->required();
  tensions->add_option("--y", y_, "Platform y (m)")->required();
  tensions->add_option("--t5", t5_, "Counterbalance tension (N)")->required();
  tensions->add_option("--mode", mode_)->check(CLI::IsMember({"rigid", "elastic"}));
  tensions->add_flag("--ignore-t5max", ignore_t5max_);

  auto* workspace = app.add_subcommand("workspace", "Reachable-workspace grid scan");
  add_source(workspace);
  workspace->add_option("--t5", t5_, "Counterbalance tension (N)")->capture_default_str();
  workspace->add_option("--step", step_, "Grid step (m); defaults to the file's scan step");
  workspace->add_option("--mode", mode_)->check(CLI::IsMember({"rigid", "elastic"}));
  workspace->add_option("--out,-o", out_path_, "Grid CSV path");
  workspace->add_flag("--ignore-t5max", ignore_t5max_);

  auto* sweep = app.add_subcommand("sweep", "Area versus pulley span or counterbalance tension");
  add_source(sweep);
  sweep->add_option("--param", param_)->required()->check(CLI::IsMember({"wp", "t5"}));
  sweep->add_option("--values", values_, "Comma list or lo:step:hi");
  sweep->add_option("--t5", t5_list_, "Tensions for a wp sweep (comma list or lo:step:hi)")->capture_default_str();
  sweep->add_option("--step", step_, "Grid step (m)");
  sweep->add_option("--gain-at", gain_at_, "Tension whose gain over T5 = 0 is reported (N)")
      ->capture_default_str();
  sweep->add_option("--mode", mode_)->check(CLI::IsMember({"rigid", "elastic"}));
  sweep->add_option("--out,-o", out_path_, "Sweep CSV path");

  auto* compare = app.add_subcommand("compare", "Counterbalance layout comparison");
  add_source(compare);
  compare->add_option("--variants", variants_, "Comma list of A, B, C, D")->capture_default_str();
  compare->add_option("--wp", wp_, "Pulley half-span (m)")->capture_default_str();
  compare->add_option("--values", values_, "Tensions (comma list or lo:step:hi)");
  compare->add_option("--rank-t5", t5_, "Tension used for the ranking (N)")->capture_default_str();
  compare->add_option("--step", step_, "Grid step (m)");
  compare->add_option("--out,-o", out_path_, "Comparison CSV path");

  auto* active = app.add_subcommand("active-t5", "Union of workspaces over a tension range");
  add_source(active);
  active->add_option("--t5-range", t5_range_, "lo:step:hi or comma list")->capture_default_str();
  active->add_flag("--ignore-t5max", ignore_t5max_);
  active->add_option("--step", step_, "Grid step (m)");
  active->add_option("--out,-o", out_path_, "Union grid CSV path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out_ << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out_ << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err_ << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  const std::vector<std::pair<CLI::App*, std::function<void()>>> commands = {
      {ik, [this] { cmd_ik(); }},
      {tensions, [this] { cmd_tensions(); }},
      {workspace, [this] { cmd_workspace(); }},
      {sweep, [this] { cmd_sweep(); }},
      {compare, [this] { cmd_compare(); }},
      {active, [this] { cmd_active_t5(); }},
  };

  try {
    for (const auto& [cmd, action] : commands)
      if (cmd->parsed()) action();
  } catch (const SingularPoseError& e) {
    err_ << "error: singular pose: " << e.what() << "\n";
    return kExitSingularPose;
  } catch (const SingularConfigurationError& e) {
    err_ << "error: singular configuration: " << e.what() << "\n";
    return kExitSingularPose;
  } catch (const ValidationError& e) {
    err_ << "error: invalid input: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ParseError& e) {
    err_ << "error: cannot parse geometry: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ConfigurationError& e) {
    err_ << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return Runner(out, err).run(args);
}

}  // namespace cdpr::cli
