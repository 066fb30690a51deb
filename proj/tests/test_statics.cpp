#include <doctest.h>

#include "cdpr/errors.hpp"
#include "cdpr/kinematics.hpp"
#include "cdpr/statics.hpp"
#include "support.hpp"

using namespace cdpr;

namespace {

const RobotGeometry kTable1 = expand_planar(presets::table1());
const ScanRegion kRegion = presets::table1_region();

double residual(const StructureMatrix& A, const Tensions& T, const Wrench3& u) {
  return (A * T - u).norm();
}

RobotGeometry with_elastic(RobotGeometry g, double ea, double l0_min, double l0_max) {
  const std::size_t k = g.cable_count();
  g.elastic = ElasticParams{std::vector<double>(k, ea), std::vector<double>(k, l0_min),
                            std::vector<double>(k, l0_max)};
  return g;
}

}  // namespace

TEST_CASE("gravity wrench") {
  CHECK(gravity_wrench(kTable1) == Wrench3(0, 2943, 0));
  auto g = kTable1;
  g.platform_mass_kg = 0.0;
  CHECK(gravity_wrench(g).isZero(0.0));
  g.platform_mass_kg = 600.0;
  CHECK(gravity_wrench(g) == Wrench3(0, 2 * 2943, 0));
}

TEST_CASE("equilibrium input") {
  const auto origin = PlatformPose::planar(0, 0);
  CHECK(equilibrium_input(kTable1, origin, 0.0).u == Wrench3(0, 2943, 0));

  const auto in = equilibrium_input(kTable1, origin, 3000.0);
  CHECK(std::abs(in.u.x()) <= 1e-9);
  CHECK(std::abs(in.u.z()) <= 1e-9);
  const double eta = std::hypot(13.0, -2.796);
  CHECK(in.u.y() == doctest::Approx(2943 - 2 * 3000 * (3.246 - 0.45) / eta).epsilon(1e-14));
  CHECK(in.F.size() == 2);
  CHECK(in.F(0) == 3000.0);

  CHECK_THROWS_AS(equilibrium_input(kTable1, origin, -1.0), ValidationError);
}

TEST_CASE("tension analysis needs the planar four-cable robot") {
  auto g = kTable1;
  g.anchors[0].z() = 0.5;
  CHECK_THROWS_AS(cost_rigid(g, PlatformPose::planar(0, 0), 0.0), ConfigurationError);
  g = kTable1;
  g.anchors.pop_back();
  g.attachments.pop_back();
  CHECK_THROWS_AS(candidate_tensions(g, PlatformPose::planar(0, 0), 0.0), ConfigurationError);
}

TEST_CASE("candidates at the center mirror each other") {
  const auto c = candidate_tensions(kTable1, PlatformPose::planar(0, 0), 0.0);
  REQUIRE(c[0].valid);
  REQUIRE(c[1].valid);
  CHECK(c[0].T(0) == 16000.0);
  CHECK(c[1].T(1) == 16000.0);
  CHECK(c[0].T(1) == doctest::Approx(c[1].T(0)).epsilon(1e-12));
  CHECK(c[0].T(2) == doctest::Approx(c[1].T(3)).epsilon(1e-12));
}

TEST_CASE("each candidate clamps its own cable and solves the system") {
  testing::Rng rng(21);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto pose = testing::random_pose(rng, kRegion);
    const double T5 = rng.uniform(0, 8000);
    const auto s = planar_statics(kTable1, pose, T5);
    const auto cands = candidate_tensions(kTable1, s);
    for (const auto& c : cands) {
      if (!c.valid) continue;
      ++checked;
      CHECK(c.T(c.candidate - 1) == kTable1.tension_max_N[c.candidate - 1]);
      CHECK(residual(s.A_l, c.T, s.input.u) <= 1e-9 * std::max(s.input.u.norm(), 1.0));
      CHECK(c.norm == doctest::Approx(c.T.norm()));
      bool in_bounds = true;
      for (int k = 0; k < 4; ++k)
        in_bounds = in_bounds && c.T(k) >= -1e-6 && c.T(k) <= kTable1.tension_max_N[k] + 1e-6;
      CHECK(c.feasible == in_bounds);
    }
  }
  CHECK(checked > 7000);
}

TEST_CASE("gamma is the largest feasible candidate norm") {
  testing::Rng rng(22);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto pose = testing::random_pose(rng, kRegion);
    const double T5 = rng.uniform(0, 6000);
    const auto r = cost_rigid(kTable1, pose, T5);
    double best = -1.0;
    int best_k = 0;
    for (const auto& c : r.candidates)
      if (c.feasible && c.norm > best + 1e-6) {
        best = c.norm;
        best_k = c.candidate;
      }
    CHECK(r.feasible_any == (best_k != 0));
    if (r.feasible_any) {
      CHECK(r.gamma == best);
      CHECK(r.best_candidate == best_k);
      CHECK(r.T_opt_star == r.candidates[best_k - 1].T);
    }
  }
}

TEST_CASE("cost at the center and outside the reachable set") {
  const auto r = cost_rigid(kTable1, PlatformPose::planar(0, 0), 3000.0);
  CHECK(r.feasible_any);
  CHECK(r.t5_within_bounds);
  CHECK(r.best_candidate == 1);  // candidates 1 and 2 tie by symmetry

  CHECK_FALSE(cost_rigid(kTable1, PlatformPose::planar(0, 0), 16001.0).feasible_any);
  CHECK_FALSE(cost_rigid(kTable1, PlatformPose::planar(0, 0), 20000.0).feasible_any);
  CHECK_FALSE(cost_rigid(kTable1, PlatformPose::planar(0, 10.0), 0.0).feasible_any);
  CHECK_FALSE(cost_rigid(kTable1, PlatformPose::planar(0, -20.0), 0.0).feasible_any);
}

TEST_CASE("T5 above its bound is rejected everywhere unless the check is lifted") {
  testing::Rng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const auto pose = testing::random_pose(rng, kRegion);
    CHECK_FALSE(cost_rigid(kTable1, pose, rng.uniform(16000.01, 30000)).feasible_any);
  }
  const auto lifted = cost_rigid(kTable1, PlatformPose::planar(0, 1.5), 17000.0, {false});
  CHECK(lifted.t5_within_bounds);
}

TEST_CASE("doubling the mass doubles every candidate at zero counterbalance") {
  testing::Rng rng(24);
  auto heavy = kTable1;
  heavy.platform_mass_kg *= 2;
  for (int trial = 0; trial < 300; ++trial) {
    const auto pose = testing::random_pose(rng, kRegion);
    // Clamped entries do not scale, so compare the unclamped solution of the
    // same system with the clamp doubled too.
    auto heavy_clamp = heavy;
    for (std::size_t k = 0; k < 4; ++k) heavy_clamp.tension_max_N[k] *= 2;
    const auto a = candidate_tensions(kTable1, pose, 0.0);
    const auto b = candidate_tensions(heavy_clamp, pose, 0.0);
    for (int k = 0; k < 4; ++k) {
      if (!a[k].valid) continue;
      CHECK((b[k].T - 2 * a[k].T).norm() <= 1e-9 * a[k].T.norm());
    }
  }
}

TEST_CASE("candidates are affine in T5") {
  testing::Rng rng(25);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pose = testing::random_pose(rng, kRegion);
    const double t0 = rng.uniform(0, 4000);
    const double dt = rng.uniform(10, 4000);
    const auto a = candidate_tensions(kTable1, pose, t0);
    const auto b = candidate_tensions(kTable1, pose, t0 + dt);
    const auto c = candidate_tensions(kTable1, pose, t0 + 2 * dt);
    for (int k = 0; k < 4; ++k) {
      if (!a[k].valid) continue;
      const Tensions mid = 0.5 * (a[k].T + c[k].T);
      CHECK((b[k].T - mid).norm() <= 1e-9 * std::max(b[k].T.norm(), 1.0));
    }
  }
}

TEST_CASE("null-space solver") {
  testing::Rng rng(26);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pose = testing::random_pose(rng, kRegion);
    const double T5 = rng.uniform(0, 6000);
    const auto s = planar_statics(kTable1, pose, T5);
    const auto split = nullspace_split(kTable1, pose, T5);
    CHECK(split.direction.norm() == doctest::Approx(1.0));
    CHECK(split.direction.sum() >= 0.0);
    CHECK((s.A_l * split.direction).norm() <= 1e-12);
    const double base = split.particular.norm();
    for (double alpha : {-1e4, -3.0, 0.0, 0.5, 2e3}) {
      const auto T = nullspace_solver(kTable1, pose, T5, alpha);
      CHECK(residual(s.A_l, T, s.input.u) <= 1e-9 * std::max(s.input.u.norm(), 1.0));
      CHECK(base <= T.norm() + 1e-9);
    }
  }
}

TEST_CASE("oracle matches an independent interval computation") {
  testing::Rng rng(27);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto pose = testing::random_pose(rng, kRegion);
    const double T5 = rng.uniform(0, 6000);
    const auto s = planar_statics(kTable1, pose, T5);
    const auto range = feasible_alpha_interval(kTable1, pose, T5);
    const Eigen::Vector4d lo = Eigen::Vector4d::Zero();
    const Eigen::Vector4d hi(16000, 16000, 12000, 12000);
    // A wider and a narrower slack bracket the library's own slack.
    const auto wide = testing::reference_interval(s.A_l, s.input.u, lo, hi, 1e-3);
    const auto tight = testing::reference_interval(s.A_l, s.input.u, lo, hi, 0.0);
    if (!tight.empty()) CHECK_FALSE(range.empty());
    if (wide.empty()) CHECK(range.empty());
  }
}

TEST_CASE("candidate feasibility implies oracle feasibility") {
  testing::Rng rng(28);
  int feasible = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    const auto pose = testing::random_pose(rng, kRegion);
    const double T5 = rng.uniform(0, 6000);
    if (cost_rigid(kTable1, pose, T5).feasible_any) {
      ++feasible;
      CHECK(nullspace_oracle(kTable1, pose, T5));
    }
  }
  CHECK(feasible > 100);
}

TEST_CASE("oracle cases") {
  CHECK(nullspace_oracle(kTable1, PlatformPose::planar(0, 0), 0.0));
  CHECK_FALSE(nullspace_oracle(kTable1, PlatformPose::planar(0, 0), 20000.0));
  // With every anchor above the platform, a downward net load cannot be held.
  auto g = kTable1;
  g.anchors[2].y() = g.anchors[3].y() = 1.5;
  CHECK(equilibrium_input(g, PlatformPose::planar(0, 0), 1e6).u.y() < 0.0);
  CHECK_FALSE(nullspace_oracle(g, PlatformPose::planar(0, 0), 1e6, {false}));

  const auto pose = PlatformPose::planar(-12.4, 2.1);
  const auto s = planar_statics(kTable1, pose, 3000.0);
  const auto ref = testing::reference_interval(s.A_l, s.input.u, Eigen::Vector4d::Zero(),
                                               Eigen::Vector4d(16000, 16000, 12000, 12000), 1e-6);
  CHECK(nullspace_oracle(kTable1, pose, 3000.0) == !ref.empty());
  if (cost_rigid(kTable1, pose, 3000.0).feasible_any) CHECK_FALSE(ref.empty());
}

TEST_CASE("rank-deficient structure matrix") {
  auto g = kTable1;
  // Every cable through one point: no moment authority.
  for (auto& r : g.attachments) r = Vec3::Zero();
  CHECK_THROWS_AS(nullspace_split(g, PlatformPose::planar(0.3, 0.1), 0.0),
                  SingularConfigurationError);
  const auto c = candidate_tensions(g, PlatformPose::planar(0.3, 0.1), 0.0);
  for (const auto& sol : c) {
    CHECK_FALSE(sol.valid);
    CHECK_FALSE(sol.feasible);
  }
}

TEST_CASE("elastic cost approaches the rigid cost for stiff cables") {
  const auto stiff = with_elastic(kTable1, 1e15, 0.0, 1e6);
  testing::Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pose = testing::random_pose(rng, kRegion);
    const double T5 = rng.uniform(0, 6000);
    const auto a = cost_rigid(kTable1, pose, T5);
    const auto b = cost_elastic(stiff, pose, T5);
    CHECK(a.feasible_any == b.feasible_any);
    for (int k = 0; k < 4; ++k) CHECK(a.candidates[k].feasible == b.candidates[k].feasible);
  }
}

TEST_CASE("elastic length window") {
  CHECK_THROWS_AS(cost_elastic(kTable1, PlatformPose::planar(0, 0), 0.0), ConfigurationError);

  const auto too_short = with_elastic(kTable1, 5e6, 0.0, 0.1);
  testing::Rng rng(30);
  for (int trial = 0; trial < 200; ++trial)
    CHECK_FALSE(cost_elastic(too_short, testing::random_pose(rng, kRegion), 3000.0).feasible_any);

  // Stretch makes the unstretched length shorter than the pose length, so a
  // window starting exactly at the pose length rejects loaded cables.
  const auto pose = PlatformPose::planar(0, 0);
  const auto s = cable_state(kTable1, pose);
  auto g = with_elastic(kTable1, 5e6, 0.0, 100.0);
  CHECK(cost_elastic(g, pose, 3000.0).feasible_any);
  g.elastic->l0_min_m[0] = s.l_len[0];
  const auto r = cost_elastic(g, pose, 3000.0);
  for (const auto& c : r.candidates)
    if (c.T(0) > 1e-3) CHECK_FALSE(c.feasible);
}

TEST_CASE("dynamics residual") {
  const auto origin = PlatformPose::planar(0, 0);
  const Eigen::VectorXd zero4 = Eigen::VectorXd::Zero(4), zero2 = Eigen::VectorXd::Zero(2);
  Vector6d expected = Vector6d::Zero();
  expected(1) = 2943;
  CHECK(dynamics_residual(kTable1, origin, Vector6d::Zero(), Vector6d::Zero(), zero4, zero2) ==
        expected);

  testing::Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pose = testing::random_pose(rng, kRegion);
    const double T5 = rng.uniform(0, 6000);
    for (const auto& c : candidate_tensions(kTable1, pose, T5)) {
      if (!c.feasible) continue;
      const Eigen::VectorXd F = Eigen::VectorXd::Constant(2, T5);
      const auto r = dynamics_residual(kTable1, pose, Vector6d::Zero(), Vector6d::Zero(), c.T, F);
      CHECK(r.norm() <= 1e-9 * 2943);
    }
  }

  auto g = kTable1;
  g.platform_inertia = Eigen::Vector3d(2.0, 3.0, 5.0).asDiagonal();
  Vector6d spin = Vector6d::Zero();
  spin(5) = 1.7;
  const auto r = dynamics_residual(g, origin, spin, Vector6d::Zero(), zero4, zero2);
  CHECK(r == expected);

  Vector6d acc = Vector6d::Zero();
  acc(0) = 1.0;
  acc(5) = 2.0;
  const auto ra = dynamics_residual(g, origin, Vector6d::Zero(), acc, zero4, zero2);
  CHECK(ra(0) == 300.0);
  CHECK(ra(5) == 10.0);

  CHECK_THROWS_AS(dynamics_residual(g, origin, spin, acc, zero2, zero2), ValidationError);
}
